"""Smoke tests for the python bindings: each exposed operation is exercised
once on a small function; the end-to-end solve runs only when a solver is
configured via PATHFORGE_SOLVER."""

import os

import pytest

import pathforge

SRC = """\
def clamp(x: int, lo: int, hi: int) -> int:
    if x < lo:
        return lo
    if x > hi:
        return hi
    return x
"""

LIST_SRC = """\
def first_large(n: list[int]) -> int:
    if len(n) > 2:
        return n[0]
    return 0
"""


def test_functions():
    assert pathforge.functions(SRC) == ["clamp"]


def test_infer_types():
    types = pathforge.infer_types(SRC)
    assert types["x"] == "int"
    assert pathforge.infer_types(LIST_SRC)["n"] == "List[int]"


def test_paths():
    paths = pathforge.paths(SRC)
    # x < lo; else x > hi; else fall through.
    assert len(paths) == 3
    assert all(p["id"].startswith("clamp:") for p in paths)
    assert not any(p["truncated"] for p in paths)


def test_run():
    r = pathforge.run(SRC, [7, 0, 5])
    assert r["outcome"] == "returned"
    assert r["value"] == 5
    assert "->taken" in r["trace"]


def test_translate():
    smt = pathforge.translate(LIST_SRC, 0)
    assert "(declare-const _n_0 (Array Int Int))" in smt
    assert "(declare-const _n_0_len Int)" in smt
    assert "(assert (> _n_0_len 2))" in smt


def test_translate_rejects_bad_index():
    with pytest.raises(IndexError):
        pathforge.translate(SRC, 99)


@pytest.mark.skipif(
    not os.environ.get("PATHFORGE_SOLVER"), reason="no solver configured"
)
def test_solve_path_end_to_end():
    r = pathforge.solve_path(LIST_SRC, 0)
    assert r["solver_verdict"] == "sat"
    assert r["test_verdict"] == "PathCorrect"
    assert len(r["input"]["n"]) > 2
