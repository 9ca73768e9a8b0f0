"""Symbolic path exploration for a statically analyzable Python subset."""

from _pathforge import functions, infer_types, paths, run, solve_path, translate

__all__ = ["functions", "infer_types", "paths", "run", "solve_path", "translate"]
