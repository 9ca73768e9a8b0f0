#include <doctest.h>

#include "pathforge/parser.hpp"
#include "pathforge/solver.hpp"
#include "pathforge/translate.hpp"

using namespace pathforge;

namespace {

std::string emit_for(const std::string& src, size_t path_index = 0) {
  SourceUnit u = parse_unit(src, "<test>");
  const FunctionDef& fn = u.functions.front();
  TypeEnv env = infer_types(fn);
  Cfg cfg = build_cfg(fn);
  augment_env(cfg, env);
  auto paths = enumerate_paths(cfg, {});
  REQUIRE(path_index < paths.size());
  auto outcome = translate_path(paths[path_index], cfg, env, fn);
  REQUIRE(outcome.ok());
  return emit_smtlib(outcome.script());
}

SmtScript script_for(const std::string& src, size_t path_index = 0) {
  SourceUnit u = parse_unit(src, "<test>");
  const FunctionDef& fn = u.functions.front();
  TypeEnv env = infer_types(fn);
  Cfg cfg = build_cfg(fn);
  augment_env(cfg, env);
  auto paths = enumerate_paths(cfg, {});
  REQUIRE(path_index < paths.size());
  auto outcome = translate_path(paths[path_index], cfg, env, fn);
  REQUIRE(outcome.ok());
  return outcome.script();
}

}  // namespace

// Golden snapshots for the seven list-operation encodings. Byte-exact: any
// change to symbol naming, ordering, or term rendering fails here.
TEST_CASE("golden: list initialization") {
  CHECK(emit_for("def func(n1: list[int]) -> int:\n"
                 "    return len(n1)\n") ==
        "(set-logic ALL)\n"
        "(set-option :produce-models true)\n"
        "(declare-const _n1_0 (Array Int Int))\n"
        "(declare-const _n1_0_len Int)\n"
        "(assert (>= _n1_0_len 0))\n"
        "(check-sat)\n(get-model)\n");
}

TEST_CASE("golden: list length") {
  CHECK(emit_for("def f(n: list[int]) -> int:\n"
                 "    if len(n) > 5:\n"
                 "        return 1\n"
                 "    return 0\n") ==
        "(set-logic ALL)\n"
        "(set-option :produce-models true)\n"
        "(declare-const _n_0 (Array Int Int))\n"
        "(declare-const _n_0_len Int)\n"
        "(assert (>= _n_0_len 0))\n"
        "(assert (> _n_0_len 5))\n"
        "(check-sat)\n(get-model)\n");
}

TEST_CASE("golden: list indexing") {
  CHECK(emit_for("def f(lst: list[int], i: int, j: int) -> int:\n"
                 "    lst[0] = 1\n"
                 "    if lst[i] == j:\n"
                 "        return 1\n"
                 "    return 0\n") ==
        "(set-logic ALL)\n"
        "(set-option :produce-models true)\n"
        "(declare-const _lst_0 (Array Int Int))\n"
        "(declare-const _lst_0_len Int)\n"
        "(declare-const _i_0 Int)\n"
        "(declare-const _j_0 Int)\n"
        "(declare-const _lst_1 (Array Int Int))\n"
        "(declare-const _lst_1_len Int)\n"
        "(assert (>= _lst_0_len 0))\n"
        "(assert (<= 0 0))\n"
        "(assert (< 0 _lst_0_len))\n"
        "(assert (= _lst_1 (store _lst_0 0 1)))\n"
        "(assert (= _lst_1_len _lst_0_len))\n"
        "(assert (<= 0 _i_0))\n"
        "(assert (< _i_0 _lst_1_len))\n"
        "(assert (= (select _lst_1 _i_0) _j_0))\n"
        "(check-sat)\n(get-model)\n");
}

TEST_CASE("golden: list assignment keeps the length") {
  CHECK(emit_for("def f(lst: list[int], i: int) -> int:\n"
                 "    lst[i] = 2\n"
                 "    return 0\n") ==
        "(set-logic ALL)\n"
        "(set-option :produce-models true)\n"
        "(declare-const _lst_0 (Array Int Int))\n"
        "(declare-const _lst_0_len Int)\n"
        "(declare-const _i_0 Int)\n"
        "(declare-const _lst_1 (Array Int Int))\n"
        "(declare-const _lst_1_len Int)\n"
        "(assert (>= _lst_0_len 0))\n"
        "(assert (<= 0 _i_0))\n"
        "(assert (< _i_0 _lst_0_len))\n"
        "(assert (= _lst_1 (store _lst_0 _i_0 2)))\n"
        "(assert (= _lst_1_len _lst_0_len))\n"
        "(check-sat)\n(get-model)\n");
}

TEST_CASE("golden: list append grows the length by one") {
  CHECK(emit_for("def f(n: list[int], x: int) -> int:\n"
                 "    n.append(x)\n"
                 "    return 0\n") ==
        "(set-logic ALL)\n"
        "(set-option :produce-models true)\n"
        "(declare-const _n_0 (Array Int Int))\n"
        "(declare-const _n_0_len Int)\n"
        "(declare-const _x_0 Int)\n"
        "(declare-const _n_1 (Array Int Int))\n"
        "(declare-const _n_1_len Int)\n"
        "(assert (>= _n_0_len 0))\n"
        "(assert (= _n_1 (store _n_0 _n_0_len _x_0)))\n"
        "(assert (= _n_1_len (+ _n_0_len 1)))\n"
        "(check-sat)\n(get-model)\n");
}

TEST_CASE("golden: list pop guards non-emptiness") {
  CHECK(emit_for("def f(n: list[int]) -> int:\n"
                 "    n.pop()\n"
                 "    return 0\n") ==
        "(set-logic ALL)\n"
        "(set-option :produce-models true)\n"
        "(declare-const _n_0 (Array Int Int))\n"
        "(declare-const _n_0_len Int)\n"
        "(declare-const _n_1 (Array Int Int))\n"
        "(declare-const _n_1_len Int)\n"
        "(assert (>= _n_0_len 0))\n"
        "(assert (> _n_0_len 0))\n"
        "(assert (= _n_1 _n_0))\n"
        "(assert (= _n_1_len (- _n_0_len 1)))\n"
        "(check-sat)\n(get-model)\n");
}

TEST_CASE("golden: negative index counts from the length") {
  CHECK(emit_for("def f(lst: list[int], z: int) -> int:\n"
                 "    if lst[-2] == z:\n"
                 "        return 1\n"
                 "    return 0\n") ==
        "(set-logic ALL)\n"
        "(set-option :produce-models true)\n"
        "(declare-const _lst_0 (Array Int Int))\n"
        "(declare-const _lst_0_len Int)\n"
        "(declare-const _z_0 Int)\n"
        "(assert (>= _lst_0_len 0))\n"
        "(assert (>= (- 2) (- _lst_0_len)))\n"
        "(assert (= (select _lst_0 (- _lst_0_len 2)) _z_0))\n"
        "(check-sat)\n(get-model)\n");
}

TEST_CASE("translation is deterministic") {
  const std::string src =
      "def f(n: list[int]) -> int:\n"
      "    t = 0\n"
      "    i = 0\n"
      "    while i < len(n):\n"
      "        t = t + n[i]\n"
      "        i = i + 1\n"
      "    return t\n";
  CHECK(emit_for(src, 2) == emit_for(src, 2));
}

TEST_CASE("ssa indices never run ahead of their definition point") {
  const char* sources[] = {
      "def f(n: list[int]) -> int:\n"
      "    t = 0\n"
      "    for x in n:\n"
      "        t = t + x\n"
      "    return t\n",
      "def g(a: int) -> int:\n"
      "    a = a + 1\n"
      "    a = a * 2\n"
      "    a = a - 3\n"
      "    return a\n",
  };
  for (const char* src : sources) {
    SourceUnit u = parse_unit(src, "<test>");
    const FunctionDef& fn = u.functions.front();
    TypeEnv env = infer_types(fn);
    Cfg cfg = build_cfg(fn);
    augment_env(cfg, env);
    for (const auto& path : enumerate_paths(cfg, {})) {
      auto outcome = translate_path(path, cfg, env, fn);
      REQUIRE(outcome.ok());
      std::string offending;
      CHECK_MESSAGE(ssa_indices_consistent(outcome.script(), &offending),
                    offending);
    }
  }
}

TEST_CASE("reassignment chains bump indices one at a time") {
  SmtScript s = script_for(
      "def g(a: int) -> int:\n"
      "    a = a + 1\n"
      "    a = a * 2\n"
      "    return a\n");
  std::vector<std::string> names;
  for (const auto& d : s.decls) names.push_back(d.name);
  CHECK(names == std::vector<std::string>{"_a_0", "_a_1", "_a_2"});
}

TEST_CASE("guards on the not-taken branch are negated") {
  std::string taken = emit_for(
      "def f(x: int) -> int:\n"
      "    if x > 3:\n"
      "        return 1\n"
      "    return 0\n",
      0);
  std::string not_taken = emit_for(
      "def f(x: int) -> int:\n"
      "    if x > 3:\n"
      "        return 1\n"
      "    return 0\n",
      1);
  CHECK(taken.find("(assert (> _x_0 3))") != std::string::npos);
  CHECK(not_taken.find("(assert (not (> _x_0 3)))") != std::string::npos);
}

TEST_CASE("side constraints inside short-circuit operands are guarded") {
  // `i < len(n) and n[i] > 0`: the index bound on n[i] only applies when the
  // left operand holds.
  std::string s = emit_for(
      "def f(n: list[int], i: int) -> int:\n"
      "    if i < len(n) and n[i] > 0:\n"
      "        return 1\n"
      "    return 0\n",
      1);
  CHECK(s.find("(assert (=> (< _i_0 _n_0_len) (<= 0 _i_0)))") != std::string::npos);
}

TEST_CASE("true division emits reals with a nonzero divisor") {
  std::string s = emit_for(
      "def f(a: float, b: float) -> float:\n"
      "    c = a / b\n"
      "    return c\n");
  CHECK(s.find("(declare-const _c_0 Real)") != std::string::npos);
  CHECK(s.find("(assert (not (= _b_0 0.0)))") != std::string::npos);
}

TEST_CASE("paths lacking entry state fail instead of translating") {
  // Every in-subset construct translates, so the failure mode exercised
  // here is a path whose steps read a variable with no SSA state: a real
  // path with its Enter step stripped.
  SourceUnit u = parse_unit(
      "def f(x: int) -> int:\n"
      "    return x\n",
      "<test>");
  const FunctionDef& fn = u.functions.front();
  TypeEnv env = infer_types(fn);
  Cfg cfg = build_cfg(fn);
  auto paths = enumerate_paths(cfg, {});
  REQUIRE(!paths.empty());
  ExecutionPath bogus = paths.front();
  REQUIRE(bogus.steps.size() >= 2);
  REQUIRE(bogus.steps.front().kind == StepKind::Enter);
  bogus.steps.erase(bogus.steps.begin());
  auto outcome = translate_path(bogus, cfg, env, fn);
  CHECK(!outcome.ok());
}
