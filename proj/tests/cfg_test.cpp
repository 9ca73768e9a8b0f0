#include <doctest.h>

#include "pathforge/cfg.hpp"
#include "pathforge/interp.hpp"
#include "pathforge/parser.hpp"

using namespace pathforge;

namespace {

struct Prog {
  FunctionDef fn;
  TypeEnv env;
  Cfg cfg;
};

Prog load(const std::string& src) {
  Prog p;
  SourceUnit u = parse_unit(src, "<test>");
  p.fn = u.functions.front();
  p.env = infer_types(p.fn);
  p.cfg = build_cfg(p.fn);
  augment_env(p.cfg, p.env);
  return p;
}

const std::string kTwoBranch =
    "def f(x: int) -> int:\n"
    "    if x > 3:\n"
    "        return 1\n"
    "    return 0\n";

const std::string kLoop =
    "def f(n: list[int]) -> int:\n"
    "    total = 0\n"
    "    i = 0\n"
    "    while i < len(n):\n"
    "        total = total + n[i]\n"
    "        i = i + 1\n"
    "    return total\n";

}  // namespace

TEST_CASE("two-branch function yields exactly two paths") {
  Prog p = load(kTwoBranch);
  auto paths = enumerate_paths(p.cfg, {});
  REQUIRE(paths.size() == 2);
  // Hand enumeration: true branch first (successor ordering is true, false).
  CHECK(paths[0].steps[1].branch_taken == true);
  CHECK(paths[1].steps[1].branch_taken == false);
}

TEST_CASE("loop path count follows the iteration bound") {
  Prog p = load(kLoop);
  // Hand count: 0, 1, 2, or 3 iterations -> 4 paths.
  auto paths = enumerate_paths(p.cfg, {});
  CHECK(paths.size() == 4);
  PathBounds one;
  one.max_loop_iterations = 1;
  CHECK(enumerate_paths(p.cfg, one).size() == 2);
}

TEST_CASE("loop guard visits carry cumulative iteration tags") {
  Prog p = load(kLoop);
  auto paths = enumerate_paths(p.cfg, {});
  const ExecutionPath& two = paths[2];  // two iterations
  std::vector<int> tags;
  for (const auto& s : two.steps)
    if (s.loop_iteration) tags.push_back(*s.loop_iteration);
  CHECK(tags == std::vector<int>{1, 2, 3});
}

TEST_CASE("nested branches multiply paths") {
  Prog p = load(
      "def f(a: int, b: int) -> int:\n"
      "    r = 0\n"
      "    if a > 0:\n"
      "        r = r + 1\n"
      "    if b > 0:\n"
      "        r = r + 2\n"
      "    return r\n");
  CHECK(enumerate_paths(p.cfg, {}).size() == 4);
}

TEST_CASE("max_paths caps enumeration") {
  Prog p = load(kLoop);
  PathBounds b;
  b.max_paths = 3;
  CHECK(enumerate_paths(p.cfg, b).size() == 3);
}

TEST_CASE("for range desugars with a synthetic increment") {
  Prog p = load(
      "def f(k: int) -> int:\n"
      "    s = 0\n"
      "    for i in range(k):\n"
      "        s = s + i\n"
      "    return s\n");
  bool has_synthetic_increment = false;
  for (const auto& n : p.cfg.nodes)
    if (n.synthetic && n.action.kind == NodeAction::Kind::Assign &&
        n.action.target.name == "i")
      has_synthetic_increment = true;
  CHECK(has_synthetic_increment);
}

TEST_CASE("interpreter trace aligns to itself") {
  Prog p = load(kLoop);
  RunResult rr = run(p.cfg, p.env, {ConcreteValue::of_list(
                                       {ConcreteValue::of_int(2),
                                        ConcreteValue::of_int(5)})});
  CHECK(rr.outcome == RunResult::Outcome::Returned);
  CHECK(rr.value == ConcreteValue::of_int(7));

  std::vector<int> lines;
  for (const auto& s : rr.trace.steps) lines.push_back(s.line);
  auto aligned = align_trace(p.cfg, lines);
  REQUIRE(std::holds_alternative<ExecutionPath>(aligned));
  CHECK(format_path(std::get<ExecutionPath>(aligned)) == format_path(rr.trace));
}

TEST_CASE("alignment rejects traces that fit no walk") {
  Prog p = load(kTwoBranch);
  auto aligned = align_trace(p.cfg, {1, 4, 3});
  REQUIRE(std::holds_alternative<AlignError>(aligned));
  CHECK(std::get<AlignError>(aligned).kind == AlignError::Kind::NoMatch);
}

TEST_CASE("every enumerated path is realized or refuted by brute force") {
  Prog p = load(kTwoBranch);
  for (const auto& path : enumerate_paths(p.cfg, {})) {
    BruteForceResult r = brute_force(p.cfg, p.env, path);
    CHECK(r.kind == BruteForceResult::Kind::FoundInput);
    PathVerdict v = path_verdict(p.cfg, p.env, r.args, path);
    CHECK(v.kind == PathVerdictKind::PathCorrect);
  }
}

TEST_CASE("interpreter floor semantics match Python") {
  Prog p = load(
      "def f(a: int, b: int) -> int:\n"
      "    return a // b\n");
  auto call = [&](long long a, long long b) {
    RunResult rr =
        run(p.cfg, p.env, {ConcreteValue::of_int(a), ConcreteValue::of_int(b)});
    REQUIRE(rr.outcome == RunResult::Outcome::Returned);
    return rr.value->i;
  };
  CHECK(call(7, 2) == 3);
  CHECK(call(7, -2) == -4);
  CHECK(call(-7, 2) == -4);
  CHECK(call(-7, -2) == 3);
}

TEST_CASE("interpreter raises IndexError and ZeroDivisionError") {
  Prog p1 = load(
      "def f(n: list[int]) -> int:\n"
      "    return n[5]\n");
  RunResult r1 = run(p1.cfg, p1.env, {ConcreteValue::of_list({})});
  CHECK(r1.outcome == RunResult::Outcome::IndexError);

  Prog p2 = load(
      "def f(a: float) -> float:\n"
      "    return a / 0.0\n");
  RunResult r2 = run(p2.cfg, p2.env, {ConcreteValue::of_float(1.0)});
  CHECK(r2.outcome == RunResult::Outcome::ZeroDivisionError);
}

TEST_CASE("short-circuit evaluation protects the right operand") {
  Prog p = load(
      "def f(n: list[int], i: int) -> int:\n"
      "    if i < len(n) and n[i] > 0:\n"
      "        return 1\n"
      "    return 0\n");
  RunResult rr = run(p.cfg, p.env,
                     {ConcreteValue::of_list({}), ConcreteValue::of_int(4)});
  CHECK(rr.outcome == RunResult::Outcome::Returned);
  CHECK(rr.value == ConcreteValue::of_int(0));
}

TEST_CASE("negative indices wrap") {
  Prog p = load(
      "def f(n: list[int]) -> int:\n"
      "    return n[-1]\n");
  RunResult rr = run(p.cfg, p.env,
                     {ConcreteValue::of_list({ConcreteValue::of_int(3),
                                              ConcreteValue::of_int(9)})});
  CHECK(rr.value == ConcreteValue::of_int(9));
}

TEST_CASE("chunking by line and by condition") {
  Prog p = load(kLoop);
  auto paths = enumerate_paths(p.cfg, {});
  const ExecutionPath& path = paths[1];
  auto by_line = chunk_path(path, ChunkStrategy::ByLine);
  CHECK(by_line.size() == path.steps.size());
  auto by_cond = chunk_path(path, ChunkStrategy::ByCondition);
  CHECK(by_cond.size() < by_line.size());
  size_t total = 0;
  for (const auto& c : by_cond) total += c.steps.size();
  CHECK(total == path.steps.size());
}
