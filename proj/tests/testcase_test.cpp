#include <doctest.h>

#include "pathforge/harness.hpp"
#include "pathforge/parser.hpp"
#include "pathforge/testcase.hpp"

using namespace pathforge;

namespace {

struct Prog {
  FunctionDef fn;
  TypeEnv env;
  Cfg cfg;
  std::vector<ExecutionPath> paths;
  SmtScript script;  // for paths[0]
};

Prog load(const std::string& src, size_t path_index = 0) {
  Prog p;
  SourceUnit u = parse_unit(src, "<test>");
  p.fn = u.functions.front();
  p.env = infer_types(p.fn);
  p.cfg = build_cfg(p.fn);
  augment_env(p.cfg, p.env);
  p.paths = enumerate_paths(p.cfg, {});
  auto outcome = translate_path(p.paths[path_index], p.cfg, p.env, p.fn);
  REQUIRE(outcome.ok());
  p.script = outcome.script();
  return p;
}

}  // namespace

TEST_CASE("array plus length decodes to a list") {
  Prog p = load(
      "def sortedSquares(n: list[int]) -> int:\n"
      "    return len(n)\n");
  Model m;
  m.bindings["_n_0"] =
      Value::of_array(Value::of_int(0), {{2, Value::of_int(3)}});
  m.bindings["_n_0_len"] = Value::of_int(4);
  TestInput input = decode_model(m, p.env, p.script);
  REQUIRE(input.args.size() == 1);
  CHECK(input.args[0].second ==
        ConcreteValue::of_list({ConcreteValue::of_int(0), ConcreteValue::of_int(0),
                                ConcreteValue::of_int(3), ConcreteValue::of_int(0)}));
}

TEST_CASE("length zero decodes to the empty list") {
  Prog p = load(
      "def f(n: list[int]) -> int:\n"
      "    return len(n)\n");
  Model m;
  m.bindings["_n_0"] =
      Value::of_array(Value::of_int(9), {{0, Value::of_int(1)}});
  m.bindings["_n_0_len"] = Value::of_int(0);
  TestInput input = decode_model(m, p.env, p.script);
  CHECK(input.args[0].second == ConcreteValue::of_list({}));
}

TEST_CASE("stores beyond the length are ignored") {
  Prog p = load(
      "def f(n: list[int]) -> int:\n"
      "    return len(n)\n");
  Model m;
  m.bindings["_n_0"] =
      Value::of_array(Value::of_int(0), {{0, Value::of_int(1)}, {5, Value::of_int(9)}});
  m.bindings["_n_0_len"] = Value::of_int(2);
  TestInput input = decode_model(m, p.env, p.script);
  CHECK(input.args[0].second ==
        ConcreteValue::of_list({ConcreteValue::of_int(1), ConcreteValue::of_int(0)}));
}

TEST_CASE("missing scalar parameters default to zero") {
  Prog p = load(
      "def f(a: int, b: float) -> int:\n"
      "    return a\n");
  Model empty;
  TestInput input = decode_model(empty, p.env, p.script);
  CHECK(input.args[0].second == ConcreteValue::of_int(0));
  CHECK(input.args[1].second == ConcreteValue::of_float(0.0));
}

TEST_CASE("negative length is a decode error") {
  Prog p = load(
      "def f(n: list[int]) -> int:\n"
      "    return len(n)\n");
  Model m;
  m.bindings["_n_0_len"] = Value::of_int(-1);
  CHECK_THROWS_AS(decode_model(m, p.env, p.script), DecodeError);
}

TEST_CASE("artifact snippet renders a positional call") {
  Prog p = load(
      "def sortedSquares(n: list[int]) -> int:\n"
      "    return len(n)\n");
  TestInput input;
  input.args.emplace_back(
      "n", ConcreteValue::of_list({ConcreteValue::of_int(0), ConcreteValue::of_int(0),
                                   ConcreteValue::of_int(3), ConcreteValue::of_int(0)}));
  TestArtifact a = emit_artifact(input, p.fn, p.paths[0]);
  CHECK(a.snippet == "sortedSquares([0, 0, 3, 0])");
}

TEST_CASE("float literals render exactly") {
  CHECK(render_literal(ConcreteValue::of_float(0.5)) == "0.5");
  CHECK(render_literal(ConcreteValue::of_float(2.0)) == "2.0");
  CHECK(render_literal(ConcreteValue::of_bool(true)) == "True");
}

TEST_CASE("artifact records round-trip through serialization") {
  TestArtifact a;
  a.function = "f";
  a.file = "f.py";
  a.input.args.emplace_back("n", ConcreteValue::of_list({ConcreteValue::of_int(-2)}));
  a.input.args.emplace_back("x", ConcreteValue::of_float(0.5));
  a.path_id = "f:TF";
  a.verdict = "PathCorrect";
  a.snippet = "f([-2], 0.5)";
  std::string once = artifact_to_json(a);
  std::string twice = artifact_to_json(artifact_from_json(once));
  CHECK(once == twice);
}

TEST_CASE("report cells use one-decimal percentages") {
  CHECK(format_cell(70, 111) == "70 (63.1%)");
  CHECK(format_cell(99, 111) == "99 (89.2%)");
  CHECK(format_cell(97, 111) == "97 (87.4%)");
  CHECK(format_cell(0, 0) == "0 (0.0%)");
}

TEST_CASE("report aggregates are recomputed from records") {
  RunReport r;
  PathRecord a;
  a.solver_verdict = "sat";
  a.test_verdict = "PathCorrect";
  a.wall_ms = 10;
  PathRecord b;
  b.solver_verdict = "sat";
  b.test_verdict = "ExecutionPassOnly";
  b.wall_ms = 30;
  PathRecord c;
  c.solver_verdict = "unsat";
  r.records = {a, b, c};
  ReportTotals t = r.totals();
  CHECK(t.paths == 3);
  CHECK(t.sat == 2);
  CHECK(t.unsat == 1);
  CHECK(t.execution_pass == 2);
  CHECK(t.path_correct == 1);
  // Per-record monotonicity of the verdict ladder.
  for (const auto& rec : r.records) {
    if (rec.test_verdict == "PathCorrect")
      CHECK(rec.solver_verdict == "sat");
  }
  RunReport round = report_from_json(report_to_json(r));
  CHECK(report_to_json(round) == report_to_json(r));
}
