#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "pathforge/interp.hpp"
#include "pathforge/llm_bridge.hpp"
#include "pathforge/parser.hpp"

using namespace pathforge;
namespace fs = std::filesystem;

namespace {

bool have_solver() { return std::getenv("PATHFORGE_SOLVER") != nullptr; }

fs::path fresh_fixture_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("bridge-fixtures-" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_fixture(const fs::path& dir, const std::string& payload,
                   const std::string& responses_json) {
  std::ofstream os(dir / (request_hash(payload) + ".json"));
  os << "{\"responses\": " << responses_json << "}";
}

PathChunk one_line_chunk(const std::string& text) {
  PathChunk c;
  PathStep s;
  s.kind = StepKind::Expression;
  s.text = text;
  c.steps.push_back(s);
  return c;
}

const std::string kPrior =
    "(set-logic ALL)\n"
    "(set-option :produce-models true)\n"
    "(declare-const _n_0 (Array Int Int))\n"
    "(declare-const _n_0_len Int)\n"
    "(declare-const _x_0 Int)\n"
    "(assert (>= _n_0_len 0))\n";

const std::string kAppendFragment =
    "(declare-const _n_1 (Array Int Int))\n"
    "(declare-const _n_1_len Int)\n"
    "(assert (= _n_1 (store _n_0 _n_0_len _x_0)))\n"
    "(assert (= _n_1_len (+ _n_0_len 1)))";

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out;
}

}  // namespace

TEST_CASE("retrieval recalls every template from its own key") {
  TemplateStore store = TemplateStore::builtin();
  REQUIRE(store.templates.size() == 14);
  int rank1 = 0;
  for (const auto& t : store.templates) {
    auto top = retrieve(t.key_chunk, store, 1);
    REQUIRE(!top.empty());
    if (top[0].tmpl->id == t.id && top[0].score > 0.999) rank1++;
  }
  CHECK(rank1 == 14);
}

TEST_CASE("retrieval ranks list assignment above append for a store-shaped query") {
  TemplateStore store = TemplateStore::builtin();
  auto top = retrieve("a[j] = a[j] + 1", store, 14);
  size_t assign_rank = 99, append_rank = 99;
  for (size_t i = 0; i < top.size(); i++) {
    if (top[i].tmpl->id == "list-assignment") assign_rank = i;
    if (top[i].tmpl->id == "list-append") append_rank = i;
  }
  CHECK(assign_rank < append_rank);
}

TEST_CASE("retrieval is deterministic and k clamps to the store size") {
  TemplateStore store = TemplateStore::builtin();
  auto a = retrieve("n.pop()", store, 100);
  auto b = retrieve("n.pop()", store, 100);
  REQUIRE(a.size() == store.templates.size());
  for (size_t i = 0; i < a.size(); i++) {
    CHECK(a[i].tmpl->id == b[i].tmpl->id);
    CHECK(a[i].score == b[i].score);
  }
}

TEST_CASE("fragment accepted on the first attempt" * doctest::skip(!have_solver())) {
  BridgeConfig cfg;
  cfg.mode = BridgeMode::Replay;
  fs::path dir = fresh_fixture_dir("first-try");
  cfg.fixture_dir = dir.string();

  TemplateStore store = TemplateStore::builtin();
  PathChunk chunk = one_line_chunk("n.append(x)");
  std::map<std::string, int> env_in{{"n", 0}, {"x", 0}};
  std::string payload =
      translate_request_payload(chunk, env_in, kPrior, store, cfg);
  write_fixture(dir, payload,
                "[{\"smtlib\": \"" + json_escape(kAppendFragment) +
                    "\", \"env_out\": {\"n\": 1, \"x\": 0}}]");

  BridgeOutcome out = generate_fragment(chunk, env_in, kPrior, store, cfg,
                                        SolverConfig::from_environment());
  REQUIRE(std::holds_alternative<Fragment>(out));
  const Fragment& f = std::get<Fragment>(out);
  CHECK(f.attempts == 1);
  CHECK(f.env_out.at("n") == 1);
}

TEST_CASE("solver rejection triggers one refine, then acceptance" *
          doctest::skip(!have_solver())) {
  BridgeConfig cfg;
  cfg.mode = BridgeMode::Replay;
  fs::path dir = fresh_fixture_dir("refine");
  cfg.fixture_dir = dir.string();

  TemplateStore store = TemplateStore::builtin();
  PathChunk chunk = one_line_chunk("n.append(x)");
  std::map<std::string, int> env_in{{"n", 0}, {"x", 0}};
  std::string payload =
      translate_request_payload(chunk, env_in, kPrior, store, cfg);
  write_fixture(
      dir, payload,
      "[{\"smtlib\": \"(assert (list-magic _n_0))\"},\n"
      " {\"smtlib\": \"" + json_escape(kAppendFragment) +
          "\", \"env_out\": {\"n\": 1, \"x\": 0}}]");

  BridgeOutcome out = generate_fragment(chunk, env_in, kPrior, store, cfg,
                                        SolverConfig::from_environment());
  REQUIRE(std::holds_alternative<Fragment>(out));
  CHECK(std::get<Fragment>(out).attempts == 2);
}

TEST_CASE("three rejected candidates terminate the refine loop" *
          doctest::skip(!have_solver())) {
  BridgeConfig cfg;
  cfg.mode = BridgeMode::Replay;
  fs::path dir = fresh_fixture_dir("give-up");
  cfg.fixture_dir = dir.string();

  TemplateStore store = TemplateStore::builtin();
  PathChunk chunk = one_line_chunk("n.append(x)");
  std::map<std::string, int> env_in{{"n", 0}, {"x", 0}};
  std::string payload =
      translate_request_payload(chunk, env_in, kPrior, store, cfg);
  write_fixture(dir, payload,
                "[{\"smtlib\": \"(assert (str_from_int _x_0))\"},\n"
                " {\"smtlib\": \"(assert (int_to_str _x_0))\"},\n"
                " {\"smtlib\": \"(assert (make-string _x_0))\"}]");

  BridgeOutcome out = generate_fragment(chunk, env_in, kPrior, store, cfg,
                                        SolverConfig::from_environment());
  REQUIRE(std::holds_alternative<BridgeFailed>(out));
  CHECK(std::get<BridgeFailed>(out).attempts == 3);
}

TEST_CASE("direct solve returns a validated input") {
  const std::string src =
      "def f(x: int) -> int:\n"
      "    if x > 3:\n"
      "        return 1\n"
      "    return 0\n";
  SourceUnit u = parse_unit(src, "<test>");
  const FunctionDef& fn = u.functions.front();
  TypeEnv env = infer_types(fn);
  Cfg cfg = build_cfg(fn);
  augment_env(cfg, env);
  ExecutionPath path = enumerate_paths(cfg, {})[0];  // x > 3 taken

  BridgeConfig bc;
  bc.mode = BridgeMode::Replay;
  fs::path dir = fresh_fixture_dir("solve");
  bc.fixture_dir = dir.string();
  std::string payload = solve_request_payload(pretty_print(fn), fn, path);
  write_fixture(dir, payload, "[{\"args\": {\"x\": 4}}]");

  BridgeOutcome out = llm_solve(pretty_print(fn), fn, path, bc);
  REQUIRE(std::holds_alternative<FallbackInput>(out));
  const TestInput& input = std::get<FallbackInput>(out).input;
  PathVerdict v = path_verdict(cfg, env, {input.args[0].second}, path);
  CHECK(v.kind == PathVerdictKind::PathCorrect);
}

TEST_CASE("direct solve records an unsat claim") {
  const std::string src =
      "def f(x: int) -> int:\n"
      "    if x > 3:\n"
      "        return 1\n"
      "    return 0\n";
  SourceUnit u = parse_unit(src, "<test>");
  const FunctionDef& fn = u.functions.front();
  Cfg cfg = build_cfg(fn);
  ExecutionPath path = enumerate_paths(cfg, {})[1];

  BridgeConfig bc;
  bc.mode = BridgeMode::Replay;
  fs::path dir = fresh_fixture_dir("unsat-claim");
  bc.fixture_dir = dir.string();
  write_fixture(dir, solve_request_payload(pretty_print(fn), fn, path),
                "[{\"unsat\": true}]");
  BridgeOutcome out = llm_solve(pretty_print(fn), fn, path, bc);
  CHECK(std::holds_alternative<FallbackUnsat>(out));
}

TEST_CASE("two unparseable direct-solve payloads fail the bridge") {
  const std::string src =
      "def f(x: int) -> int:\n"
      "    return x\n";
  SourceUnit u = parse_unit(src, "<test>");
  const FunctionDef& fn = u.functions.front();
  Cfg cfg = build_cfg(fn);
  ExecutionPath path = enumerate_paths(cfg, {})[0];

  BridgeConfig bc;
  bc.mode = BridgeMode::Replay;
  fs::path dir = fresh_fixture_dir("garbled");
  bc.fixture_dir = dir.string();
  write_fixture(dir, solve_request_payload(pretty_print(fn), fn, path),
                "[{\"note\": \"cannot help\"}, {\"note\": \"still cannot\"}]");
  BridgeOutcome out = llm_solve(pretty_print(fn), fn, path, bc);
  REQUIRE(std::holds_alternative<BridgeFailed>(out));
  CHECK(std::get<BridgeFailed>(out).attempts == 2);
}

TEST_CASE("template store round-trips through its JSON file") {
  fs::path file = fs::temp_directory_path() / "templates-roundtrip.json";
  TemplateStore a = TemplateStore::builtin();
  {
    std::ofstream os(file);
    os << "{\"templates\": [";
    for (size_t i = 0; i < a.templates.size(); i++) {
      const Template& t = a.templates[i];
      if (i) os << ",";
      os << "{\"id\": \"" << t.id << "\", \"key_chunk\": \""
         << json_escape(t.key_chunk) << "\", \"ssa_env_in\": {";
      bool first = true;
      for (const auto& [k, v] : t.ssa_env_in) {
        if (!first) os << ",";
        first = false;
        os << "\"" << k << "\": " << v;
      }
      os << "}, \"target_constraints\": \"" << json_escape(t.target_constraints)
         << "\", \"ssa_env_out\": {";
      first = true;
      for (const auto& [k, v] : t.ssa_env_out) {
        if (!first) os << ",";
        first = false;
        os << "\"" << k << "\": " << v;
      }
      os << "}, \"notes\": \"" << json_escape(t.notes) << "\"}";
    }
    os << "]}";
  }
  TemplateStore b = TemplateStore::load(file.string());
  REQUIRE(b.templates.size() == a.templates.size());
  for (size_t i = 0; i < a.templates.size(); i++) {
    CHECK(b.templates[i].id == a.templates[i].id);
    CHECK(b.templates[i].target_constraints == a.templates[i].target_constraints);
  }
}
