#include "pathforge/llm_bridge.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <httplib.h>
#include <json.hpp>
#include <sstream>

namespace pathforge {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

BridgeConfig BridgeConfig::from_environment() {
  BridgeConfig cfg;
  if (const char* e = std::getenv("PATHFORGE_LLM_ENDPOINT")) cfg.endpoint = e;
  return cfg;
}

// ---------------------------------------------------------------------------
// Knowledge base

namespace {

Template make_template(std::string id, std::string key,
                       std::map<std::string, int> env_in, std::string target,
                       std::map<std::string, int> env_out, std::string notes) {
  return Template{std::move(id), std::move(key), std::move(env_in),
                  std::move(target), std::move(env_out), std::move(notes)};
}

}  // namespace

TemplateStore TemplateStore::builtin() {
  TemplateStore s;
  auto& t = s.templates;
  t.push_back(make_template(
      "list-init", "n1 = []", {{"n1", -1}},
      "(declare-const _n1_0 (Array Int Int))\n"
      "(declare-const _n1_0_len Int)\n"
      "(assert (>= _n1_0_len 0))",
      {{"n1", 0}}, "fresh list symbol with a non-negative length"));
  t.push_back(make_template(
      "list-length", "len(n) > 5", {{"n", 0}},
      "(assert (> _n_0_len 5))", {{"n", 0}},
      "len(x) reads the length symbol directly"));
  t.push_back(make_template(
      "list-index", "lst[i] == j", {{"lst", 1}, {"i", 0}, {"j", 0}},
      "(assert (= (select _lst_1 _i_0) _j_0))",
      {{"lst", 1}, {"i", 0}, {"j", 0}},
      "subscript read becomes a select"));
  t.push_back(make_template(
      "list-assignment", "a[j] = a[j] + 1", {{"a", 0}, {"j", 0}},
      "(declare-const _a_1 (Array Int Int))\n"
      "(declare-const _a_1_len Int)\n"
      "(assert (= _a_1 (store _a_0 _j_0 (+ (select _a_0 _j_0) 1))))\n"
      "(assert (= _a_1_len _a_0_len))",
      {{"a", 1}, {"j", 0}},
      "subscript write is a store; length is unchanged"));
  t.push_back(make_template(
      "list-append", "n.append(x)", {{"n", 0}, {"x", 0}},
      "(declare-const _n_1 (Array Int Int))\n"
      "(declare-const _n_1_len Int)\n"
      "(assert (= _n_1 (store _n_0 _n_0_len _x_0)))\n"
      "(assert (= _n_1_len (+ _n_0_len 1)))",
      {{"n", 1}, {"x", 0}},
      "store at the old length, then grow the length by one"));
  t.push_back(make_template(
      "list-pop", "n.pop()", {{"n", 0}},
      "(declare-const _n_1 (Array Int Int))\n"
      "(declare-const _n_1_len Int)\n"
      "(assert (> _n_0_len 0))\n"
      "(assert (= _n_1 _n_0))\n"
      "(assert (= _n_1_len (- _n_0_len 1)))",
      {{"n", 1}},
      "guard non-empty; the array is unchanged, only the length shrinks"));
  t.push_back(make_template(
      "list-negative-index", "lst[-2] == v", {{"lst", 0}, {"v", 0}},
      "(assert (>= (- 2) (- _lst_0_len)))\n"
      "(assert (= (select _lst_0 (- _lst_0_len 2)) _v_0))",
      {{"lst", 0}, {"v", 0}},
      "negative literal index counts back from the length"));
  t.push_back(make_template(
      "scalar-assignment", "x = y + 1", {{"x", 0}, {"y", 0}},
      "(declare-const _x_1 Int)\n"
      "(assert (= _x_1 (+ _y_0 1)))",
      {{"x", 1}, {"y", 0}},
      "plain assignment bumps the target's SSA index"));
  t.push_back(make_template(
      "arithmetic", "z = x * y - 3", {{"z", 0}, {"x", 0}, {"y", 0}},
      "(declare-const _z_1 Int)\n"
      "(assert (= _z_1 (- (* _x_0 _y_0) 3)))",
      {{"z", 1}, {"x", 0}, {"y", 0}},
      "numeric operators map one-to-one"));
  t.push_back(make_template(
      "comparison-negation", "not x >= 10", {{"x", 0}},
      "(assert (not (>= _x_0 10)))", {{"x", 0}},
      "guards on the not-taken branch are negated"));
  t.push_back(make_template(
      "boolean-connective", "x > 0 and y < 5", {{"x", 0}, {"y", 0}},
      "(assert (and (> _x_0 0) (< _y_0 5)))", {{"x", 0}, {"y", 0}},
      "and/or translate directly; short-circuit side effects need guarding"));
  t.push_back(make_template(
      "abs-call", "m = abs(d)", {{"m", 0}, {"d", 0}},
      "(declare-const _m_1 Int)\n"
      "(assert (= _m_1 (ite (< _d_0 0) (- _d_0) _d_0)))",
      {{"m", 1}, {"d", 0}},
      "abs unfolds to a sign test"));
  t.push_back(make_template(
      "floor-division", "q = a // b", {{"q", 0}, {"a", 0}, {"b", 0}},
      "(declare-const _q_1 Int)\n"
      "(assert (not (= _b_0 0)))\n"
      "(assert (ite (> _b_0 0)\n"
      "  (and (<= (* _q_1 _b_0) _a_0) (< _a_0 (+ (* _q_1 _b_0) _b_0)))\n"
      "  (and (< (+ (* _q_1 _b_0) _b_0) _a_0) (<= _a_0 (* _q_1 _b_0)))))",
      {{"q", 1}, {"a", 0}, {"b", 0}},
      "floor semantics need an interval constraint, not integer div"));
  t.push_back(make_template(
      "list-literal", "xs = [1, 2, 3]", {{"xs", -1}},
      "(declare-const _xs_0 (Array Int Int))\n"
      "(declare-const _xs_0_len Int)\n"
      "(assert (= (select _xs_0 0) 1))\n"
      "(assert (= (select _xs_0 1) 2))\n"
      "(assert (= (select _xs_0 2) 3))\n"
      "(assert (= _xs_0_len 3))",
      {{"xs", 0}},
      "element-wise stores plus an exact length"));
  return s;
}

namespace {

std::map<std::string, int> env_from_json(const ordered_json& j) {
  std::map<std::string, int> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = it.value().get<int>();
  return m;
}

ordered_json env_to_json(const std::map<std::string, int>& m) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

}  // namespace

TemplateStore TemplateStore::load(const std::string& json_path) {
  std::ifstream is(json_path);
  if (!is) throw std::runtime_error("cannot open template store: " + json_path);
  ordered_json j = ordered_json::parse(is);
  TemplateStore s;
  for (const auto& e : j.at("templates")) {
    Template t;
    t.id = e.at("id").get<std::string>();
    t.key_chunk = e.at("key_chunk").get<std::string>();
    t.ssa_env_in = env_from_json(e.at("ssa_env_in"));
    t.target_constraints = e.at("target_constraints").get<std::string>();
    t.ssa_env_out = env_from_json(e.at("ssa_env_out"));
    t.notes = e.value("notes", std::string());
    s.templates.push_back(std::move(t));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Retrieval

std::vector<std::string> tokenize_chunk(const std::string& text) {
  // Identifiers, numbers, and single punctuation characters. Punctuation
  // tokens let structural overlap ("a[j] =") count toward similarity.
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      i++;
    } else if (std::isalpha(c) || c == '_') {
      size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        j++;
      out.push_back(text.substr(i, j - i));
      i = j;
    } else if (std::isdigit(c)) {
      size_t j = i;
      while (j < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[j])) || text[j] == '.'))
        j++;
      out.push_back(text.substr(i, j - i));
      i = j;
    } else {
      out.push_back(std::string(1, text[i]));
      i++;
    }
  }
  return out;
}

std::string chunk_text_of(const PathChunk& chunk) {
  std::string s;
  for (const auto& step : chunk.steps) {
    if (!s.empty()) s += "\n";
    s += step.text;
  }
  return s;
}

namespace {

std::map<std::string, double> count_vector(const std::vector<std::string>& toks) {
  std::map<std::string, double> v;
  for (const auto& t : toks) v[t] += 1.0;
  double norm = 0;
  for (const auto& [k, c] : v) norm += c * c;
  norm = std::sqrt(norm);
  if (norm > 0)
    for (auto& [k, c] : v) c /= norm;
  return v;
}

double cosine(const std::map<std::string, double>& a,
              const std::map<std::string, double>& b) {
  double dot = 0;
  for (const auto& [k, c] : a) {
    auto it = b.find(k);
    if (it != b.end()) dot += c * it->second;
  }
  return dot;
}

}  // namespace

std::vector<ScoredTemplate> retrieve(const std::string& chunk_text,
                                     const TemplateStore& store, int k) {
  auto qv = count_vector(tokenize_chunk(chunk_text));
  std::vector<ScoredTemplate> scored;
  for (const auto& t : store.templates)
    scored.push_back({&t, cosine(qv, count_vector(tokenize_chunk(t.key_chunk)))});
  std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.tmpl->id < b.tmpl->id;
  });
  if (k >= 0 && static_cast<size_t>(k) < scored.size())
    scored.resize(static_cast<size_t>(k));
  return scored;
}

// ---------------------------------------------------------------------------
// Transport

std::string request_hash(const std::string& payload) {
  // FNV-1a, 64-bit.
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

namespace {

// A fixture file holds the ordered responses for one request, consumed one
// per attempt of the refine loop.
struct ResponseStream {
  std::vector<ordered_json> responses;
  size_t next = 0;

  bool exhausted() const { return next >= responses.size(); }
  ordered_json take() { return responses[next++]; }
};

ResponseStream load_fixture(const BridgeConfig& cfg, const std::string& payload) {
  fs::path file = fs::path(cfg.fixture_dir) / (request_hash(payload) + ".json");
  std::ifstream is(file);
  if (!is)
    throw TransportError("no replay fixture for request (expected " +
                         file.string() + ")");
  ordered_json j = ordered_json::parse(is);
  ResponseStream rs;
  for (const auto& r : j.at("responses")) rs.responses.push_back(r);
  return rs;
}

ordered_json live_request(const BridgeConfig& cfg, const ordered_json& payload);

// One logical conversation with the endpoint: in Replay mode the fixture for
// the opening request supplies every follow-up; in Live mode each turn is a
// fresh HTTP call.
struct Conversation {
  const BridgeConfig& cfg;
  std::optional<ResponseStream> replay;
  std::string opening_payload;

  ordered_json ask(const ordered_json& payload) {
    if (cfg.mode == BridgeMode::Replay) {
      if (!replay) {
        opening_payload = payload.dump();
        replay = load_fixture(cfg, opening_payload);
      }
      if (replay->exhausted())
        throw TransportError("replay fixture exhausted after " +
                             std::to_string(replay->next) + " responses");
      return replay->take();
    }
    if (cfg.mode == BridgeMode::Live) return live_request(cfg, payload);
    throw TransportError("bridge mode is Off");
  }
};

}  // namespace

namespace {

ordered_json build_translate_request(const PathChunk& chunk,
                                     const std::map<std::string, int>& env_in,
                                     const std::string& prior_script,
                                     const TemplateStore& store,
                                     const BridgeConfig& cfg) {
  std::string text = chunk_text_of(chunk);
  auto examples = retrieve(text, store, cfg.k);

  ordered_json req;
  req["op"] = "translate";
  req["chunk"] = text;
  req["env_in"] = env_to_json(env_in);
  // Only the script tail travels; the full prior script can be large.
  req["prior_tail"] =
      prior_script.size() > 400 ? prior_script.substr(prior_script.size() - 400)
                                : prior_script;
  ordered_json exs = ordered_json::array();
  for (const auto& st : examples) {
    ordered_json e;
    e["chunk"] = st.tmpl->key_chunk;
    e["env_in"] = env_to_json(st.tmpl->ssa_env_in);
    e["target"] = st.tmpl->target_constraints;
    e["env_out"] = env_to_json(st.tmpl->ssa_env_out);
    exs.push_back(e);
  }
  req["examples"] = exs;
  return req;
}

ordered_json build_solve_request(const std::string& fn_source,
                                 const FunctionDef& fn,
                                 const ExecutionPath& path) {
  ordered_json req;
  req["op"] = "solve";
  req["function"] = fn.name;
  req["source"] = fn_source;
  req["path"] = format_path(path);
  return req;
}

}  // namespace

std::string translate_request_payload(const PathChunk& chunk,
                                      const std::map<std::string, int>& env_in,
                                      const std::string& prior_script,
                                      const TemplateStore& store,
                                      const BridgeConfig& cfg) {
  return build_translate_request(chunk, env_in, prior_script, store, cfg).dump();
}

std::string solve_request_payload(const std::string& fn_source,
                                  const FunctionDef& fn,
                                  const ExecutionPath& path) {
  return build_solve_request(fn_source, fn, path).dump();
}

BridgeOutcome generate_fragment(const PathChunk& chunk,
                                const std::map<std::string, int>& env_in,
                                const std::string& prior_script,
                                const TemplateStore& store,
                                const BridgeConfig& cfg,
                                const SolverConfig& solver) {
  ordered_json req = build_translate_request(chunk, env_in, prior_script, store, cfg);
  Conversation conv{cfg};
  std::string last_error;
  int attempts = 0;
  while (attempts < 1 + cfg.max_refine) {
    ordered_json payload = req;
    if (!last_error.empty()) {
      payload["op"] = "refine";
      payload["solver_error"] = last_error;
    }
    ordered_json resp;
    try {
      resp = conv.ask(payload);
    } catch (const TransportError& ex) {
      if (attempts == 0) throw;  // no fixture/endpoint at all
      return BridgeFailed{ex.what(), attempts};
    }
    attempts++;

    if (!resp.contains("smtlib")) {
      last_error = "response lacks an smtlib field";
      continue;
    }
    std::string fragment = resp["smtlib"].get<std::string>();
    std::string combined = prior_script + "\n" + fragment + "\n(check-sat)\n";
    RawSolveResult check = solve_text(combined, solver);
    bool rejected = std::holds_alternative<SolverFailure>(check.verdict) ||
                    !check.error_text.empty();
    if (rejected) {
      last_error = !check.error_text.empty()
                       ? check.error_text
                       : std::get<SolverFailure>(check.verdict).stderr_excerpt;
      continue;
    }
    Fragment out;
    out.smtlib = fragment;
    out.env_out = resp.contains("env_out") ? env_from_json(resp["env_out"]) : env_in;
    out.attempts = attempts;
    return out;
  }
  return BridgeFailed{"solver rejected every candidate fragment: " + last_error,
                      attempts};
}

BridgeOutcome llm_solve(const std::string& fn_source, const FunctionDef& fn,
                        const ExecutionPath& path, const BridgeConfig& cfg) {
  ordered_json req = build_solve_request(fn_source, fn, path);
  Conversation conv{cfg};
  int attempts = 0;
  std::string last_error;
  // Malformed payloads get exactly one re-prompt.
  while (attempts < 2) {
    ordered_json payload = req;
    if (!last_error.empty()) payload["error"] = last_error;
    ordered_json resp;
    try {
      resp = conv.ask(payload);
    } catch (const TransportError& ex) {
      if (attempts == 0) throw;
      return BridgeFailed{ex.what(), attempts};
    }
    attempts++;

    if (resp.contains("unsat") && resp["unsat"].is_boolean() &&
        resp["unsat"].get<bool>())
      return FallbackUnsat{};
    if (resp.contains("args") && resp["args"].is_object()) {
      TestInput input;
      bool ok = true;
      for (const auto& p : fn.params) {
        if (!resp["args"].contains(p.name)) {
          ok = false;
          break;
        }
        const ordered_json& v = resp["args"][p.name];
        if (v.is_boolean())
          input.args.emplace_back(p.name, ConcreteValue::of_bool(v.get<bool>()));
        else if (v.is_number_integer())
          input.args.emplace_back(p.name, ConcreteValue::of_int(v.get<long long>()));
        else if (v.is_number_float())
          input.args.emplace_back(p.name, ConcreteValue::of_float(v.get<double>()));
        else if (v.is_array()) {
          std::vector<ConcreteValue> xs;
          for (const auto& e : v) {
            if (e.is_number_integer())
              xs.push_back(ConcreteValue::of_int(e.get<long long>()));
            else if (e.is_number_float())
              xs.push_back(ConcreteValue::of_float(e.get<double>()));
            else if (e.is_boolean())
              xs.push_back(ConcreteValue::of_bool(e.get<bool>()));
            else
              ok = false;
          }
          input.args.emplace_back(p.name, ConcreteValue::of_list(std::move(xs)));
        } else {
          ok = false;
        }
        if (!ok) break;
      }
      if (ok && input.args.size() == fn.params.size())
        return FallbackInput{std::move(input)};
    }
    last_error = "response is neither an argument map nor an unsat claim";
  }
  return BridgeFailed{last_error, attempts};
}

// ---------------------------------------------------------------------------
// Live transport (kept out of the default build path; Replay is what CI runs)

namespace {

ordered_json live_request(const BridgeConfig& cfg, const ordered_json& payload) {
  std::string endpoint = cfg.endpoint;
  if (const char* e = std::getenv("PATHFORGE_LLM_ENDPOINT")) endpoint = e;
  if (endpoint.empty())
    throw TransportError("live mode needs an endpoint (PATHFORGE_LLM_ENDPOINT)");

  // Split scheme://host[:port]/path.
  std::string rest = endpoint;
  auto scheme_end = rest.find("://");
  if (scheme_end != std::string::npos) rest = rest.substr(scheme_end + 3);
  auto slash = rest.find('/');
  std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : rest.substr(slash);

  httplib::Client client(host);
  client.set_read_timeout(60, 0);
  httplib::Headers headers;
  if (const char* key = std::getenv(cfg.api_key_env.c_str()))
    headers.emplace("Authorization", std::string("Bearer ") + key);

  ordered_json body = payload;
  if (!cfg.model.empty()) body["model"] = cfg.model;
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res)
    throw TransportError("endpoint request failed: " +
                         httplib::to_string(res.error()));
  if (res->status != 200)
    throw TransportError("endpoint returned status " + std::to_string(res->status));
  return ordered_json::parse(res->body);
}

}  // namespace

}  // namespace pathforge
