#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pathforge/cfg.hpp"
#include "pathforge/solver.hpp"
#include "pathforge/testcase.hpp"

namespace pathforge {

// One knowledge-base entry: a path chunk paired with the constraint fragment
// it translates to, plus the SSA environments before and after.
struct Template {
  std::string id;
  std::string key_chunk;
  std::map<std::string, int> ssa_env_in;
  std::string target_constraints;  // SMT-LIB fragment
  std::map<std::string, int> ssa_env_out;
  std::string notes;
};

struct TemplateStore {
  std::vector<Template> templates;

  static TemplateStore load(const std::string& json_path);
  static TemplateStore builtin();  // the shipped 14-entry knowledge base
};

enum class BridgeMode { Off, Replay, Live };

struct BridgeConfig {
  BridgeMode mode = BridgeMode::Off;
  std::string fixture_dir;  // Replay
  std::string endpoint;     // Live; PATHFORGE_LLM_ENDPOINT overrides
  std::string model;
  std::string api_key_env = "PATHFORGE_LLM_KEY";
  int k = 2;
  int max_refine = 3;
  ChunkStrategy chunking = ChunkStrategy::ByLine;

  static BridgeConfig from_environment();
};

struct ScoredTemplate {
  const Template* tmpl = nullptr;
  double score = 0.0;
};

// Cosine similarity of L2-normalized token-count vectors; ties break by id.
std::vector<ScoredTemplate> retrieve(const std::string& chunk_text,
                                     const TemplateStore& store, int k);

std::vector<std::string> tokenize_chunk(const std::string& text);
std::string chunk_text_of(const PathChunk& chunk);

struct Fragment {
  std::string smtlib;
  std::map<std::string, int> env_out;
  int attempts = 1;
};
struct FallbackInput {
  TestInput input;
};
struct FallbackUnsat {};  // recorded as a claim, never a proof
struct BridgeFailed {
  std::string reason;
  int attempts = 0;
};
using BridgeOutcome = std::variant<Fragment, FallbackInput, FallbackUnsat, BridgeFailed>;

struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stable hash of a request payload; replay fixtures are keyed by it.
std::string request_hash(const std::string& payload);

// Opening request payloads, exposed so fixtures can be generated for the
// exact bytes the bridge will hash.
std::string translate_request_payload(const PathChunk& chunk,
                                      const std::map<std::string, int>& env_in,
                                      const std::string& prior_script,
                                      const TemplateStore& store,
                                      const BridgeConfig& cfg);
std::string solve_request_payload(const std::string& fn_source,
                                  const FunctionDef& fn,
                                  const ExecutionPath& path);

// Asks the endpoint to translate one chunk given the prior script text and
// retrieved examples. Every returned Fragment has been accepted by the
// solver frontend; rejections loop back with the error text up to
// max_refine times.
BridgeOutcome generate_fragment(const PathChunk& chunk,
                                const std::map<std::string, int>& env_in,
                                const std::string& prior_script,
                                const TemplateStore& store,
                                const BridgeConfig& cfg,
                                const SolverConfig& solver);

// Direct-solve fallback: asks for concrete argument values or an unsat
// claim for a whole path. Inputs are validated by the interpreter upstream.
BridgeOutcome llm_solve(const std::string& fn_source, const FunctionDef& fn,
                        const ExecutionPath& path, const BridgeConfig& cfg);

}  // namespace pathforge
