#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pathforge/llm_bridge.hpp"
#include "pathforge/solver.hpp"
#include "pathforge/testcase.hpp"
#include "pathforge/translate.hpp"

namespace pathforge {

struct HarnessConfig {
  PathBounds bounds;
  SolverConfig solver = SolverConfig::from_environment();
  BridgeConfig bridge;
  std::string out_dir;
  int jobs = 1;
  bool keep_smt = false;
};

enum class TranslationSource { Rules, Bridge, Fallback };
const char* to_string(TranslationSource s);

// One path through the full pipeline: translate (rules, then bridge for
// rejected chunks when enabled), solve, decode, replay.
struct PipelineResult {
  TranslationSource source = TranslationSource::Rules;
  bool unsupported = false;        // no translation and no bridge recovery
  std::string unsupported_construct;
  std::string solver_verdict;      // sat | unsat | unknown(...) | failure
  std::string test_verdict;        // PathCorrect | ExecutionPassOnly | Failed | ""
  std::optional<TestInput> input;
  std::string detail;
  std::string smt_text;            // emitted query (rules path only)
  double wall_ms = 0.0;
};

PipelineResult run_pipeline(const FunctionDef& fn, const Cfg& cfg, const TypeEnv& env,
                            const ExecutionPath& path, const HarnessConfig& hc);

struct PathRecord {
  std::string file;
  std::string function;
  int path_index = 0;
  std::string path_id;
  std::string source;         // Rules | Bridge | Fallback
  std::string solver_verdict;
  std::string test_verdict;
  double wall_ms = 0.0;
};

struct ReportTotals {
  int paths = 0;
  int sat = 0;
  int unsat = 0;
  int execution_pass = 0;  // PathCorrect or ExecutionPassOnly
  int path_correct = 0;
  int unsupported = 0;
  double mean_ms = 0.0;
};

struct RunReport {
  std::vector<PathRecord> records;

  ReportTotals totals() const;  // aggregates recomputed from records
};

std::string report_to_json(const RunReport& r);
RunReport report_from_json(const std::string& text);

// `70 (63.1%)` style cell.
std::string format_cell(int count, int denom);
std::string render_report(const RunReport& r);

// Corpus layout: <name>.py with one function, <name>.inputs with one literal
// argument tuple per line. Traces are derived by the interpreter, aligned to
// full walks, then truncated to the step bound.
RunReport bench(const std::string& corpus_dir, const HarnessConfig& hc);

}  // namespace pathforge
