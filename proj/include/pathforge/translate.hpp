#pragma once

#include <map>
#include <string>
#include <variant>

#include "pathforge/cfg.hpp"
#include "pathforge/script.hpp"
#include "pathforge/typing.hpp"

namespace pathforge {

// SSA renaming state: current index per source variable. The only mutable
// state the translator carries between steps.
struct SsaEnv {
  std::map<std::string, int> index;
  const TypeEnv* types = nullptr;
  int synth_counter = 0;

  int current_index(const std::string& var) const;
  int bump(const std::string& var);
  std::string fresh_synth(const std::string& stem);
};

// Symbol naming: `_<var>_<k>`, lists pair with `_<var>_<k>_len`.
std::string ssa_name(const std::string& var, int k);
std::string ssa_len_name(const std::string& var, int k);

struct Unsupported {
  int step_index = -1;
  std::string construct;
};

struct TranslationOutcome {
  std::variant<SmtScript, Unsupported> result;
  bool ok() const { return std::holds_alternative<SmtScript>(result); }
  const SmtScript& script() const { return std::get<SmtScript>(result); }
  const Unsupported& unsupported() const { return std::get<Unsupported>(result); }
};

// Declares the index-0 symbols for every parameter; list parameters get the
// array + length pair and a `len >= 0` side constraint.
void init_state(SsaEnv& env, const FunctionDef& fn, SmtScript& script);

// Translates one path step, threading the SSA environment. Throws
// StepUnsupported for constructs outside the rule set.
struct StepUnsupported {
  std::string construct;
};
void translate_step(SsaEnv& env, const Cfg& cfg, const PathStep& step,
                    int step_index, SmtScript& script);

TranslationOutcome translate_path(const ExecutionPath& path, const Cfg& cfg,
                                  const TypeEnv& env, const FunctionDef& fn);

// Highest-index symbol for a variable; reads never bump indices.
std::string current_symbol(const SsaEnv& env, const std::string& var);

// Regression guard for stale-SSA references: true when no assertion mentions
// an SSA index above the variable's index at that assertion's origin step.
bool ssa_indices_consistent(const SmtScript& script, std::string* offending = nullptr);

}  // namespace pathforge
