#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pathforge/script.hpp"

namespace pathforge {

struct SolverConfig {
  // Executable + args; invoked as `<command...> <file>`. The PATHFORGE_SOLVER
  // environment variable overrides this (whitespace-split).
  std::vector<std::string> command = {"z3"};
  std::chrono::milliseconds timeout{10000};
  std::string logic = "ALL";
  std::string keep_dir;  // when set, query + raw output are written here

  static SolverConfig from_environment();
};

// Model values; arrays are a default plus a finite store list with distinct
// indices (later stores win during normalization).
struct Value {
  enum class Kind { Int, Real, Bool, Array };
  Kind kind = Kind::Int;
  long long i = 0;
  Rational r;
  bool b = false;
  // Array
  std::shared_ptr<Value> array_default;
  std::vector<std::pair<long long, Value>> stores;

  static Value of_int(long long v);
  static Value of_real(Rational v);
  static Value of_bool(bool v);
  static Value of_array(Value dflt, std::vector<std::pair<long long, Value>> stores);
  Value select(long long index) const;

  bool operator==(const Value& o) const;
};

struct Model {
  std::map<std::string, Value> bindings;

  // Missing symbols default to 0 / 0.0 / false / constant-0 array.
  Value lookup(const std::string& name, Sort sort) const;
};

struct SatVerdict { Model model; };
struct UnsatVerdict {};
struct UnknownVerdict { std::string reason; };
struct SolverFailure {
  int exit_code = 0;
  std::string stderr_excerpt;
};

using SolverVerdict = std::variant<SatVerdict, UnsatVerdict, UnknownVerdict, SolverFailure>;

bool is_sat(const SolverVerdict& v);
bool is_unsat(const SolverVerdict& v);
std::string verdict_name(const SolverVerdict& v);

// Deterministic SMT-LIB 2 rendering: set-logic, produce-models, one
// declare-const per symbol, one assert per assertion, check-sat, get-model.
std::string emit_smtlib(const SmtScript& script, const std::string& logic = "ALL");

// Runs the external solver on the emitted script.
SolverVerdict solve(const SmtScript& script, const SolverConfig& cfg);

// Runs the solver frontend on raw SMT-LIB text (used by the generative
// bridge to validate fragments). Returns the verdict plus any error text.
struct RawSolveResult {
  SolverVerdict verdict;
  std::string error_text;  // solver-reported (error ...) lines, if any
  std::string model_text;  // raw get-model response when sat
};
RawSolveResult solve_text(const std::string& smtlib_text, const SolverConfig& cfg);

struct ModelParseError {
  std::string message;
  std::string sexpr;
};

// Parses a get-model response: define-fun constants, store-chains over
// ((as const ...) d), as-array indirections, lambda/ite forms.
std::variant<Model, ModelParseError> parse_model(const std::string& text,
                                                 const std::vector<SmtSymbol>& decls);

// True iff every assertion evaluates to true under the model.
bool eval_model(const SmtScript& script, const Model& model);

}  // namespace pathforge
