#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pathforge/cfg.hpp"
#include "pathforge/typing.hpp"

namespace pathforge {

struct ConcreteValue {
  enum class Kind { Int, Float, Bool, List };
  Kind kind = Kind::Int;
  long long i = 0;
  double f = 0.0;
  bool b = false;
  std::vector<ConcreteValue> list;

  static ConcreteValue of_int(long long v) { return {Kind::Int, v, 0, false, {}}; }
  static ConcreteValue of_float(double v) { return {Kind::Float, 0, v, false, {}}; }
  static ConcreteValue of_bool(bool v) { return {Kind::Bool, 0, 0, v, {}}; }
  static ConcreteValue of_list(std::vector<ConcreteValue> xs) {
    return {Kind::List, 0, 0, false, std::move(xs)};
  }

  bool operator==(const ConcreteValue&) const = default;
};

// Python-style literal rendering ([1, 2], True, 0.5, ...).
std::string render_literal(const ConcreteValue& v);

// Parses a comma-separated argument tuple of int/float/bool/list literals.
std::vector<ConcreteValue> parse_arg_tuple(const std::string& line);

struct RunLimits {
  int max_steps = 10000;
};

struct RunResult {
  enum class Outcome { Returned, IndexError, ZeroDivisionError, StepLimit };
  Outcome outcome = Outcome::Returned;
  std::optional<ConcreteValue> value;
  ExecutionPath trace;
  int steps_executed = 0;

  bool raised() const { return outcome != Outcome::Returned; }
  const char* outcome_name() const;
};

// Concrete execution over the function's CFG, recording the executed path.
RunResult run(const Cfg& cfg, const TypeEnv& env,
              const std::vector<ConcreteValue>& args, const RunLimits& limits = {});

enum class PathVerdictKind { PathCorrect, ExecutionPassOnly, Failed };

struct PathVerdict {
  PathVerdictKind kind;
  std::string reason;  // Failed only
};

PathVerdict path_verdict(const Cfg& cfg, const TypeEnv& env,
                         const std::vector<ConcreteValue>& args,
                         const ExecutionPath& target);

struct OracleDomain {
  long long int_min = -5, int_max = 5;
  int list_len_max = 4;
  long long elem_min = -3, elem_max = 3;
  std::vector<double> float_grid = {-2, -1, -0.5, 0, 0.5, 1, 2};
  size_t max_tuples = 200000;  // beyond this the oracle is inconclusive
};

struct BruteForceResult {
  enum class Kind { FoundInput, ExhaustedNoInput, Inconclusive };
  Kind kind;
  std::vector<ConcreteValue> args;
};

// Exhaustive lexicographic scan for the first input reproducing `target`.
BruteForceResult brute_force(const Cfg& cfg, const TypeEnv& env,
                             const ExecutionPath& target, const OracleDomain& domain = {});

// Bulk form: invoke `visit` with every argument tuple in the domain, in
// lexicographic order, until it returns false. Returns false when the domain
// exceeds domain.max_tuples (inconclusive).
bool for_each_input(const TypeEnv& env, const OracleDomain& domain,
                    const std::function<bool(const std::vector<ConcreteValue>&)>& visit);

}  // namespace pathforge
