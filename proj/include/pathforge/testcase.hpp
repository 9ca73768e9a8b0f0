#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pathforge/interp.hpp"
#include "pathforge/solver.hpp"
#include "pathforge/translate.hpp"

namespace pathforge {

// Concrete arguments decoded from a solver model, in parameter order.
struct TestInput {
  std::vector<std::pair<std::string, ConcreteValue>> args;
};

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads the index-0 symbol for each parameter out of the model. Lists are
// materialized from the array binding plus its length symbol; stores at
// indices >= len are out-of-window don't-cares and dropped.
TestInput decode_model(const Model& model, const TypeEnv& env, const SmtScript& script);

// One record per solved path. `snippet` is the human-readable call text;
// the machine form serializes with a stable field order.
struct TestArtifact {
  std::string function;
  std::string file;
  TestInput input;
  std::string path_id;
  std::string verdict;
  std::string snippet;
};

TestArtifact emit_artifact(const TestInput& input, const FunctionDef& fn,
                           const ExecutionPath& path);

// Stable identifier for a path: function name plus the branch/iteration
// profile of its steps.
std::string path_id_of(const ExecutionPath& path);

std::string artifact_to_json(const TestArtifact& a);
TestArtifact artifact_from_json(const std::string& line);

}  // namespace pathforge
