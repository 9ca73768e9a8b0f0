#pragma once

#include <map>
#include <string>
#include <vector>

#include "pathforge/ast.hpp"
#include "pathforge/diagnostics.hpp"

namespace pathforge {

// One static type per variable, under the monomorphism assumption: a
// variable's type never changes during execution.
struct TypeEnv {
  std::map<std::string, SubsetType> vars;
  std::vector<std::string> params;  // in declaration order
  std::vector<std::string> warnings;

  const SubsetType& of(const std::string& name) const;
  bool has(const std::string& name) const { return vars.count(name) > 0; }

  // Loop desugaring introduces hidden index variables; typed Int by
  // construction.
  void add_hidden_int(const std::string& name);
};

// Flow-based inference: annotations are trusted verbatim, everything else is
// solved by unification to a fixed point. Throws TypeError on conflicts and
// unresolved read variables.
TypeEnv infer_types(const FunctionDef& fn);

// Static scalar type of an expression under an environment.
Scalar scalar_type_of(const Expr& e, const TypeEnv& env);

}  // namespace pathforge
