#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pathforge/ast.hpp"
#include "pathforge/typing.hpp"

namespace pathforge {

enum class StepKind { Enter, Condition, Expression };
enum class EdgeLabel { TrueBranch, FalseBranch, Fallthrough };

const char* to_string(StepKind k);

// What a CFG node does when executed or translated. Loop desugaring reduces
// every node to one of these.
struct NodeAction {
  enum class Kind {
    FuncEnter,  // function definition
    Guard,      // if/while/for condition (expr)
    Assign,     // target = expr (also synthetic loop init/increment/bind)
    Return,     // return [expr]
    Append,     // list_var.append(expr)
    Pop,        // list_var.pop() statement
    Exit,       // synthetic sink; never emitted as a path step
  };
  Kind kind = Kind::Exit;
  LValue target;
  ExprPtr expr;            // guard / rhs / return value / append argument
  std::string list_var;    // Append/Pop
};

struct CfgNode {
  int id = 0;
  int line = 0;
  StepKind kind = StepKind::Expression;
  std::string text;        // normalized statement text
  NodeAction action;
  bool is_loop_guard = false;
  bool synthetic = false;  // introduced by loop desugaring
};

struct CfgEdge {
  int from = 0;
  int to = 0;
  EdgeLabel label = EdgeLabel::Fallthrough;
};

struct Cfg {
  std::string function;
  std::vector<CfgNode> nodes;
  std::vector<CfgEdge> edges;
  int entry = 0;
  int exit = 0;
  std::vector<std::string> hidden_vars;  // loop-desugared index variables

  const CfgNode& node(int id) const { return nodes[static_cast<size_t>(id)]; }
  std::vector<const CfgEdge*> successors(int id) const;
  const CfgEdge* successor(int id, EdgeLabel label) const;
};

struct PathStep {
  int node_id = 0;
  int line = 0;
  StepKind kind = StepKind::Expression;
  std::string text;
  std::optional<bool> branch_taken;       // Condition only
  std::optional<int> loop_iteration;      // loop guards only, 1-based

  bool operator==(const PathStep&) const = default;
};

struct ExecutionPath {
  std::string function;
  std::vector<PathStep> steps;
  bool truncated = false;
};

enum class ChunkStrategy { ByLine, ByCondition };

struct PathChunk {
  std::vector<PathStep> steps;
  ChunkStrategy strategy = ChunkStrategy::ByLine;
};

struct PathBounds {
  int max_steps = 20;
  int max_loop_iterations = 3;
  int max_paths = 256;
};

struct AlignError {
  enum class Kind { NoMatch, Ambiguous };
  Kind kind;
  std::string message;
};

Cfg build_cfg(const FunctionDef& fn);

// Register the CFG's hidden loop-index variables in a type environment.
void augment_env(const Cfg& cfg, TypeEnv& env);

// Breadth-first bounded enumeration of entry-to-exit walks.
std::vector<ExecutionPath> enumerate_paths(const Cfg& cfg, const PathBounds& bounds);

// Reconstruct the unique full walk whose visited lines equal line_trace.
std::variant<ExecutionPath, AlignError> align_trace(const Cfg& cfg,
                                                    const std::vector<int>& line_trace);

std::vector<PathChunk> chunk_path(const ExecutionPath& path, ChunkStrategy strategy);

// Fig-3-style one-step-per-line rendering:
//   <line>\t<kind>\t<stmt>[ @iter=N][ ->taken|->not-taken]
std::string format_step(const PathStep& s);
std::string format_path(const ExecutionPath& p);

// True when target equals trace, or is a prefix of it for truncated targets.
bool path_matches(const ExecutionPath& trace, const ExecutionPath& target);

}  // namespace pathforge
