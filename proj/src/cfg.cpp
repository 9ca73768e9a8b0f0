#include "pathforge/cfg.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace pathforge {

const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::Enter: return "enter";
    case StepKind::Condition: return "condition";
    case StepKind::Expression: return "expression";
  }
  return "?";
}

std::vector<const CfgEdge*> Cfg::successors(int id) const {
  std::vector<const CfgEdge*> out;
  for (const auto& e : edges)
    if (e.from == id) out.push_back(&e);
  // Condition successors in TrueBranch-then-FalseBranch order for
  // deterministic enumeration.
  std::stable_sort(out.begin(), out.end(), [](const CfgEdge* a, const CfgEdge* b) {
    return static_cast<int>(a->label) < static_cast<int>(b->label);
  });
  return out;
}

const CfgEdge* Cfg::successor(int id, EdgeLabel label) const {
  for (const auto& e : edges)
    if (e.from == id && e.label == label) return &e;
  return nullptr;
}

namespace {

class Builder {
 public:
  explicit Builder(const FunctionDef& fn) : fn_(fn) { cfg_.function = fn.name; }

  Cfg build() {
    int enter = add_node(fn_.span.line, StepKind::Enter, enter_text(),
                         {NodeAction::Kind::FuncEnter, {}, nullptr, ""}, false);
    cfg_.entry = enter;
    cfg_.exit = add_node(0, StepKind::Expression, "<exit>",
                         {NodeAction::Kind::Exit, {}, nullptr, ""}, true);

    std::vector<Pending> tails = build_block(fn_.body, {{enter, EdgeLabel::Fallthrough}});
    // Falling off the end is an implicit return.
    for (const auto& p : tails) connect(p, cfg_.exit);
    return std::move(cfg_);
  }

 private:
  struct Pending {
    int from;
    EdgeLabel label;
  };
  struct LoopCtx {
    int continue_target;  // increment node (for) or guard (while)
    std::vector<Pending>* breaks;
  };

  std::string enter_text() const {
    std::string s = "enter " + fn_.name + "(";
    bool first = true;
    for (const auto& p : fn_.params) {
      if (!first) s += ", ";
      first = false;
      s += p.name;
      if (p.annot) s += ": " + to_string(*p.annot);
    }
    s += ")";
    return s;
  }

  int add_node(int line, StepKind kind, std::string text, NodeAction action,
               bool synthetic) {
    CfgNode n;
    n.id = static_cast<int>(cfg_.nodes.size());
    n.line = line;
    n.kind = kind;
    n.text = std::move(text);
    n.action = std::move(action);
    n.synthetic = synthetic;
    cfg_.nodes.push_back(std::move(n));
    return cfg_.nodes.back().id;
  }

  void connect(const Pending& p, int to) {
    cfg_.edges.push_back({p.from, to, p.label});
  }
  void connect_all(const std::vector<Pending>& ps, int to) {
    for (const auto& p : ps) connect(p, to);
  }

  std::vector<Pending> build_block(const std::vector<StmtPtr>& body,
                                   std::vector<Pending> in) {
    for (const auto& s : body) {
      if (in.empty()) break;  // unreachable tail after return/break/continue
      in = build_stmt(*s, std::move(in));
    }
    return in;
  }

  std::vector<Pending> build_stmt(const Stmt& s, std::vector<Pending> in) {
    using K = Stmt::Kind;
    switch (s.kind) {
      case K::Assign: {
        int n = add_node(s.span.line, StepKind::Expression, stmt_head_text(s),
                         {NodeAction::Kind::Assign, s.target, s.value, ""}, false);
        connect_all(in, n);
        return {{n, EdgeLabel::Fallthrough}};
      }
      case K::AugAssign: {
        // x op= e desugars to x = x op e; the node text keeps the source form.
        ExprPtr read =
            s.target.is_subscript()
                ? make_subscript(make_name(s.target.name, s.span), s.target.index, s.span)
                : make_name(s.target.name, s.span);
        ExprPtr rhs = make_binary(s.aug_op, read, s.value, s.span);
        int n = add_node(s.span.line, StepKind::Expression, stmt_head_text(s),
                         {NodeAction::Kind::Assign, s.target, rhs, ""}, false);
        connect_all(in, n);
        return {{n, EdgeLabel::Fallthrough}};
      }
      case K::Return: {
        int n = add_node(s.span.line, StepKind::Expression, stmt_head_text(s),
                         {NodeAction::Kind::Return, {}, s.value, ""}, false);
        connect_all(in, n);
        connect({n, EdgeLabel::Fallthrough}, cfg_.exit);
        return {};
      }
      case K::ExprStmt: {
        NodeAction a;
        if (s.value->kind == Expr::Kind::Append) {
          a = {NodeAction::Kind::Append, {}, s.value->a, s.value->name};
        } else {
          a = {NodeAction::Kind::Pop, {}, nullptr, s.value->name};
        }
        int n = add_node(s.span.line, StepKind::Expression, stmt_head_text(s),
                         std::move(a), false);
        connect_all(in, n);
        return {{n, EdgeLabel::Fallthrough}};
      }
      case K::If: {
        int g = add_node(s.span.line, StepKind::Condition, expr_text(*s.value),
                         {NodeAction::Kind::Guard, {}, s.value, ""}, false);
        connect_all(in, g);
        std::vector<Pending> out =
            build_block(s.body, {{g, EdgeLabel::TrueBranch}});
        if (s.orelse.empty()) {
          out.push_back({g, EdgeLabel::FalseBranch});
        } else {
          auto e = build_block(s.orelse, {{g, EdgeLabel::FalseBranch}});
          out.insert(out.end(), e.begin(), e.end());
        }
        return out;
      }
      case K::While: {
        int g = add_node(s.span.line, StepKind::Condition, expr_text(*s.value),
                         {NodeAction::Kind::Guard, {}, s.value, ""}, false);
        cfg_.nodes[static_cast<size_t>(g)].is_loop_guard = true;
        connect_all(in, g);
        std::vector<Pending> breaks;
        loops_.push_back({g, &breaks});
        auto tails = build_block(s.body, {{g, EdgeLabel::TrueBranch}});
        loops_.pop_back();
        connect_all(tails, g);  // back edge
        std::vector<Pending> out{{g, EdgeLabel::FalseBranch}};
        out.insert(out.end(), breaks.begin(), breaks.end());
        return out;
      }
      case K::ForRange:
        return build_for_range(s, std::move(in));
      case K::ForEach:
        return build_for_each(s, std::move(in));
      case K::Break: {
        if (loops_.empty()) return {};  // validated earlier; tolerate
        auto& brk = *loops_.back().breaks;
        brk.insert(brk.end(), in.begin(), in.end());
        return {};
      }
      case K::Continue: {
        if (loops_.empty()) return {};
        connect_all(in, loops_.back().continue_target);
        return {};
      }
    }
    return in;
  }

  // for v in range(a, b, s):  =>  v = a; while v < b: body; v = v + s
  // (guard is `v > b` for a negative literal step).
  std::vector<Pending> build_for_range(const Stmt& s, std::vector<Pending> in) {
    int line = s.span.line;
    ExprPtr var = make_name(s.loop_var, s.span);

    int init = add_node(line, StepKind::Expression,
                        s.loop_var + " = " + expr_text(*s.start),
                        {NodeAction::Kind::Assign, {s.loop_var, nullptr, s.span}, s.start, ""},
                        true);
    connect_all(in, init);

    bool negative_step = false;
    if (s.step->kind == Expr::Kind::IntLit && s.step->int_val < 0) negative_step = true;
    if (s.step->kind == Expr::Kind::Unary && s.step->uop == UnaryOp::Neg &&
        s.step->a->kind == Expr::Kind::IntLit)
      negative_step = true;

    ExprPtr guard = negative_step ? make_compare(CmpOp::Gt, var, s.stop, s.span)
                                  : make_compare(CmpOp::Lt, var, s.stop, s.span);
    int g = add_node(line, StepKind::Condition, expr_text(*guard),
                     {NodeAction::Kind::Guard, {}, guard, ""}, true);
    cfg_.nodes[static_cast<size_t>(g)].is_loop_guard = true;
    connect({init, EdgeLabel::Fallthrough}, g);

    ExprPtr incr_rhs = make_binary(BinOp::Add, var, s.step, s.span);
    int incr = add_node(line, StepKind::Expression,
                        s.loop_var + " = " + expr_text(*incr_rhs),
                        {NodeAction::Kind::Assign, {s.loop_var, nullptr, s.span}, incr_rhs, ""},
                        true);

    std::vector<Pending> breaks;
    loops_.push_back({incr, &breaks});
    auto tails = build_block(s.body, {{g, EdgeLabel::TrueBranch}});
    loops_.pop_back();
    connect_all(tails, incr);
    connect({incr, EdgeLabel::Fallthrough}, g);

    std::vector<Pending> out{{g, EdgeLabel::FalseBranch}};
    out.insert(out.end(), breaks.begin(), breaks.end());
    return out;
  }

  // for x in lst:  =>  _idx_x = 0; while _idx_x < len(lst):
  //                        x = lst[_idx_x]; body; _idx_x = _idx_x + 1
  std::vector<Pending> build_for_each(const Stmt& s, std::vector<Pending> in) {
    int line = s.span.line;
    std::string idx = "_idx_" + s.loop_var;
    cfg_.hidden_vars.push_back(idx);
    ExprPtr idx_name = make_name(idx, s.span);

    int init = add_node(line, StepKind::Expression, idx + " = 0",
                        {NodeAction::Kind::Assign, {idx, nullptr, s.span}, make_int(0, s.span), ""},
                        true);
    connect_all(in, init);

    ExprPtr guard = make_compare(CmpOp::Lt, idx_name, make_len(s.value, s.span), s.span);
    int g = add_node(line, StepKind::Condition, expr_text(*guard),
                     {NodeAction::Kind::Guard, {}, guard, ""}, true);
    cfg_.nodes[static_cast<size_t>(g)].is_loop_guard = true;
    connect({init, EdgeLabel::Fallthrough}, g);

    ExprPtr bind_rhs = make_subscript(s.value, idx_name, s.span);
    int bind = add_node(line, StepKind::Expression,
                        s.loop_var + " = " + expr_text(*bind_rhs),
                        {NodeAction::Kind::Assign, {s.loop_var, nullptr, s.span}, bind_rhs, ""},
                        true);
    connect({g, EdgeLabel::TrueBranch}, bind);

    ExprPtr incr_rhs = make_binary(BinOp::Add, idx_name, make_int(1, s.span), s.span);
    int incr = add_node(line, StepKind::Expression, idx + " = " + expr_text(*incr_rhs),
                        {NodeAction::Kind::Assign, {idx, nullptr, s.span}, incr_rhs, ""},
                        true);

    std::vector<Pending> breaks;
    loops_.push_back({incr, &breaks});
    auto tails = build_block(s.body, {{bind, EdgeLabel::Fallthrough}});
    loops_.pop_back();
    connect_all(tails, incr);
    connect({incr, EdgeLabel::Fallthrough}, g);

    std::vector<Pending> out{{g, EdgeLabel::FalseBranch}};
    out.insert(out.end(), breaks.begin(), breaks.end());
    return out;
  }

  const FunctionDef& fn_;
  Cfg cfg_;
  std::vector<LoopCtx> loops_;
};

PathStep make_step(const Cfg& cfg, int node_id, std::optional<bool> taken,
                   std::optional<int> iteration) {
  const CfgNode& n = cfg.node(node_id);
  PathStep s;
  s.node_id = node_id;
  s.line = n.line;
  s.kind = n.kind;
  s.text = n.text;
  s.branch_taken = taken;
  s.loop_iteration = iteration;
  return s;
}

}  // namespace

Cfg build_cfg(const FunctionDef& fn) { return Builder(fn).build(); }

void augment_env(const Cfg& cfg, TypeEnv& env) {
  for (const auto& v : cfg.hidden_vars) env.add_hidden_int(v);
}

std::vector<ExecutionPath> enumerate_paths(const Cfg& cfg, const PathBounds& bounds) {
  struct Walk {
    int at;
    std::vector<PathStep> steps;
    std::map<int, int> guard_visits;  // cumulative per loop guard
  };

  std::vector<ExecutionPath> out;
  std::set<std::string> truncated_seen;
  std::deque<Walk> queue;
  queue.push_back({cfg.entry, {}, {}});

  auto emit = [&](Walk& w, bool truncated) {
    if (static_cast<int>(out.size()) >= bounds.max_paths) return;
    ExecutionPath p{cfg.function, w.steps, truncated};
    if (truncated) {
      // Distinct walks may share a bounded prefix; keep one copy.
      std::string key = format_path(p);
      if (!truncated_seen.insert(key).second) return;
    }
    out.push_back(std::move(p));
  };

  while (!queue.empty() && static_cast<int>(out.size()) < bounds.max_paths) {
    Walk w = std::move(queue.front());
    queue.pop_front();

    const CfgNode& n = cfg.node(w.at);
    if (n.action.kind == NodeAction::Kind::Exit) {
      emit(w, false);
      continue;
    }
    if (static_cast<int>(w.steps.size()) >= bounds.max_steps) {
      emit(w, true);
      continue;
    }

    if (n.kind == StepKind::Condition) {
      std::optional<int> iter;
      int visits = 0;
      if (n.is_loop_guard) {
        visits = ++w.guard_visits[n.id];
        iter = visits;
      }
      for (bool taken : {true, false}) {
        if (taken && n.is_loop_guard && visits > bounds.max_loop_iterations)
          continue;  // prune further unrolling
        const CfgEdge* e =
            cfg.successor(n.id, taken ? EdgeLabel::TrueBranch : EdgeLabel::FalseBranch);
        if (!e) continue;
        Walk next = w;
        next.steps.push_back(make_step(cfg, n.id, taken, iter));
        next.at = e->to;
        queue.push_back(std::move(next));
      }
    } else {
      w.steps.push_back(make_step(cfg, n.id, std::nullopt, std::nullopt));
      auto succ = cfg.successors(n.id);
      if (succ.empty()) {
        emit(w, false);
        continue;
      }
      w.at = succ.front()->to;
      queue.push_back(std::move(w));
    }
  }
  return out;
}

std::variant<ExecutionPath, AlignError> align_trace(const Cfg& cfg,
                                                    const std::vector<int>& line_trace) {
  struct Walk {
    int at;
    size_t consumed;
    std::vector<PathStep> steps;
    std::map<int, int> guard_visits;
  };

  std::vector<ExecutionPath> matches;
  std::deque<Walk> queue;
  queue.push_back({cfg.entry, 0, {}, {}});
  const size_t kSearchCap = 200000;
  size_t expanded = 0;

  while (!queue.empty()) {
    if (++expanded > kSearchCap)
      return AlignError{AlignError::Kind::NoMatch, "alignment search exhausted"};
    Walk w = std::move(queue.front());
    queue.pop_front();
    const CfgNode& n = cfg.node(w.at);

    if (n.action.kind == NodeAction::Kind::Exit) {
      if (w.consumed == line_trace.size()) {
        matches.push_back({cfg.function, w.steps, false});
        if (matches.size() > 1) break;
      }
      continue;
    }
    if (w.consumed >= line_trace.size()) continue;
    if (line_trace[w.consumed] != n.line) continue;

    if (n.kind == StepKind::Condition) {
      std::optional<int> iter;
      if (n.is_loop_guard) iter = ++w.guard_visits[n.id];
      for (bool taken : {true, false}) {
        const CfgEdge* e =
            cfg.successor(n.id, taken ? EdgeLabel::TrueBranch : EdgeLabel::FalseBranch);
        if (!e) continue;
        Walk next = w;
        next.consumed++;
        next.steps.push_back(make_step(cfg, n.id, taken, iter));
        next.at = e->to;
        queue.push_back(std::move(next));
      }
    } else {
      w.consumed++;
      w.steps.push_back(make_step(cfg, n.id, std::nullopt, std::nullopt));
      auto succ = cfg.successors(n.id);
      if (succ.empty()) {
        if (w.consumed == line_trace.size())
          matches.push_back({cfg.function, w.steps, false});
        continue;
      }
      w.at = succ.front()->to;
      queue.push_back(std::move(w));
    }
  }

  if (matches.empty())
    return AlignError{AlignError::Kind::NoMatch, "no CFG walk matches the trace"};
  if (matches.size() > 1)
    return AlignError{AlignError::Kind::Ambiguous, "multiple CFG walks match the trace"};
  return matches.front();
}

std::vector<PathChunk> chunk_path(const ExecutionPath& path, ChunkStrategy strategy) {
  std::vector<PathChunk> out;
  if (strategy == ChunkStrategy::ByLine) {
    for (const auto& s : path.steps) out.push_back({{s}, strategy});
    return out;
  }
  PathChunk cur{{}, strategy};
  for (const auto& s : path.steps) {
    cur.steps.push_back(s);
    if (s.kind == StepKind::Condition) {
      out.push_back(std::move(cur));
      cur = {{}, strategy};
    }
  }
  if (!cur.steps.empty()) out.push_back(std::move(cur));
  return out;
}

std::string format_step(const PathStep& s) {
  std::string out = std::to_string(s.line) + "\t" + to_string(s.kind) + "\t" + s.text;
  if (s.loop_iteration) out += " @iter=" + std::to_string(*s.loop_iteration);
  if (s.branch_taken) out += *s.branch_taken ? " ->taken" : " ->not-taken";
  return out;
}

std::string format_path(const ExecutionPath& p) {
  std::string out;
  for (const auto& s : p.steps) {
    out += format_step(s);
    out += "\n";
  }
  if (p.truncated) out += "(truncated)\n";
  return out;
}

bool path_matches(const ExecutionPath& trace, const ExecutionPath& target) {
  const auto& a = trace.steps;
  const auto& b = target.steps;
  if (target.truncated) {
    if (a.size() < b.size()) return false;
    return std::equal(b.begin(), b.end(), a.begin());
  }
  return a == b;
}

}  // namespace pathforge
