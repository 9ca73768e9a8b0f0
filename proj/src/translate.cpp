#include "pathforge/translate.hpp"

#include <stdexcept>

namespace pathforge {

namespace {

Sort sort_of_scalar(Scalar s) {
  switch (s) {
    case Scalar::Int: return Sort::Int;
    case Scalar::Float: return Sort::Real;
    case Scalar::Bool: return Sort::Bool;
  }
  return Sort::Int;
}

Sort sort_of(const SubsetType& t) {
  return t.is_list ? array_sort_of(sort_of_scalar(t.elem)) : sort_of_scalar(t.elem);
}

// A translated expression: its term, its scalar sort, and side constraints
// (index bounds, nonzero divisors, pop-length guards) already wrapped in
// whatever short-circuit guard applies at the point they arose.
struct Translated {
  TermPtr term;
  Sort sort = Sort::Int;
};

class StepTranslator {
 public:
  StepTranslator(SsaEnv& env, SmtScript& script, int step_index)
      : env_(env), script_(script), step_index_(step_index) {}

  // --- declarations and side constraints --------------------------------

  void declare(const std::string& name, Sort sort, const std::string& var, int k) {
    script_.decls.push_back({name, sort, var, k, step_index_});
  }

  // Synthetic symbols follow the `_<stem>_<n>` shape; record the stem and
  // counter so the SSA index scan can replay them like ordinary variables.
  void declare_synth(const std::string& name, Sort sort) {
    size_t us = name.rfind('_');
    declare(name, sort, name.substr(1, us - 1),
            std::stoi(name.substr(us + 1)));
  }

  void side(TermPtr t) {
    if (guard_) t = t_app("=>", {guard_, std::move(t)});
    script_.asserts.push_back({std::move(t), step_index_, true});
  }

  void assert_main(TermPtr t) {
    script_.asserts.push_back({std::move(t), step_index_, false});
  }

  // --- symbols ----------------------------------------------------------

  const SubsetType& type_of(const std::string& var) const {
    return env_.types->of(var);
  }

  TermPtr scalar_sym(const std::string& var) {
    return t_sym(ssa_name(var, env_.current_index(var)));
  }
  TermPtr array_sym(const std::string& var) {
    return t_sym(ssa_name(var, env_.current_index(var)));
  }
  TermPtr len_sym(const std::string& var) {
    return t_sym(ssa_len_name(var, env_.current_index(var)));
  }

  // --- numeric coercion -------------------------------------------------

  static TermPtr coerce(TermPtr t, Sort from, Sort to) {
    if (from == to) return t;
    if (from == Sort::Int && to == Sort::Real) return t_app("to_real", {std::move(t)});
    throw StepUnsupported{"sort coercion"};
  }

  std::pair<TermPtr, TermPtr> unify_nums(Translated a, Translated b, Sort* out) {
    Sort s = (a.sort == Sort::Real || b.sort == Sort::Real) ? Sort::Real : a.sort;
    if (a.sort == Sort::Bool || b.sort == Sort::Bool) s = Sort::Int;  // bool arith
    if (out) *out = s;
    return {coerce_num(a, s), coerce_num(b, s)};
  }

  static TermPtr coerce_num(const Translated& t, Sort target) {
    TermPtr term = t.term;
    Sort s = t.sort;
    if (s == Sort::Bool) {
      term = t_app("ite", {term, t_int(1), t_int(0)});
      s = Sort::Int;
    }
    return coerce(term, s, target);
  }

  // --- negative-literal detection --------------------------------------

  static std::optional<long long> negative_literal(const Expr& e) {
    if (e.kind == Expr::Kind::IntLit && e.int_val < 0) return e.int_val;
    if (e.kind == Expr::Kind::Unary && e.uop == UnaryOp::Neg &&
        e.a->kind == Expr::Kind::IntLit)
      return -e.a->int_val;
    return std::nullopt;
  }

  // Index handling shared by select and store. Negative literal indices
  // rewrite to `len + n` with the Table 1 bound `n >= -len`; all other
  // indices get the symmetric bounds `0 <= i` and `i < len`.
  TermPtr indexed(const std::string& list_var, const Expr& index_expr) {
    TermPtr len = len_sym(list_var);
    if (auto n = negative_literal(index_expr)) {
      side(t_app(">=", {t_int(*n), t_app("-", {len})}));
      return t_app("-", {len, t_int(-*n)});
    }
    Translated idx = expr(index_expr);
    TermPtr i = coerce_num(idx, Sort::Int);
    side(t_app("<=", {t_int(0), i}));
    side(t_app("<", {i, len}));
    return i;
  }

  // --- expression translation ------------------------------------------

  Translated expr(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
      case K::IntLit: return {t_int(e.int_val), Sort::Int};
      case K::FloatLit: return {t_real(Rational::from_double(e.float_val)), Sort::Real};
      case K::BoolLit: return {t_bool(e.bool_val), Sort::Bool};
      case K::Name: {
        const SubsetType& t = type_of(e.name);
        if (t.is_list) throw StepUnsupported{"list value in scalar position"};
        return {scalar_sym(e.name), sort_of_scalar(t.elem)};
      }
      case K::Unary: {
        if (e.uop == UnaryOp::Not) {
          Translated a = expr(*e.a);
          return {t_not(a.term), Sort::Bool};
        }
        Translated a = expr(*e.a);
        return {t_app("-", {a.term}), a.sort};
      }
      case K::Binary: return binary(e);
      case K::BoolBin: return boolbin(e);
      case K::Compare: {
        Translated a = expr(*e.a);
        Translated b = expr(*e.b);
        const char* op = nullptr;
        switch (e.cop) {
          case CmpOp::Eq: op = "="; break;
          case CmpOp::Ne: op = "distinct"; break;
          case CmpOp::Lt: op = "<"; break;
          case CmpOp::Le: op = "<="; break;
          case CmpOp::Gt: op = ">"; break;
          case CmpOp::Ge: op = ">="; break;
        }
        auto [x, y] = unify_nums(a, b, nullptr);
        return {t_app(op, {x, y}), Sort::Bool};
      }
      case K::Subscript: {
        if (e.a->kind != K::Name) throw StepUnsupported{"subscript of non-variable"};
        const std::string& lv = e.a->name;
        const SubsetType& t = type_of(lv);
        if (!t.is_list) throw StepUnsupported{"subscript of non-list"};
        TermPtr i = indexed(lv, *e.b);
        return {t_app("select", {array_sym(lv), i}), sort_of_scalar(t.elem)};
      }
      case K::Len: {
        if (e.a->kind != K::Name) throw StepUnsupported{"len() of non-variable"};
        return {len_sym(e.a->name), Sort::Int};
      }
      case K::Abs: {
        Translated a = expr(*e.a);
        TermPtr zero = a.sort == Sort::Real ? t_real(Rational::of(0)) : t_int(0);
        return {t_app("ite", {t_app(">=", {a.term, zero}), a.term,
                              t_app("-", {a.term})}),
                a.sort};
      }
      case K::Pop: throw StepUnsupported{"pop() inside a compound expression"};
      case K::Append: throw StepUnsupported{"append in expression position"};
      case K::ListLit: throw StepUnsupported{"list literal in scalar position"};
    }
    throw StepUnsupported{"expression"};
  }

  Translated binary(const Expr& e) {
    Translated a = expr(*e.a);
    Translated b = expr(*e.b);
    switch (e.bop) {
      case BinOp::Add:
      case BinOp::Sub:
      case BinOp::Mul: {
        Sort s;
        auto [x, y] = unify_nums(a, b, &s);
        const char* op = e.bop == BinOp::Add ? "+" : e.bop == BinOp::Sub ? "-" : "*";
        return {t_app(op, {x, y}), s};
      }
      case BinOp::Div: {
        TermPtr x = coerce_num(a, Sort::Real);
        TermPtr y = coerce_num(b, Sort::Real);
        side(t_not(t_eq(y, t_real(Rational::of(0)))));
        return {t_app("/", {x, y}), Sort::Real};
      }
      case BinOp::FloorDiv:
      case BinOp::Mod: {
        if (a.sort == Sort::Real || b.sort == Sort::Real) {
          TermPtr x = coerce_num(a, Sort::Real);
          TermPtr y = coerce_num(b, Sort::Real);
          side(t_not(t_eq(y, t_real(Rational::of(0)))));
          TermPtr q = t_app("to_real", {t_app("to_int", {t_app("/", {x, y})})});
          if (e.bop == BinOp::FloorDiv) return {q, Sort::Real};
          return {t_app("-", {x, t_app("*", {q, y})}), Sort::Real};
        }
        TermPtr x = coerce_num(a, Sort::Int);
        TermPtr y = coerce_num(b, Sort::Int);
        TermPtr q = floordiv(x, y);
        if (e.bop == BinOp::FloorDiv) return {q, Sort::Int};
        return {t_app("-", {x, t_app("*", {q, y})}), Sort::Int};
      }
    }
    throw StepUnsupported{"binary operator"};
  }

  // Python `//` floors toward negative infinity; a fresh quotient symbol is
  // pinned by a sign-split interval:
  //   b > 0:  q*b <= a < q*b + b
  //   b < 0:  q*b + b < a <= q*b
  TermPtr floordiv(TermPtr a, TermPtr b) {
    std::string qname = env_.fresh_synth("_fdiv");
    declare_synth(qname, Sort::Int);
    TermPtr q = t_sym(qname);
    TermPtr qb = t_app("*", {q, b});
    TermPtr qb_b = t_app("+", {qb, b});
    side(t_not(t_eq(b, t_int(0))));
    side(t_app(
        "or",
        {t_app("and", {t_app(">", {b, t_int(0)}), t_app("<=", {qb, a}),
                       t_app("<", {a, qb_b})}),
         t_app("and", {t_app("<", {b, t_int(0)}), t_app("<=", {a, qb}),
                       t_app(">", {a, qb_b})})}));
    return q;
  }

  // Side constraints arising inside the right operand of a short-circuit
  // connective only apply when that operand is evaluated; guard them by
  // implication from the left operand's outcome.
  Translated boolbin(const Expr& e) {
    Translated a = expr(*e.a);
    TermPtr saved = guard_;
    TermPtr cond = e.boolop == BoolOp::And ? a.term : t_not(a.term);
    guard_ = saved ? t_app("and", {saved, cond}) : cond;
    Translated b = expr(*e.b);
    guard_ = saved;
    const char* op = e.boolop == BoolOp::And ? "and" : "or";
    return {t_app(op, {a.term, b.term}), Sort::Bool};
  }

  // --- statement-level rules -------------------------------------------

  void bump_scalar(const std::string& var, TermPtr rhs, Sort sort) {
    int k = env_.bump(var);
    declare(ssa_name(var, k), sort, var, k);
    assert_main(t_eq(t_sym(ssa_name(var, k)), std::move(rhs)));
  }

  void bump_list(const std::string& var, TermPtr new_array, TermPtr new_len,
                 Sort array_sort) {
    int k = env_.bump(var);
    declare(ssa_name(var, k), array_sort, var, k);
    declare(ssa_len_name(var, k), Sort::Int, var, k);
    assert_main(t_eq(t_sym(ssa_name(var, k)), std::move(new_array)));
    assert_main(t_eq(t_sym(ssa_len_name(var, k)), std::move(new_len)));
  }

  void do_assign(const LValue& target, const Expr& rhs) {
    const SubsetType& tt = type_of(target.name);

    if (target.is_subscript()) {
      // lst[i] = v: store, length unchanged.
      Translated v = expr(rhs);
      TermPtr val = coerce_num(v, sort_of_scalar(tt.elem));
      TermPtr i = indexed(target.name, *target.index);
      TermPtr old_arr = array_sym(target.name);
      TermPtr old_len = len_sym(target.name);
      bump_list(target.name, t_app("store", {old_arr, i, val}), old_len, sort_of(tt));
      return;
    }

    if (tt.is_list) {
      if (rhs.kind == Expr::Kind::Name) {
        // List alias: copy the symbol pair by equality.
        const std::string& src = rhs.name;
        if (!type_of(src).is_list) throw StepUnsupported{"list aliased from scalar"};
        TermPtr src_arr = array_sym(src);
        TermPtr src_len = len_sym(src);
        bump_list(target.name, src_arr, src_len, sort_of(tt));
        return;
      }
      if (rhs.kind == Expr::Kind::ListLit) {
        // Fresh literal: m stores over an arbitrary base array, length m.
        std::string base = env_.fresh_synth("_listinit");
        declare_synth(base, sort_of(tt));
        TermPtr arr = t_sym(base);
        for (size_t i = 0; i < rhs.elems.size(); i++) {
          Translated el = expr(*rhs.elems[i]);
          arr = t_app("store", {arr, t_int(static_cast<long long>(i)),
                                coerce_num(el, sort_of_scalar(tt.elem))});
        }
        bump_list(target.name, arr, t_int(static_cast<long long>(rhs.elems.size())),
                  sort_of(tt));
        return;
      }
      throw StepUnsupported{"list-valued expression"};
    }

    if (rhs.kind == Expr::Kind::Pop) {
      // y = n.pop(): bind y to the last element, then shrink n.
      const std::string& lv = rhs.name;
      const SubsetType& lt = type_of(lv);
      TermPtr old_arr = array_sym(lv);
      TermPtr old_len = len_sym(lv);
      side(t_app(">", {old_len, t_int(0)}));
      TermPtr val = t_app("select", {old_arr, t_app("-", {old_len, t_int(1)})});
      bump_list(lv, old_arr, t_app("-", {old_len, t_int(1)}), sort_of(lt));
      bump_scalar(target.name, coerce(val, sort_of_scalar(lt.elem), sort_of_scalar(tt.elem)),
                  sort_of_scalar(tt.elem));
      return;
    }

    Translated v = expr(rhs);
    bump_scalar(target.name, coerce_num(v, sort_of_scalar(tt.elem)),
                sort_of_scalar(tt.elem));
  }

  void do_append(const std::string& var, const Expr& value) {
    const SubsetType& t = type_of(var);
    Translated v = expr(value);
    TermPtr old_arr = array_sym(var);
    TermPtr old_len = len_sym(var);
    TermPtr stored = t_app("store", {old_arr, old_len, coerce_num(v, sort_of_scalar(t.elem))});
    bump_list(var, stored, t_app("+", {old_len, t_int(1)}), sort_of(t));
  }

  void do_pop(const std::string& var) {
    const SubsetType& t = type_of(var);
    TermPtr old_arr = array_sym(var);
    TermPtr old_len = len_sym(var);
    side(t_app(">", {old_len, t_int(0)}));
    bump_list(var, old_arr, t_app("-", {old_len, t_int(1)}), sort_of(t));
  }

  void do_guard(const Expr& cond, bool taken) {
    Translated g = expr(cond);
    assert_main(taken ? g.term : t_not(g.term));
  }

  void do_return(const Expr* value) {
    // Return adds no equalities, but evaluating its expression can still
    // require side constraints (index bounds on the non-raising path).
    // List-valued returns evaluate no scalar expression at all.
    if (!value) return;
    if (value->kind == Expr::Kind::Name && env_.types->has(value->name) &&
        env_.types->of(value->name).is_list)
      return;
    if (value->kind == Expr::Kind::ListLit) return;
    expr(*value);
  }

 private:
  SsaEnv& env_;
  SmtScript& script_;
  int step_index_;
  TermPtr guard_;  // current short-circuit context
};

}  // namespace

int SsaEnv::current_index(const std::string& var) const {
  auto it = index.find(var);
  if (it == index.end())
    throw std::out_of_range("UnknownVariable: '" + var + "' has no SSA index");
  return it->second;
}

int SsaEnv::bump(const std::string& var) {
  auto it = index.find(var);
  if (it == index.end()) {
    index[var] = 0;
    return 0;
  }
  return ++it->second;
}

std::string SsaEnv::fresh_synth(const std::string& stem) {
  return stem + "_" + std::to_string(synth_counter++);
}

std::string ssa_name(const std::string& var, int k) {
  return "_" + var + "_" + std::to_string(k);
}
std::string ssa_len_name(const std::string& var, int k) {
  return ssa_name(var, k) + "_len";
}

std::string current_symbol(const SsaEnv& env, const std::string& var) {
  return ssa_name(var, env.current_index(var));
}

void init_state(SsaEnv& env, const FunctionDef& fn, SmtScript& script) {
  StepTranslator tr(env, script, 0);
  for (const auto& p : fn.params) {
    const SubsetType& t = env.types->of(p.name);
    env.index[p.name] = 0;
    if (t.is_list) {
      tr.declare(ssa_name(p.name, 0), sort_of(t), p.name, 0);
      tr.declare(ssa_len_name(p.name, 0), Sort::Int, p.name, 0);
      tr.side(t_app(">=", {t_sym(ssa_len_name(p.name, 0)), t_int(0)}));
      script.param_map[p.name] = {ssa_name(p.name, 0), ssa_len_name(p.name, 0)};
    } else {
      tr.declare(ssa_name(p.name, 0), sort_of(t), p.name, 0);
      script.param_map[p.name] = {ssa_name(p.name, 0), ""};
    }
  }
}

void translate_step(SsaEnv& env, const Cfg& cfg, const PathStep& step,
                    int step_index, SmtScript& script) {
  const CfgNode& node = cfg.node(step.node_id);
  StepTranslator tr(env, script, step_index);
  switch (node.action.kind) {
    case NodeAction::Kind::FuncEnter:
      // handled by init_state via translate_path
      break;
    case NodeAction::Kind::Guard:
      tr.do_guard(*node.action.expr, step.branch_taken.value_or(true));
      break;
    case NodeAction::Kind::Assign:
      tr.do_assign(node.action.target, *node.action.expr);
      break;
    case NodeAction::Kind::Append:
      tr.do_append(node.action.list_var, *node.action.expr);
      break;
    case NodeAction::Kind::Pop:
      tr.do_pop(node.action.list_var);
      break;
    case NodeAction::Kind::Return:
      tr.do_return(node.action.expr.get());
      break;
    case NodeAction::Kind::Exit:
      break;
  }
}

TranslationOutcome translate_path(const ExecutionPath& path, const Cfg& cfg,
                                  const TypeEnv& env, const FunctionDef& fn) {
  SsaEnv ssa;
  ssa.types = &env;
  SmtScript script;
  for (size_t i = 0; i < path.steps.size(); i++) {
    const PathStep& st = path.steps[i];
    try {
      if (st.kind == StepKind::Enter) {
        init_state(ssa, fn, script);
      } else {
        translate_step(ssa, cfg, st, static_cast<int>(i), script);
      }
    } catch (const StepUnsupported& u) {
      return {Unsupported{static_cast<int>(i), u.construct}};
    } catch (const std::out_of_range&) {
      // A step referenced a variable with no SSA state, e.g. a path that
      // does not begin at the function entry.
      return {Unsupported{static_cast<int>(i), "read of undefined variable"}};
    }
  }
  return {std::move(script)};
}

bool ssa_indices_consistent(const SmtScript& script, std::string* offending) {
  // Variable -> highest declared index, rebuilt in declaration order. For
  // each assertion, every referenced `_v_k` must satisfy k <= the index of v
  // declared by the time the assertion was added. Declarations and
  // assertions both record their origin step; within a step declarations
  // precede the assertions that use them.
  auto parse_ssa = [](const std::string& name) -> std::optional<std::pair<std::string, int>> {
    if (name.empty() || name[0] != '_') return std::nullopt;
    std::string body = name;
    if (body.size() > 4 && body.substr(body.size() - 4) == "_len")
      body = body.substr(0, body.size() - 4);
    size_t us = body.rfind('_');
    if (us == 0 || us == std::string::npos) return std::nullopt;
    std::string idx_str = body.substr(us + 1);
    if (idx_str.empty() ||
        idx_str.find_first_not_of("0123456789") != std::string::npos)
      return std::nullopt;
    return std::make_pair(body.substr(1, us - 1), std::stoi(idx_str));
  };

  std::map<std::string, int> max_index;
  for (const auto& d : script.decls) {
    if (d.var.empty()) continue;
    auto& slot = max_index[d.var];
    if (d.ssa_index > slot) slot = d.ssa_index;
  }

  // Timeline check: walk asserts in order while replaying declarations.
  std::map<std::string, int> current;
  size_t decl_cursor = 0;
  auto replay_decls_until = [&](std::optional<int> step) {
    while (decl_cursor < script.decls.size()) {
      const auto& d = script.decls[decl_cursor];
      if (step && d.origin_step && *d.origin_step > *step) break;
      if (!d.var.empty()) current[d.var] = d.ssa_index;
      decl_cursor++;
    }
  };

  for (const auto& a : script.asserts) {
    replay_decls_until(a.origin_step);
    std::vector<std::string> syms;
    collect_symbols(a.term, syms);
    for (const auto& s : syms) {
      auto parsed = parse_ssa(s);
      if (!parsed) continue;
      auto it = current.find(parsed->first);
      int allowed = it == current.end() ? -1 : it->second;
      if (parsed->second > allowed) {
        if (offending) *offending = s;
        return false;
      }
    }
  }
  return true;
}

}  // namespace pathforge
