#include "pathforge/interp.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace pathforge {

namespace {

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  std::string s = os.str();
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) s += ".0";
  return s;
}

struct RaisedSignal {
  RunResult::Outcome outcome;
};

long long py_floordiv(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) q--;
  return q;
}

long long py_mod(long long a, long long b) { return a - py_floordiv(a, b) * b; }

class Machine {
 public:
  Machine(const Cfg& cfg, const TypeEnv& env, const RunLimits& limits)
      : cfg_(cfg), env_(env), limits_(limits) {}

  RunResult execute(const std::vector<ConcreteValue>& args) {
    RunResult res;
    res.trace.function = cfg_.function;
    if (args.size() != env_.params.size())
      throw std::invalid_argument("argument count mismatch");
    for (size_t i = 0; i < args.size(); i++) vars_[env_.params[i]] = args[i];

    int at = cfg_.entry;
    try {
      for (;;) {
        const CfgNode& n = cfg_.node(at);
        if (n.action.kind == NodeAction::Kind::Exit) break;
        if (res.steps_executed >= limits_.max_steps) {
          res.outcome = RunResult::Outcome::StepLimit;
          return res;
        }
        res.steps_executed++;
        at = step(n, res.trace, res);
        if (returned_) break;
      }
    } catch (const RaisedSignal& sig) {
      res.outcome = sig.outcome;
      return res;
    }
    res.outcome = RunResult::Outcome::Returned;
    res.value = return_value_;
    return res;
  }

 private:
  int step(const CfgNode& n, ExecutionPath& trace, RunResult& res) {
    PathStep st;
    st.node_id = n.id;
    st.line = n.line;
    st.kind = n.kind;
    st.text = n.text;

    switch (n.action.kind) {
      case NodeAction::Kind::FuncEnter: {
        trace.steps.push_back(st);
        return cfg_.successors(n.id).front()->to;
      }
      case NodeAction::Kind::Guard: {
        bool taken = truth(eval(*n.action.expr));
        if (n.is_loop_guard) st.loop_iteration = ++guard_visits_[n.id];
        st.branch_taken = taken;
        trace.steps.push_back(st);
        const CfgEdge* e = cfg_.successor(
            n.id, taken ? EdgeLabel::TrueBranch : EdgeLabel::FalseBranch);
        return e->to;
      }
      case NodeAction::Kind::Assign: {
        ConcreteValue v = eval(*n.action.expr);
        if (n.action.target.is_subscript()) {
          ConcreteValue idx = eval(*n.action.target.index);
          auto& lst = vars_.at(n.action.target.name);
          size_t k = wrap_index(idx.i, lst.list.size());
          lst.list[k] = v;
        } else {
          vars_[n.action.target.name] = v;
        }
        trace.steps.push_back(st);
        return cfg_.successors(n.id).front()->to;
      }
      case NodeAction::Kind::Append: {
        ConcreteValue v = eval(*n.action.expr);
        vars_.at(n.action.list_var).list.push_back(v);
        trace.steps.push_back(st);
        return cfg_.successors(n.id).front()->to;
      }
      case NodeAction::Kind::Pop: {
        auto& lst = vars_.at(n.action.list_var).list;
        if (lst.empty()) throw RaisedSignal{RunResult::Outcome::IndexError};
        lst.pop_back();
        trace.steps.push_back(st);
        return cfg_.successors(n.id).front()->to;
      }
      case NodeAction::Kind::Return: {
        if (n.action.expr) return_value_ = eval(*n.action.expr);
        trace.steps.push_back(st);
        returned_ = true;
        return n.id;
      }
      case NodeAction::Kind::Exit:
        break;
    }
    (void)res;
    return n.id;
  }

  static bool truth(const ConcreteValue& v) {
    switch (v.kind) {
      case ConcreteValue::Kind::Bool: return v.b;
      case ConcreteValue::Kind::Int: return v.i != 0;
      case ConcreteValue::Kind::Float: return v.f != 0.0;
      case ConcreteValue::Kind::List: return !v.list.empty();
    }
    return false;
  }

  size_t wrap_index(long long idx, size_t len) const {
    long long n = static_cast<long long>(len);
    if (idx < 0) idx += n;
    if (idx < 0 || idx >= n) throw RaisedSignal{RunResult::Outcome::IndexError};
    return static_cast<size_t>(idx);
  }

  static double as_double(const ConcreteValue& v) {
    switch (v.kind) {
      case ConcreteValue::Kind::Int: return static_cast<double>(v.i);
      case ConcreteValue::Kind::Float: return v.f;
      case ConcreteValue::Kind::Bool: return v.b ? 1.0 : 0.0;
      default: throw std::runtime_error("list in numeric context");
    }
  }
  static long long as_int(const ConcreteValue& v) {
    switch (v.kind) {
      case ConcreteValue::Kind::Int: return v.i;
      case ConcreteValue::Kind::Bool: return v.b ? 1 : 0;
      default: throw std::runtime_error("expected int value");
    }
  }
  static bool is_floatish(const ConcreteValue& v) {
    return v.kind == ConcreteValue::Kind::Float;
  }

  ConcreteValue eval(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind) {
      case K::IntLit: return ConcreteValue::of_int(e.int_val);
      case K::FloatLit: return ConcreteValue::of_float(e.float_val);
      case K::BoolLit: return ConcreteValue::of_bool(e.bool_val);
      case K::Name: {
        auto it = vars_.find(e.name);
        if (it == vars_.end())
          throw std::runtime_error("unbound variable '" + e.name + "'");
        return it->second;
      }
      case K::Unary: {
        if (e.uop == UnaryOp::Not) return ConcreteValue::of_bool(!truth(eval(*e.a)));
        ConcreteValue v = eval(*e.a);
        if (is_floatish(v)) return ConcreteValue::of_float(-v.f);
        return ConcreteValue::of_int(-as_int(v));
      }
      case K::Binary: return eval_binary(e);
      case K::BoolBin: {
        // Short-circuit evaluation.
        bool lhs = truth(eval(*e.a));
        if (e.boolop == BoolOp::And)
          return ConcreteValue::of_bool(lhs && truth(eval(*e.b)));
        return ConcreteValue::of_bool(lhs || truth(eval(*e.b)));
      }
      case K::Compare: {
        ConcreteValue a = eval(*e.a), b = eval(*e.b);
        double x = as_double(a), y = as_double(b);
        switch (e.cop) {
          case CmpOp::Eq: return ConcreteValue::of_bool(x == y);
          case CmpOp::Ne: return ConcreteValue::of_bool(x != y);
          case CmpOp::Lt: return ConcreteValue::of_bool(x < y);
          case CmpOp::Le: return ConcreteValue::of_bool(x <= y);
          case CmpOp::Gt: return ConcreteValue::of_bool(x > y);
          case CmpOp::Ge: return ConcreteValue::of_bool(x >= y);
        }
        return ConcreteValue::of_bool(false);
      }
      case K::Subscript: {
        ConcreteValue base = eval(*e.a);
        ConcreteValue idx = eval(*e.b);
        size_t k = wrap_index(as_int(idx), base.list.size());
        return base.list[k];
      }
      case K::Len: {
        ConcreteValue base = eval(*e.a);
        return ConcreteValue::of_int(static_cast<long long>(base.list.size()));
      }
      case K::Abs: {
        ConcreteValue v = eval(*e.a);
        if (is_floatish(v)) return ConcreteValue::of_float(std::fabs(v.f));
        return ConcreteValue::of_int(std::llabs(as_int(v)));
      }
      case K::Pop: {
        auto& lst = vars_.at(e.name).list;
        if (lst.empty()) throw RaisedSignal{RunResult::Outcome::IndexError};
        ConcreteValue v = lst.back();
        lst.pop_back();
        return v;
      }
      case K::Append:
        throw std::runtime_error("append in expression position");
      case K::ListLit: {
        std::vector<ConcreteValue> xs;
        for (const auto& el : e.elems) xs.push_back(eval(*el));
        return ConcreteValue::of_list(std::move(xs));
      }
    }
    throw std::runtime_error("unhandled expression");
  }

  ConcreteValue eval_binary(const Expr& e) {
    ConcreteValue a = eval(*e.a), b = eval(*e.b);
    bool fl = is_floatish(a) || is_floatish(b) || e.bop == BinOp::Div;
    if (fl) {
      double x = as_double(a), y = as_double(b);
      switch (e.bop) {
        case BinOp::Add: return ConcreteValue::of_float(x + y);
        case BinOp::Sub: return ConcreteValue::of_float(x - y);
        case BinOp::Mul: return ConcreteValue::of_float(x * y);
        case BinOp::Div:
          if (y == 0.0) throw RaisedSignal{RunResult::Outcome::ZeroDivisionError};
          return ConcreteValue::of_float(x / y);
        case BinOp::FloorDiv:
          if (y == 0.0) throw RaisedSignal{RunResult::Outcome::ZeroDivisionError};
          return ConcreteValue::of_float(std::floor(x / y));
        case BinOp::Mod: {
          if (y == 0.0) throw RaisedSignal{RunResult::Outcome::ZeroDivisionError};
          return ConcreteValue::of_float(x - std::floor(x / y) * y);
        }
      }
    }
    long long x = as_int(a), y = as_int(b);
    switch (e.bop) {
      case BinOp::Add: return ConcreteValue::of_int(x + y);
      case BinOp::Sub: return ConcreteValue::of_int(x - y);
      case BinOp::Mul: return ConcreteValue::of_int(x * y);
      case BinOp::FloorDiv:
        if (y == 0) throw RaisedSignal{RunResult::Outcome::ZeroDivisionError};
        return ConcreteValue::of_int(py_floordiv(x, y));
      case BinOp::Mod:
        if (y == 0) throw RaisedSignal{RunResult::Outcome::ZeroDivisionError};
        return ConcreteValue::of_int(py_mod(x, y));
      case BinOp::Div:
        break;  // unreachable: handled in the float branch
    }
    throw std::runtime_error("unhandled binary operator");
  }

  const Cfg& cfg_;
  const TypeEnv& env_;
  const RunLimits& limits_;
  std::map<std::string, ConcreteValue> vars_;
  std::map<int, int> guard_visits_;
  std::optional<ConcreteValue> return_value_;
  bool returned_ = false;
};

}  // namespace

const char* RunResult::outcome_name() const {
  switch (outcome) {
    case Outcome::Returned: return "returned";
    case Outcome::IndexError: return "IndexError";
    case Outcome::ZeroDivisionError: return "ZeroDivisionError";
    case Outcome::StepLimit: return "StepLimit";
  }
  return "?";
}

RunResult run(const Cfg& cfg, const TypeEnv& env,
              const std::vector<ConcreteValue>& args, const RunLimits& limits) {
  return Machine(cfg, env, limits).execute(args);
}

PathVerdict path_verdict(const Cfg& cfg, const TypeEnv& env,
                         const std::vector<ConcreteValue>& args,
                         const ExecutionPath& target) {
  RunResult r = run(cfg, env, args);
  if (r.raised()) return {PathVerdictKind::Failed, r.outcome_name()};
  if (path_matches(r.trace, target)) return {PathVerdictKind::PathCorrect, ""};
  return {PathVerdictKind::ExecutionPassOnly, ""};
}

std::string render_literal(const ConcreteValue& v) {
  switch (v.kind) {
    case ConcreteValue::Kind::Int: return std::to_string(v.i);
    case ConcreteValue::Kind::Float: return format_double(v.f);
    case ConcreteValue::Kind::Bool: return v.b ? "True" : "False";
    case ConcreteValue::Kind::List: {
      std::string s = "[";
      bool first = true;
      for (const auto& e : v.list) {
        if (!first) s += ", ";
        first = false;
        s += render_literal(e);
      }
      return s + "]";
    }
  }
  return "?";
}

std::vector<ConcreteValue> parse_arg_tuple(const std::string& line) {
  std::vector<ConcreteValue> out;
  size_t pos = 0;

  auto skip_ws = [&] {
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) pos++;
  };
  std::function<ConcreteValue()> parse_value = [&]() -> ConcreteValue {
    skip_ws();
    if (pos >= line.size()) throw std::invalid_argument("empty literal");
    char c = line[pos];
    if (c == '[') {
      pos++;
      std::vector<ConcreteValue> xs;
      skip_ws();
      if (pos < line.size() && line[pos] == ']') {
        pos++;
        return ConcreteValue::of_list(std::move(xs));
      }
      for (;;) {
        xs.push_back(parse_value());
        skip_ws();
        if (pos < line.size() && line[pos] == ',') {
          pos++;
          continue;
        }
        if (pos < line.size() && line[pos] == ']') {
          pos++;
          return ConcreteValue::of_list(std::move(xs));
        }
        throw std::invalid_argument("malformed list literal");
      }
    }
    if (line.compare(pos, 4, "True") == 0) {
      pos += 4;
      return ConcreteValue::of_bool(true);
    }
    if (line.compare(pos, 5, "False") == 0) {
      pos += 5;
      return ConcreteValue::of_bool(false);
    }
    size_t start = pos;
    if (c == '-' || c == '+') pos++;
    bool is_float = false;
    while (pos < line.size() &&
           (std::isdigit(static_cast<unsigned char>(line[pos])) || line[pos] == '.' ||
            line[pos] == 'e' || line[pos] == 'E' ||
            ((line[pos] == '-' || line[pos] == '+') &&
             (line[pos - 1] == 'e' || line[pos - 1] == 'E')))) {
      if (line[pos] == '.' || line[pos] == 'e' || line[pos] == 'E') is_float = true;
      pos++;
    }
    std::string tok = line.substr(start, pos - start);
    if (tok.empty() || tok == "-" || tok == "+")
      throw std::invalid_argument("malformed literal near '" + line.substr(start) + "'");
    if (is_float) return ConcreteValue::of_float(std::strtod(tok.c_str(), nullptr));
    return ConcreteValue::of_int(std::stoll(tok));
  };

  skip_ws();
  if (pos >= line.size()) return out;
  // `()` spells the zero-argument tuple in input files.
  if (line.compare(pos, 2, "()") == 0 && pos + 2 == line.find_last_not_of(" \t") + 1)
    return out;
  for (;;) {
    out.push_back(parse_value());
    skip_ws();
    if (pos < line.size() && line[pos] == ',') {
      pos++;
      continue;
    }
    break;
  }
  skip_ws();
  if (pos != line.size())
    throw std::invalid_argument("trailing characters in argument tuple");
  return out;
}

namespace {

// Per-parameter value domains, materialized up front; list domains are
// ordered by length then lexicographically by elements.
std::vector<ConcreteValue> domain_values(const SubsetType& t, const OracleDomain& d) {
  std::vector<ConcreteValue> out;
  auto scalar_values = [&](Scalar s) {
    std::vector<ConcreteValue> vs;
    switch (s) {
      case Scalar::Int:
        for (long long v = d.int_min; v <= d.int_max; v++)
          vs.push_back(ConcreteValue::of_int(v));
        break;
      case Scalar::Float:
        for (double v : d.float_grid) vs.push_back(ConcreteValue::of_float(v));
        break;
      case Scalar::Bool:
        vs.push_back(ConcreteValue::of_bool(false));
        vs.push_back(ConcreteValue::of_bool(true));
        break;
    }
    return vs;
  };
  if (!t.is_list) return scalar_values(t.elem);

  std::vector<ConcreteValue> elems;
  if (t.elem == Scalar::Int) {
    for (long long v = d.elem_min; v <= d.elem_max; v++)
      elems.push_back(ConcreteValue::of_int(v));
  } else {
    elems = scalar_values(t.elem);
  }
  for (int len = 0; len <= d.list_len_max; len++) {
    std::vector<size_t> idx(static_cast<size_t>(len), 0);
    for (;;) {
      std::vector<ConcreteValue> xs;
      for (size_t k : idx) xs.push_back(elems[k]);
      out.push_back(ConcreteValue::of_list(std::move(xs)));
      int carry = len - 1;
      while (carry >= 0) {
        if (++idx[static_cast<size_t>(carry)] < elems.size()) break;
        idx[static_cast<size_t>(carry)] = 0;
        carry--;
      }
      if (carry < 0) break;
    }
  }
  return out;
}

}  // namespace

bool for_each_input(const TypeEnv& env, const OracleDomain& domain,
                    const std::function<bool(const std::vector<ConcreteValue>&)>& visit) {
  std::vector<std::vector<ConcreteValue>> domains;
  size_t total = 1;
  for (const auto& p : env.params) {
    domains.push_back(domain_values(env.of(p), domain));
    if (domains.back().empty()) return true;
    total *= domains.back().size();
    if (total > domain.max_tuples) return false;
  }
  std::vector<size_t> idx(domains.size(), 0);
  std::vector<ConcreteValue> args(domains.size());
  for (;;) {
    for (size_t k = 0; k < domains.size(); k++) args[k] = domains[k][idx[k]];
    if (!visit(args)) return true;
    int carry = static_cast<int>(domains.size()) - 1;
    while (carry >= 0) {
      if (++idx[static_cast<size_t>(carry)] < domains[static_cast<size_t>(carry)].size())
        break;
      idx[static_cast<size_t>(carry)] = 0;
      carry--;
    }
    if (carry < 0) break;
    if (domains.empty()) break;
  }
  return true;
}

BruteForceResult brute_force(const Cfg& cfg, const TypeEnv& env,
                             const ExecutionPath& target, const OracleDomain& domain) {
  BruteForceResult result{BruteForceResult::Kind::ExhaustedNoInput, {}};
  bool conclusive = for_each_input(env, domain, [&](const std::vector<ConcreteValue>& args) {
    RunResult r = run(cfg, env, args);
    if (!r.raised() && path_matches(r.trace, target)) {
      result = {BruteForceResult::Kind::FoundInput, args};
      return false;
    }
    return true;
  });
  if (!conclusive && result.kind != BruteForceResult::Kind::FoundInput)
    result.kind = BruteForceResult::Kind::Inconclusive;
  return result;
}

}  // namespace pathforge
