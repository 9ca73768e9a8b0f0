#include "pathforge/solver.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pathforge/process.hpp"

namespace pathforge {

namespace fs = std::filesystem;

SolverConfig SolverConfig::from_environment() {
  SolverConfig cfg;
  if (const char* env = std::getenv("PATHFORGE_SOLVER")) {
    cfg.command.clear();
    std::istringstream is(env);
    std::string tok;
    while (is >> tok) cfg.command.push_back(tok);
    if (cfg.command.empty()) cfg.command = {"z3"};
  }
  return cfg;
}

Value Value::of_int(long long v) {
  Value x;
  x.kind = Kind::Int;
  x.i = v;
  return x;
}
Value Value::of_real(Rational v) {
  Value x;
  x.kind = Kind::Real;
  x.r = v;
  return x;
}
Value Value::of_bool(bool v) {
  Value x;
  x.kind = Kind::Bool;
  x.b = v;
  return x;
}
Value Value::of_array(Value dflt, std::vector<std::pair<long long, Value>> stores) {
  Value x;
  x.kind = Kind::Array;
  x.array_default = std::make_shared<Value>(std::move(dflt));
  x.stores = std::move(stores);
  return x;
}

Value Value::select(long long index) const {
  for (auto it = stores.rbegin(); it != stores.rend(); ++it)
    if (it->first == index) return it->second;
  return array_default ? *array_default : Value::of_int(0);
}

bool Value::operator==(const Value& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Int: return i == o.i;
    case Kind::Real: return r == o.r;
    case Kind::Bool: return b == o.b;
    case Kind::Array: {
      if (!(stores == o.stores)) return false;
      if ((array_default == nullptr) != (o.array_default == nullptr)) return false;
      return !array_default || *array_default == *o.array_default;
    }
  }
  return false;
}

Value Model::lookup(const std::string& name, Sort sort) const {
  auto it = bindings.find(name);
  if (it != bindings.end()) return it->second;
  switch (sort) {
    case Sort::Int: return Value::of_int(0);
    case Sort::Real: return Value::of_real(Rational::of(0));
    case Sort::Bool: return Value::of_bool(false);
    case Sort::ArrayIntInt: return Value::of_array(Value::of_int(0), {});
    case Sort::ArrayIntReal: return Value::of_array(Value::of_real(Rational::of(0)), {});
    case Sort::ArrayIntBool: return Value::of_array(Value::of_bool(false), {});
  }
  return Value::of_int(0);
}

bool is_sat(const SolverVerdict& v) { return std::holds_alternative<SatVerdict>(v); }
bool is_unsat(const SolverVerdict& v) { return std::holds_alternative<UnsatVerdict>(v); }

std::string verdict_name(const SolverVerdict& v) {
  if (std::holds_alternative<SatVerdict>(v)) return "sat";
  if (std::holds_alternative<UnsatVerdict>(v)) return "unsat";
  if (std::holds_alternative<UnknownVerdict>(v))
    return "unknown(" + std::get<UnknownVerdict>(v).reason + ")";
  return "solver-failure";
}

std::string emit_smtlib(const SmtScript& script, const std::string& logic) {
  std::string out;
  out += "(set-logic " + logic + ")\n";
  out += "(set-option :produce-models true)\n";
  for (const auto& d : script.decls)
    out += "(declare-const " + d.name + " " + sort_smtlib(d.sort) + ")\n";
  for (const auto& a : script.asserts)
    out += "(assert " + term_smtlib(a.term) + ")\n";
  out += "(check-sat)\n";
  out += "(get-model)\n";
  return out;
}

// ---------------------------------------------------------------------------
// S-expression parsing

namespace {

struct Sexpr {
  bool atom = false;
  std::string text;
  std::vector<Sexpr> items;

  const Sexpr& operator[](size_t i) const { return items[i]; }
  size_t size() const { return items.size(); }
  bool is(const std::string& s) const { return atom && text == s; }
};

struct SexprParser {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size()) {
      if (std::isspace(static_cast<unsigned char>(s[pos]))) {
        pos++;
      } else if (s[pos] == ';') {
        while (pos < s.size() && s[pos] != '\n') pos++;
      } else {
        break;
      }
    }
  }

  bool at_end() {
    skip_ws();
    return pos >= s.size();
  }

  Sexpr parse() {
    skip_ws();
    if (pos >= s.size()) throw std::runtime_error("unexpected end of model text");
    if (s[pos] == '(') {
      pos++;
      Sexpr e;
      for (;;) {
        skip_ws();
        if (pos >= s.size()) throw std::runtime_error("unbalanced parenthesis");
        if (s[pos] == ')') {
          pos++;
          return e;
        }
        e.items.push_back(parse());
      }
    }
    if (s[pos] == '"') {
      size_t start = pos++;
      while (pos < s.size() && s[pos] != '"') pos++;
      pos++;
      Sexpr e;
      e.atom = true;
      e.text = s.substr(start, pos - start);
      return e;
    }
    size_t start = pos;
    while (pos < s.size() && !std::isspace(static_cast<unsigned char>(s[pos])) &&
           s[pos] != '(' && s[pos] != ')')
      pos++;
    Sexpr e;
    e.atom = true;
    e.text = s.substr(start, pos - start);
    return e;
  }
};

bool is_number(const std::string& t) {
  if (t.empty()) return false;
  size_t i = 0;
  bool digit = false, dot = false;
  for (; i < t.size(); i++) {
    if (std::isdigit(static_cast<unsigned char>(t[i]))) digit = true;
    else if (t[i] == '.' && !dot) dot = true;
    else return false;
  }
  return digit;
}

// Numeric/boolean leaf evaluation for model bodies; `env` carries let-free
// lambda parameter bindings during array interpretation.
struct BodyEval {
  const std::map<std::string, Value>* outer = nullptr;

  Value eval(const Sexpr& e, const std::map<std::string, Value>& env) const {
    if (e.atom) {
      if (e.text == "true") return Value::of_bool(true);
      if (e.text == "false") return Value::of_bool(false);
      auto it = env.find(e.text);
      if (it != env.end()) return it->second;
      if (outer) {
        auto jt = outer->find(e.text);
        if (jt != outer->end()) return jt->second;
      }
      if (is_number(e.text)) {
        if (e.text.find('.') != std::string::npos) {
          double d = std::strtod(e.text.c_str(), nullptr);
          return Value::of_real(Rational::from_double(d));
        }
        return Value::of_int(std::stoll(e.text));
      }
      throw std::runtime_error("unknown atom '" + e.text + "' in model body");
    }
    if (e.size() == 0) throw std::runtime_error("empty s-expression");
    const Sexpr& head = e[0];
    if (head.is("-") && e.size() == 2) {
      Value v = eval(e[1], env);
      if (v.kind == Value::Kind::Real) return Value::of_real(-v.r);
      return Value::of_int(-v.i);
    }
    if (head.is("/") && e.size() == 3) {
      Value a = eval(e[1], env), b = eval(e[2], env);
      Rational ra = a.kind == Value::Kind::Real ? a.r : Rational::of(a.i);
      Rational rb = b.kind == Value::Kind::Real ? b.r : Rational::of(b.i);
      return Value::of_real(ra / rb);
    }
    throw std::runtime_error("unsupported model body operator '" +
                             (head.atom ? head.text : std::string("(...)")) + "'");
  }
};

bool is_as_const(const Sexpr& e) {
  // ((as const (Array Int Int)) v)
  return !e.atom && e.size() == 2 && !e[0].atom && e[0].size() >= 2 &&
         e[0][0].is("as") && e[0][1].is("const");
}

struct ModelBuilder {
  std::map<std::string, Value> consts;          // scalar bindings
  std::map<std::string, const Sexpr*> defs;     // all define-funs by name
  BodyEval body{};

  Value eval_array(const Sexpr& e, int depth) {
    if (depth > 64) throw std::runtime_error("array interpretation too deep");
    if (e.atom) {
      auto it = defs.find(e.text);
      if (it != defs.end()) return array_of_def(*it->second, depth + 1);
      throw std::runtime_error("unknown array atom '" + e.text + "'");
    }
    if (is_as_const(e)) {
      return Value::of_array(body.eval(e[1], {}), {});
    }
    if (e.size() == 4 && e[0].is("store")) {
      Value base = eval_array(e[1], depth + 1);
      Value idx = body.eval(e[2], {});
      Value val = body.eval(e[3], {});
      auto stores = base.stores;
      // normalize: later stores win; drop an earlier store at the same index
      stores.erase(std::remove_if(stores.begin(), stores.end(),
                                  [&](const auto& p) { return p.first == idx.i; }),
                   stores.end());
      stores.emplace_back(idx.i, val);
      return Value::of_array(base.array_default ? *base.array_default : Value::of_int(0),
                             std::move(stores));
    }
    if (e.size() == 3 && e[0].is("lambda")) {
      // (lambda ((x!0 Int)) body) with an ite chain over x!0
      const std::string& param = e[1][0][0].text;
      return array_of_ite_chain(e[2], param);
    }
    if (e.size() == 2 && e[0].is("_")) {
      throw std::runtime_error("unexpected (_ ...) array form");
    }
    if (e.size() == 2 && !e[0].atom && e[0].size() == 3 && e[0][0].is("_") &&
        e[0][1].is("as-array")) {
      // ((_ as-array f)) — should not occur as a full expr; handled below
    }
    if (e.size() == 3 && e[0].is("_") && e[1].is("as-array")) {
      auto it = defs.find(e[2].text);
      if (it == defs.end())
        throw std::runtime_error("as-array references unknown function");
      return array_of_def(*it->second, depth + 1);
    }
    throw std::runtime_error("unrecognized array value form");
  }

  // define-fun with one Int parameter and an ite chain body.
  Value array_of_def(const Sexpr& def, int depth) {
    // (define-fun name ((x!0 Int)) Sort body)
    const Sexpr& params = def[2];
    const Sexpr& bodyE = def[4];
    if (params.size() == 0) return eval_array(bodyE, depth + 1);
    const std::string& param = params[0][0].text;
    return array_of_ite_chain(bodyE, param);
  }

  Value array_of_ite_chain(const Sexpr& e, const std::string& param) {
    std::vector<std::pair<long long, Value>> stores;
    const Sexpr* cur = &e;
    for (;;) {
      if (!cur->atom && cur->size() == 4 && (*cur)[0].is("ite")) {
        const Sexpr& cond = (*cur)[1];
        // (= x!0 k) or (= k x!0)
        if (cond.atom || cond.size() != 3 || !cond[0].is("="))
          throw std::runtime_error("unsupported ite condition in array model");
        const Sexpr& lhs = cond[1];
        const Sexpr& rhs = cond[2];
        const Sexpr& idx_e = lhs.is(param) ? rhs : lhs;
        Value idx = body.eval(idx_e, {});
        Value val = body.eval((*cur)[2], {});
        bool dup = false;
        for (const auto& [i, v] : stores) dup |= i == idx.i;
        if (!dup) stores.emplace_back(idx.i, val);
        cur = &(*cur)[3];
        continue;
      }
      Value dflt = body.eval(*cur, {});
      return Value::of_array(std::move(dflt), std::move(stores));
    }
  }
};

}  // namespace

std::variant<Model, ModelParseError> parse_model(const std::string& text,
                                                 const std::vector<SmtSymbol>& decls) {
  try {
    SexprParser p{text};
    std::vector<Sexpr> top;
    while (!p.at_end()) top.push_back(p.parse());

    // Accept either a single (model ...)/(...)wrapper or a flat list.
    std::vector<const Sexpr*> defs;
    for (const auto& e : top) {
      if (e.atom) continue;
      if (e.size() > 0 && e[0].is("define-fun")) {
        defs.push_back(&e);
      } else {
        for (const auto& sub : e.items)
          if (!sub.atom && sub.size() > 0 && sub[0].is("define-fun"))
            defs.push_back(&sub);
      }
    }

    ModelBuilder mb;
    for (const auto* d : defs) mb.defs[(*d)[1].text] = d;

    std::map<std::string, Sort> want;
    for (const auto& d : decls) want[d.name] = d.sort;

    Model model;
    for (const auto* dp : defs) {
      const Sexpr& d = *dp;
      const std::string& name = d[1].text;
      auto it = want.find(name);
      if (it == want.end()) continue;  // solver auxiliary (k!0 etc.)
      Sort sort = it->second;
      const Sexpr& bodyE = d[4];
      if (is_array_sort(sort)) {
        model.bindings[name] = mb.eval_array(bodyE, 0);
      } else {
        model.bindings[name] = mb.body.eval(bodyE, {});
        // Ints reported as reals (or vice versa) normalize to the decl sort.
        Value& v = model.bindings[name];
        if (sort == Sort::Real && v.kind == Value::Kind::Int)
          v = Value::of_real(Rational::of(v.i));
        if (sort == Sort::Int && v.kind == Value::Kind::Real)
          v = Value::of_int(v.r.floor());
      }
    }
    return model;
  } catch (const std::exception& ex) {
    return ModelParseError{ex.what(), text.substr(0, 200)};
  }
}

// ---------------------------------------------------------------------------
// Solving

namespace {

std::string write_query(const std::string& text, const SolverConfig& cfg,
                        std::string* kept_path) {
  fs::path dir;
  if (!cfg.keep_dir.empty()) {
    dir = cfg.keep_dir;
    fs::create_directories(dir);
  } else {
    dir = fs::temp_directory_path();
  }
  static std::atomic<unsigned> counter{0};
  std::string name = "pathforge-query-" + std::to_string(::getpid()) + "-" +
                     std::to_string(counter++) + ".smt2";
  fs::path file = dir / name;
  std::ofstream os(file);
  os << text;
  os.close();
  if (kept_path) *kept_path = file.string();
  return file.string();
}

}  // namespace

RawSolveResult solve_text(const std::string& smtlib_text, const SolverConfig& cfg) {
  RawSolveResult res;
  std::string file = write_query(smtlib_text, cfg, nullptr);
  std::vector<std::string> argv = cfg.command;
  argv.push_back(file);
  ProcessResult pr = run_process(argv, cfg.timeout);
  if (cfg.keep_dir.empty()) fs::remove(file);
  else {
    std::ofstream os(file + ".out");
    os << pr.out;
  }

  if (pr.spawn_failed) {
    res.verdict = SolverFailure{pr.exit_code, "failed to launch solver process"};
    return res;
  }
  if (pr.timed_out) {
    res.verdict = UnknownVerdict{"timeout"};
    return res;
  }

  // Collect (error ...) lines from both streams.
  std::istringstream is(pr.out + "\n" + pr.err);
  std::string line, verdict_tok;
  std::string errors;
  std::string model_text;
  bool in_model = false;
  while (std::getline(is, line)) {
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.rfind("(error", 0) == 0) {
      errors += trimmed + "\n";
      continue;
    }
    if (!in_model && (trimmed == "sat" || trimmed == "unsat" || trimmed == "unknown")) {
      verdict_tok = trimmed;
      if (trimmed == "sat") in_model = true;
      continue;
    }
    if (in_model) {
      model_text += line;
      model_text += "\n";
    }
  }
  res.error_text = errors;

  if (verdict_tok == "unsat") {
    res.verdict = UnsatVerdict{};
  } else if (verdict_tok == "unknown") {
    res.verdict = UnknownVerdict{"solver reported unknown"};
  } else if (verdict_tok == "sat") {
    res.verdict = SatVerdict{};  // model attached by solve() when decls are known
    res.model_text = model_text;
  } else {
    res.verdict = SolverFailure{pr.exit_code, !errors.empty() ? errors
                                               : pr.err.substr(0, 400)};
  }
  return res;
}

SolverVerdict solve(const SmtScript& script, const SolverConfig& cfg) {
  std::string text = emit_smtlib(script, cfg.logic);
  RawSolveResult raw = solve_text(text, cfg);
  if (!std::holds_alternative<SatVerdict>(raw.verdict)) return raw.verdict;

  auto parsed = parse_model(raw.model_text, script.decls);
  if (std::holds_alternative<ModelParseError>(parsed)) {
    const auto& err = std::get<ModelParseError>(parsed);
    return SolverFailure{0, "model parse error: " + err.message};
  }
  return SatVerdict{std::get<Model>(std::move(parsed))};
}

// ---------------------------------------------------------------------------
// Model evaluation

namespace {

struct EvalValue {
  // Numeric evaluation over rationals keeps int/real uniform.
  enum class Kind { Num, Bool, Array } kind = Kind::Num;
  Rational num;
  bool b = false;
  Value arr;  // Kind::Array

  static EvalValue of_num(Rational r) { return {Kind::Num, r, false, {}}; }
  static EvalValue of_bool(bool v) { return {Kind::Bool, {}, v, {}}; }
  static EvalValue of_array(Value v) { return {Kind::Array, {}, false, std::move(v)}; }
};

EvalValue to_eval(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Int: return EvalValue::of_num(Rational::of(v.i));
    case Value::Kind::Real: return EvalValue::of_num(v.r);
    case Value::Kind::Bool: return EvalValue::of_bool(v.b);
    case Value::Kind::Array: return EvalValue::of_array(v);
  }
  return EvalValue::of_num(Rational::of(0));
}

class TermEvaluator {
 public:
  TermEvaluator(const SmtScript& script, const Model& model)
      : script_(script), model_(model) {}

  EvalValue eval(const TermPtr& t) {
    switch (t->kind) {
      case Term::Kind::IntConst: return EvalValue::of_num(Rational::of(t->int_val));
      case Term::Kind::RealConst: return EvalValue::of_num(t->real_val);
      case Term::Kind::BoolConst: return EvalValue::of_bool(t->bool_val);
      case Term::Kind::Symbol: {
        const SmtSymbol* d = script_.find_decl(t->op);
        Sort sort = d ? d->sort : Sort::Int;
        return to_eval(model_.lookup(t->op, sort));
      }
      case Term::Kind::App: return apply(t);
    }
    throw std::runtime_error("bad term");
  }

 private:
  EvalValue apply(const TermPtr& t) {
    const std::string& op = t->op;
    auto num = [&](size_t i) { return eval(t->args[i]).num; };
    auto boolean = [&](size_t i) { return eval(t->args[i]).b; };

    if (op == "+" || op == "-" || op == "*" || op == "/") {
      if (op == "-" && t->args.size() == 1) return EvalValue::of_num(-num(0));
      Rational acc = num(0);
      for (size_t i = 1; i < t->args.size(); i++) {
        Rational rhs = num(i);
        if (op == "+") acc = acc + rhs;
        else if (op == "-") acc = acc - rhs;
        else if (op == "*") acc = acc * rhs;
        else acc = acc / rhs;
      }
      return EvalValue::of_num(acc);
    }
    if (op == "to_real") return EvalValue::of_num(num(0));
    if (op == "to_int") return EvalValue::of_num(Rational::of(num(0).floor()));
    if (op == "<" || op == "<=" || op == ">" || op == ">=") {
      Rational a = num(0), b = num(1);
      bool r = op == "<" ? a < b : op == "<=" ? a <= b : op == ">" ? a > b : a >= b;
      return EvalValue::of_bool(r);
    }
    if (op == "=" || op == "distinct") {
      EvalValue a = eval(t->args[0]);
      EvalValue b = eval(t->args[1]);
      bool eq;
      if (a.kind == EvalValue::Kind::Array && b.kind == EvalValue::Kind::Array)
        eq = arrays_equal(a.arr, b.arr);
      else if (a.kind == EvalValue::Kind::Bool || b.kind == EvalValue::Kind::Bool)
        eq = a.b == b.b;
      else
        eq = a.num == b.num;
      return EvalValue::of_bool(op == "=" ? eq : !eq);
    }
    if (op == "and") {
      for (size_t i = 0; i < t->args.size(); i++)
        if (!boolean(i)) return EvalValue::of_bool(false);
      return EvalValue::of_bool(true);
    }
    if (op == "or") {
      for (size_t i = 0; i < t->args.size(); i++)
        if (boolean(i)) return EvalValue::of_bool(true);
      return EvalValue::of_bool(false);
    }
    if (op == "not") return EvalValue::of_bool(!boolean(0));
    if (op == "=>") return EvalValue::of_bool(!boolean(0) || boolean(1));
    if (op == "ite") {
      return boolean(0) ? eval(t->args[1]) : eval(t->args[2]);
    }
    if (op == "select") {
      EvalValue arr = eval(t->args[0]);
      Rational idx = num(1);
      return to_eval(arr.arr.select(idx.floor()));
    }
    if (op == "store") {
      EvalValue arr = eval(t->args[0]);
      Rational idx = num(1);
      EvalValue val = eval(t->args[2]);
      Value v = arr.arr;
      Value stored = val.kind == EvalValue::Kind::Bool ? Value::of_bool(val.b)
                     : val.kind == EvalValue::Kind::Array
                         ? val.arr
                         : (val.num.den == 1 ? Value::of_int(val.num.num)
                                             : Value::of_real(val.num));
      v.stores.erase(std::remove_if(v.stores.begin(), v.stores.end(),
                                    [&](const auto& p) { return p.first == idx.floor(); }),
                     v.stores.end());
      v.stores.emplace_back(idx.floor(), stored);
      return EvalValue::of_array(v);
    }
    throw std::runtime_error("eval_model: unsupported operator '" + op + "'");
  }

  // Arrays compare equal when defaults match and stores agree pointwise over
  // the union of touched indices. An under-approximation of extensional
  // equality that is exact for the scripts the translator emits.
  bool arrays_equal(const Value& a, const Value& b) {
    std::vector<long long> idxs;
    for (const auto& [i, v] : a.stores) idxs.push_back(i);
    for (const auto& [i, v] : b.stores) idxs.push_back(i);
    for (long long i : idxs)
      if (!(a.select(i) == b.select(i))) return false;
    Value da = a.array_default ? *a.array_default : Value::of_int(0);
    Value db = b.array_default ? *b.array_default : Value::of_int(0);
    return da == db;
  }

  const SmtScript& script_;
  const Model& model_;
};

}  // namespace

bool eval_model(const SmtScript& script, const Model& model) {
  TermEvaluator ev(script, model);
  for (const auto& a : script.asserts) {
    EvalValue v = ev.eval(a.term);
    if (v.kind != EvalValue::Kind::Bool || !v.b) return false;
  }
  return true;
}

}  // namespace pathforge
