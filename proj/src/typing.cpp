#include "pathforge/typing.hpp"

#include <functional>
#include <optional>
#include <set>

namespace pathforge {

const SubsetType& TypeEnv::of(const std::string& name) const {
  auto it = vars.find(name);
  if (it == vars.end())
    throw TypeError(TypeError::Kind::Other, name, "unknown variable '" + name + "'");
  return it->second;
}

void TypeEnv::add_hidden_int(const std::string& name) {
  vars.emplace(name, SubsetType::scalar(Scalar::Int));
}

namespace {

using OptType = std::optional<SubsetType>;

struct Inference {
  std::map<std::string, OptType> ty;
  std::set<std::string> read;   // variables whose value is ever used
  bool changed = false;

  void bind(const std::string& var, SubsetType t) {
    auto& slot = ty[var];
    if (!slot) {
      slot = t;
      changed = true;
    } else if (*slot != t) {
      // int and float unify to float, both for scalars written from
      // arithmetic and for list element types discovered incrementally.
      if (slot->is_list == t.is_list &&
          ((slot->elem == Scalar::Float && t.elem == Scalar::Int) ||
           (slot->elem == Scalar::Int && t.elem == Scalar::Float))) {
        if (slot->elem != Scalar::Float) {
          slot = slot->is_list ? SubsetType::list_of(Scalar::Float)
                               : SubsetType::scalar(Scalar::Float);
          changed = true;
        }
        return;
      }
      throw TypeError(TypeError::Kind::Conflict, var,
                      "conflicting types for '" + var + "': " + to_string(*slot) +
                          " vs " + to_string(t));
    }
  }

  OptType lookup(const std::string& var) {
    auto it = ty.find(var);
    return it == ty.end() ? std::nullopt : it->second;
  }
};

Scalar join_num(Scalar a, Scalar b) {
  if (a == Scalar::Float || b == Scalar::Float) return Scalar::Float;
  return Scalar::Int;
}

// Bottom-up expression typing with partial knowledge (nullopt = not yet
// known). As a side effect, unifies variables that constraints pin down.
OptType type_expr(const Expr& e, Inference& inf) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::IntLit: return SubsetType::scalar(Scalar::Int);
    case K::FloatLit: return SubsetType::scalar(Scalar::Float);
    case K::BoolLit: return SubsetType::scalar(Scalar::Bool);
    case K::Name:
      inf.read.insert(e.name);
      return inf.lookup(e.name);
    case K::Unary: {
      OptType a = type_expr(*e.a, inf);
      if (e.uop == UnaryOp::Not) {
        if (e.a->kind == K::Name) inf.bind(e.a->name, SubsetType::scalar(Scalar::Bool));
        return SubsetType::scalar(Scalar::Bool);
      }
      return a;
    }
    case K::Binary: {
      OptType a = type_expr(*e.a, inf);
      OptType b = type_expr(*e.b, inf);
      if (e.bop == BinOp::Div) {
        // `/` is float-only in the subset; int operands are rejected.
        for (const auto* side : {&a, &b}) {
          if (*side && !(*side)->is_list && (*side)->elem == Scalar::Int)
            throw TypeError(TypeError::Kind::Other, "",
                            "'/' on int operands; use '//' for integer division");
        }
        if (e.a->kind == K::Name) inf.bind(e.a->name, SubsetType::scalar(Scalar::Float));
        if (e.b->kind == K::Name) inf.bind(e.b->name, SubsetType::scalar(Scalar::Float));
        return SubsetType::scalar(Scalar::Float);
      }
      if (a && b) {
        if (a->is_list || b->is_list)
          throw TypeError(TypeError::Kind::Other, "", "arithmetic on list values");
        return SubsetType::scalar(join_num(a->elem, b->elem));
      }
      if (a && !a->is_list && a->elem == Scalar::Float)
        return SubsetType::scalar(Scalar::Float);
      if (b && !b->is_list && b->elem == Scalar::Float)
        return SubsetType::scalar(Scalar::Float);
      return std::nullopt;
    }
    case K::BoolBin: {
      type_expr(*e.a, inf);
      type_expr(*e.b, inf);
      return SubsetType::scalar(Scalar::Bool);
    }
    case K::Compare: {
      OptType a = type_expr(*e.a, inf);
      OptType b = type_expr(*e.b, inf);
      // Operands unify: a known side pins an unknown Name on the other side.
      if (a && !b && e.b->kind == K::Name) inf.bind(e.b->name, *a);
      if (b && !a && e.a->kind == K::Name) inf.bind(e.a->name, *b);
      return SubsetType::scalar(Scalar::Bool);
    }
    case K::Subscript: {
      OptType base = type_expr(*e.a, inf);
      OptType idx = type_expr(*e.b, inf);
      if (idx && (idx->is_list || idx->elem == Scalar::Float))
        throw TypeError(TypeError::Kind::Other, "", "list index must be int");
      if (e.b->kind == K::Name) inf.bind(e.b->name, SubsetType::scalar(Scalar::Int));
      if (base) {
        if (!base->is_list)
          throw TypeError(TypeError::Kind::Other, "", "subscript of non-list value");
        return SubsetType::scalar(base->elem);
      }
      return std::nullopt;
    }
    case K::Len: {
      OptType a = type_expr(*e.a, inf);
      if (a && !a->is_list)
        throw TypeError(TypeError::Kind::Other, "", "len() of non-list value");
      return SubsetType::scalar(Scalar::Int);
    }
    case K::Abs: return type_expr(*e.a, inf);
    case K::Pop: {
      inf.read.insert(e.name);
      OptType base = inf.lookup(e.name);
      if (base) {
        if (!base->is_list)
          throw TypeError(TypeError::Kind::Other, e.name, "pop() of non-list value");
        return SubsetType::scalar(base->elem);
      }
      return std::nullopt;
    }
    case K::Append: {
      inf.read.insert(e.name);
      OptType base = inf.lookup(e.name);
      OptType val = type_expr(*e.a, inf);
      if (base && val && !val->is_list) {
        // Appending a float to an int list widens the list; any other
        // mismatch beyond the int/float pair is a conflict.
        if (base->elem != val->elem &&
            !(base->elem == Scalar::Float && val->elem == Scalar::Int)) {
          if (base->elem == Scalar::Int && val->elem == Scalar::Float)
            inf.bind(e.name, SubsetType::list_of(Scalar::Float));
          else
            throw TypeError(TypeError::Kind::Conflict, e.name,
                            "appending " + to_string(*val) + " to " +
                                to_string(*base));
        }
      }
      if (!base && val && !val->is_list)
        inf.bind(e.name, SubsetType::list_of(val->elem));
      return std::nullopt;
    }
    case K::ListLit: {
      std::optional<Scalar> elem;
      for (const auto& el : e.elems) {
        OptType t = type_expr(*el, inf);
        if (!t) return std::nullopt;
        if (t->is_list)
          throw TypeError(TypeError::Kind::Other, "", "nested list literal");
        elem = elem ? join_num(*elem, t->elem) : t->elem;
      }
      return SubsetType::list_of(elem.value_or(Scalar::Int));
    }
  }
  return std::nullopt;
}

void walk_stmt(const Stmt& s, Inference& inf) {
  using K = Stmt::Kind;
  switch (s.kind) {
    case K::Assign: {
      OptType rhs = type_expr(*s.value, inf);
      if (s.target.is_subscript()) {
        inf.read.insert(s.target.name);
        type_expr(*s.target.index, inf);
        if (s.target.index->kind == Expr::Kind::Name)
          inf.bind(s.target.index->name, SubsetType::scalar(Scalar::Int));
        OptType base = inf.lookup(s.target.name);
        if (base && !base->is_list)
          throw TypeError(TypeError::Kind::Other, s.target.name,
                          "subscript assignment to non-list");
        if (rhs && rhs->is_list)
          throw TypeError(TypeError::Kind::Other, s.target.name,
                          "list stored into list element");
        if (!base && rhs) inf.bind(s.target.name, SubsetType::list_of(rhs->elem));
      } else if (rhs) {
        inf.bind(s.target.name, *rhs);
      }
      break;
    }
    case K::AugAssign: {
      OptType rhs = type_expr(*s.value, inf);
      if (s.target.is_subscript()) {
        inf.read.insert(s.target.name);
        type_expr(*s.target.index, inf);
      } else {
        inf.read.insert(s.target.name);
        OptType cur = inf.lookup(s.target.name);
        if (s.aug_op == BinOp::Div)
          throw TypeError(TypeError::Kind::Other, s.target.name,
                          "'/=' is not in the subset");
        if (!cur && rhs && !rhs->is_list) inf.bind(s.target.name, *rhs);
        if (cur && rhs && !cur->is_list && !rhs->is_list &&
            rhs->elem == Scalar::Float)
          inf.bind(s.target.name, SubsetType::scalar(Scalar::Float));
      }
      break;
    }
    case K::If:
    case K::While:
      type_expr(*s.value, inf);
      for (const auto& c : s.body) walk_stmt(*c, inf);
      for (const auto& c : s.orelse) walk_stmt(*c, inf);
      break;
    case K::ForRange: {
      for (const ExprPtr& bound : {s.start, s.stop, s.step}) {
        OptType t = type_expr(*bound, inf);
        if (t && (t->is_list || t->elem != Scalar::Int))
          throw TypeError(TypeError::Kind::Other, s.loop_var,
                          "range() bounds must be int");
        if (bound->kind == Expr::Kind::Name)
          inf.bind(bound->name, SubsetType::scalar(Scalar::Int));
      }
      inf.bind(s.loop_var, SubsetType::scalar(Scalar::Int));
      for (const auto& c : s.body) walk_stmt(*c, inf);
      break;
    }
    case K::ForEach: {
      OptType it = type_expr(*s.value, inf);
      if (it) {
        if (!it->is_list)
          throw TypeError(TypeError::Kind::Other, s.loop_var,
                          "for-each over non-list value");
        inf.bind(s.loop_var, SubsetType::scalar(it->elem));
      }
      for (const auto& c : s.body) walk_stmt(*c, inf);
      break;
    }
    case K::Return:
      if (s.value) type_expr(*s.value, inf);
      break;
    case K::ExprStmt:
      type_expr(*s.value, inf);
      break;
    case K::Break:
    case K::Continue:
      break;
  }
}

void collect_written(const Stmt& s, std::set<std::string>& out) {
  if (s.kind == Stmt::Kind::Assign || s.kind == Stmt::Kind::AugAssign)
    out.insert(s.target.name);
  if (s.kind == Stmt::Kind::ForRange || s.kind == Stmt::Kind::ForEach)
    out.insert(s.loop_var);
  for (const auto& c : s.body) collect_written(*c, out);
  for (const auto& c : s.orelse) collect_written(*c, out);
}

}  // namespace

TypeEnv infer_types(const FunctionDef& fn) {
  Inference inf;
  for (const auto& p : fn.params)
    if (p.annot) inf.ty[p.name] = p.annot;

  // Fixed point: re-walk the whole body until no new information appears.
  for (int round = 0; round < 64; round++) {
    inf.changed = false;
    for (const auto& s : fn.body) walk_stmt(*s, inf);
    if (!inf.changed) break;
  }

  std::set<std::string> written;
  for (const auto& s : fn.body) collect_written(*s, written);

  TypeEnv env;
  for (const auto& p : fn.params) env.params.push_back(p.name);

  std::set<std::string> all;
  for (const auto& p : fn.params) all.insert(p.name);
  for (const auto& [name, t] : inf.ty) all.insert(name);
  for (const auto& name : written) all.insert(name);
  for (const auto& name : inf.read) all.insert(name);

  for (const auto& name : all) {
    OptType t = inf.lookup(name);
    if (!t) {
      bool is_param = false;
      for (const auto& p : fn.params) is_param |= p.name == name;
      if (inf.read.count(name) || is_param)
        throw TypeError(TypeError::Kind::Unresolved, name,
                        "cannot resolve a type for '" + name + "'");
      // Unconstrained, never-read temporary: default Int with a warning.
      env.warnings.push_back("variable '" + name + "' defaulted to int");
      t = SubsetType::scalar(Scalar::Int);
    }
    env.vars.emplace(name, *t);
  }

  // Annotation priority: the final type must equal the annotation.
  for (const auto& p : fn.params) {
    if (p.annot && env.vars.at(p.name) != *p.annot)
      throw TypeError(TypeError::Kind::Conflict, p.name,
                      "inferred type contradicts annotation on '" + p.name + "'");
  }
  return env;
}

Scalar scalar_type_of(const Expr& e, const TypeEnv& env) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::IntLit: return Scalar::Int;
    case K::FloatLit: return Scalar::Float;
    case K::BoolLit: return Scalar::Bool;
    case K::Name: {
      const SubsetType& t = env.of(e.name);
      return t.is_list ? t.elem : t.elem;
    }
    case K::Unary:
      return e.uop == UnaryOp::Not ? Scalar::Bool : scalar_type_of(*e.a, env);
    case K::Binary:
      if (e.bop == BinOp::Div) return Scalar::Float;
      return join_num(scalar_type_of(*e.a, env), scalar_type_of(*e.b, env));
    case K::BoolBin:
    case K::Compare: return Scalar::Bool;
    case K::Subscript: {
      if (e.a->kind == K::Name) return env.of(e.a->name).elem;
      return Scalar::Int;
    }
    case K::Len: return Scalar::Int;
    case K::Abs: return scalar_type_of(*e.a, env);
    case K::Pop: return env.of(e.name).elem;
    case K::Append: return Scalar::Int;
    case K::ListLit: {
      Scalar s = Scalar::Int;
      for (const auto& el : e.elems) s = join_num(s, scalar_type_of(*el, env));
      return s;
    }
  }
  return Scalar::Int;
}

}  // namespace pathforge
