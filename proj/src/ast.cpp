#include "pathforge/ast.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace pathforge {

std::string to_string(const SubsetType& t) {
  auto scalar_name = [](Scalar s) {
    switch (s) {
      case Scalar::Int: return "int";
      case Scalar::Float: return "float";
      case Scalar::Bool: return "bool";
    }
    return "?";
  };
  if (t.is_list) return std::string("List[") + scalar_name(t.elem) + "]";
  return scalar_name(t.elem);
}

namespace {
std::shared_ptr<Expr> node(Expr::Kind k, SourceSpan sp) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->span = sp;
  return e;
}
}  // namespace

ExprPtr make_int(long long v, SourceSpan sp) {
  auto e = node(Expr::Kind::IntLit, sp);
  e->int_val = v;
  return e;
}
ExprPtr make_float(double v, SourceSpan sp) {
  auto e = node(Expr::Kind::FloatLit, sp);
  e->float_val = v;
  return e;
}
ExprPtr make_bool(bool v, SourceSpan sp) {
  auto e = node(Expr::Kind::BoolLit, sp);
  e->bool_val = v;
  return e;
}
ExprPtr make_name(std::string n, SourceSpan sp) {
  auto e = node(Expr::Kind::Name, sp);
  e->name = std::move(n);
  return e;
}
ExprPtr make_unary(UnaryOp op, ExprPtr a, SourceSpan sp) {
  auto e = node(Expr::Kind::Unary, sp);
  e->uop = op;
  e->a = std::move(a);
  return e;
}
ExprPtr make_binary(BinOp op, ExprPtr a, ExprPtr b, SourceSpan sp) {
  auto e = node(Expr::Kind::Binary, sp);
  e->bop = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
ExprPtr make_boolbin(BoolOp op, ExprPtr a, ExprPtr b, SourceSpan sp) {
  auto e = node(Expr::Kind::BoolBin, sp);
  e->boolop = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
ExprPtr make_compare(CmpOp op, ExprPtr a, ExprPtr b, SourceSpan sp) {
  auto e = node(Expr::Kind::Compare, sp);
  e->cop = op;
  e->a = std::move(a);
  e->b = std::move(b);
  return e;
}
ExprPtr make_subscript(ExprPtr base, ExprPtr index, SourceSpan sp) {
  auto e = node(Expr::Kind::Subscript, sp);
  e->a = std::move(base);
  e->b = std::move(index);
  return e;
}
ExprPtr make_len(ExprPtr arg, SourceSpan sp) {
  auto e = node(Expr::Kind::Len, sp);
  e->a = std::move(arg);
  return e;
}
ExprPtr make_abs(ExprPtr arg, SourceSpan sp) {
  auto e = node(Expr::Kind::Abs, sp);
  e->a = std::move(arg);
  return e;
}
ExprPtr make_pop(std::string base, SourceSpan sp) {
  auto e = node(Expr::Kind::Pop, sp);
  e->name = std::move(base);
  return e;
}
ExprPtr make_append(std::string base, ExprPtr arg, SourceSpan sp) {
  auto e = node(Expr::Kind::Append, sp);
  e->name = std::move(base);
  e->a = std::move(arg);
  return e;
}
ExprPtr make_list(std::vector<ExprPtr> elems, SourceSpan sp) {
  auto e = node(Expr::Kind::ListLit, sp);
  e->elems = std::move(elems);
  return e;
}

const FunctionDef* SourceUnit::find(const std::string& name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Structural equality

bool same_tree(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  using K = Expr::Kind;
  switch (a.kind) {
    case K::IntLit: return a.int_val == b.int_val;
    case K::FloatLit: return a.float_val == b.float_val;
    case K::BoolLit: return a.bool_val == b.bool_val;
    case K::Name: return a.name == b.name;
    case K::Unary: return a.uop == b.uop && same_tree(*a.a, *b.a);
    case K::Binary:
      return a.bop == b.bop && same_tree(*a.a, *b.a) && same_tree(*a.b, *b.b);
    case K::BoolBin:
      return a.boolop == b.boolop && same_tree(*a.a, *b.a) && same_tree(*a.b, *b.b);
    case K::Compare:
      return a.cop == b.cop && same_tree(*a.a, *b.a) && same_tree(*a.b, *b.b);
    case K::Subscript: return same_tree(*a.a, *b.a) && same_tree(*a.b, *b.b);
    case K::Len:
    case K::Abs: return same_tree(*a.a, *b.a);
    case K::Pop: return a.name == b.name;
    case K::Append: return a.name == b.name && same_tree(*a.a, *b.a);
    case K::ListLit: {
      if (a.elems.size() != b.elems.size()) return false;
      for (size_t i = 0; i < a.elems.size(); i++)
        if (!same_tree(*a.elems[i], *b.elems[i])) return false;
      return true;
    }
  }
  return false;
}

namespace {
bool same_block(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); i++)
    if (!same_tree(*a[i], *b[i])) return false;
  return true;
}
bool same_lvalue(const LValue& a, const LValue& b) {
  if (a.name != b.name) return false;
  if ((a.index == nullptr) != (b.index == nullptr)) return false;
  return a.index == nullptr || same_tree(*a.index, *b.index);
}
}  // namespace

bool same_tree(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  using K = Stmt::Kind;
  auto opt_expr_eq = [](const ExprPtr& x, const ExprPtr& y) {
    if ((x == nullptr) != (y == nullptr)) return false;
    return x == nullptr || same_tree(*x, *y);
  };
  switch (a.kind) {
    case K::Assign: return same_lvalue(a.target, b.target) && same_tree(*a.value, *b.value);
    case K::AugAssign:
      return a.aug_op == b.aug_op && same_lvalue(a.target, b.target) &&
             same_tree(*a.value, *b.value);
    case K::If:
    case K::While:
      return same_tree(*a.value, *b.value) && same_block(a.body, b.body) &&
             same_block(a.orelse, b.orelse);
    case K::ForRange:
      return a.loop_var == b.loop_var && same_tree(*a.start, *b.start) &&
             same_tree(*a.stop, *b.stop) && same_tree(*a.step, *b.step) &&
             same_block(a.body, b.body);
    case K::ForEach:
      return a.loop_var == b.loop_var && same_tree(*a.value, *b.value) &&
             same_block(a.body, b.body);
    case K::Return: return opt_expr_eq(a.value, b.value);
    case K::ExprStmt: return same_tree(*a.value, *b.value);
    case K::Break:
    case K::Continue: return true;
  }
  return false;
}

bool same_tree(const FunctionDef& a, const FunctionDef& b) {
  if (a.name != b.name || a.params.size() != b.params.size()) return false;
  for (size_t i = 0; i < a.params.size(); i++) {
    if (a.params[i].name != b.params[i].name) return false;
    if (a.params[i].annot != b.params[i].annot) return false;
  }
  if (a.return_annot != b.return_annot) return false;
  return same_block(a.body, b.body);
}

bool same_tree(const SourceUnit& a, const SourceUnit& b) {
  if (a.functions.size() != b.functions.size()) return false;
  for (size_t i = 0; i < a.functions.size(); i++)
    if (!same_tree(a.functions[i], b.functions[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

const char* binop_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::FloorDiv: return "//";
    case BinOp::Mod: return "%";
  }
  return "?";
}

const char* cmpop_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

// Precedence levels, loosest first.
int prec(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::BoolBin: return e.boolop == BoolOp::Or ? 1 : 2;
    case Expr::Kind::Unary: return e.uop == UnaryOp::Not ? 3 : 7;
    case Expr::Kind::Compare: return 4;
    case Expr::Kind::Binary:
      return (e.bop == BinOp::Add || e.bop == BinOp::Sub) ? 5 : 6;
    default: return 10;
  }
}

void render(const Expr& e, std::string& out, int parent_prec);

void render_child(const ExprPtr& c, std::string& out, int my_prec, bool right_assoc_pad) {
  // Right operands at equal precedence need parens to keep left associativity.
  render(*c, out, right_assoc_pad ? my_prec + 1 : my_prec);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  std::string s = os.str();
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

void render(const Expr& e, std::string& out, int parent_prec) {
  int p = prec(e);
  bool need_paren = p < parent_prec;
  if (need_paren) out += "(";
  switch (e.kind) {
    case Expr::Kind::IntLit: out += std::to_string(e.int_val); break;
    case Expr::Kind::FloatLit: out += format_double(e.float_val); break;
    case Expr::Kind::BoolLit: out += e.bool_val ? "True" : "False"; break;
    case Expr::Kind::Name: out += e.name; break;
    case Expr::Kind::Unary:
      if (e.uop == UnaryOp::Not) {
        out += "not ";
        render(*e.a, out, p);
      } else {
        out += "-";
        render(*e.a, out, p + 1);
      }
      break;
    case Expr::Kind::Binary:
      render_child(e.a, out, p, false);
      out += " ";
      out += binop_text(e.bop);
      out += " ";
      render_child(e.b, out, p, true);
      break;
    case Expr::Kind::BoolBin:
      render_child(e.a, out, p, false);
      out += e.boolop == BoolOp::And ? " and " : " or ";
      render_child(e.b, out, p, true);
      break;
    case Expr::Kind::Compare:
      render_child(e.a, out, p + 1, false);
      out += " ";
      out += cmpop_text(e.cop);
      out += " ";
      render_child(e.b, out, p + 1, false);
      break;
    case Expr::Kind::Subscript:
      render(*e.a, out, 10);
      out += "[";
      render(*e.b, out, 0);
      out += "]";
      break;
    case Expr::Kind::Len:
      out += "len(";
      render(*e.a, out, 0);
      out += ")";
      break;
    case Expr::Kind::Abs:
      out += "abs(";
      render(*e.a, out, 0);
      out += ")";
      break;
    case Expr::Kind::Pop:
      out += e.name;
      out += ".pop()";
      break;
    case Expr::Kind::Append:
      out += e.name;
      out += ".append(";
      render(*e.a, out, 0);
      out += ")";
      break;
    case Expr::Kind::ListLit: {
      out += "[";
      bool first = true;
      for (const auto& el : e.elems) {
        if (!first) out += ", ";
        first = false;
        render(*el, out, 0);
      }
      out += "]";
      break;
    }
  }
  if (need_paren) out += ")";
}

std::string lvalue_text(const LValue& lv) {
  if (!lv.is_subscript()) return lv.name;
  std::string s = lv.name + "[";
  s += expr_text(*lv.index);
  s += "]";
  return s;
}

void print_block(const std::vector<StmtPtr>& body, std::string& out, int depth);

void print_stmt(const Stmt& s, std::string& out, int depth) {
  std::string indent(static_cast<size_t>(depth) * 4, ' ');
  out += indent;
  using K = Stmt::Kind;
  switch (s.kind) {
    case K::If:
      out += "if " + expr_text(*s.value) + ":\n";
      print_block(s.body, out, depth + 1);
      if (!s.orelse.empty()) {
        out += indent + "else:\n";
        print_block(s.orelse, out, depth + 1);
      }
      break;
    case K::While:
      out += "while " + expr_text(*s.value) + ":\n";
      print_block(s.body, out, depth + 1);
      break;
    case K::ForRange:
      out += "for " + s.loop_var + " in range(" + expr_text(*s.start) + ", " +
             expr_text(*s.stop) + ", " + expr_text(*s.step) + "):\n";
      print_block(s.body, out, depth + 1);
      break;
    case K::ForEach:
      out += "for " + s.loop_var + " in " + expr_text(*s.value) + ":\n";
      print_block(s.body, out, depth + 1);
      break;
    default:
      out += stmt_head_text(s);
      out += "\n";
      break;
  }
}

void print_block(const std::vector<StmtPtr>& body, std::string& out, int depth) {
  for (const auto& st : body) print_stmt(*st, out, depth);
}

}  // namespace

std::string expr_text(const Expr& e) {
  std::string out;
  render(e, out, 0);
  return out;
}

std::string stmt_head_text(const Stmt& s) {
  using K = Stmt::Kind;
  switch (s.kind) {
    case K::Assign:
      return lvalue_text(s.target) + " = " + expr_text(*s.value);
    case K::AugAssign:
      return lvalue_text(s.target) + " " + binop_text(s.aug_op) + "= " +
             expr_text(*s.value);
    case K::If: return "if " + expr_text(*s.value) + ":";
    case K::While: return "while " + expr_text(*s.value) + ":";
    case K::ForRange:
      return "for " + s.loop_var + " in range(" + expr_text(*s.start) + ", " +
             expr_text(*s.stop) + ", " + expr_text(*s.step) + "):";
    case K::ForEach:
      return "for " + s.loop_var + " in " + expr_text(*s.value) + ":";
    case K::Return:
      return s.value ? "return " + expr_text(*s.value) : "return";
    case K::ExprStmt: return expr_text(*s.value);
    case K::Break: return "break";
    case K::Continue: return "continue";
  }
  return "?";
}

std::string pretty_print(const FunctionDef& fn) {
  std::string out = "def " + fn.name + "(";
  bool first = true;
  for (const auto& p : fn.params) {
    if (!first) out += ", ";
    first = false;
    out += p.name;
    if (p.annot) out += ": " + to_string(*p.annot);
  }
  out += ")";
  if (fn.return_annot) out += " -> " + to_string(*fn.return_annot);
  out += ":\n";
  print_block(fn.body, out, 1);
  return out;
}

std::string pretty_print(const SourceUnit& unit) {
  std::string out;
  for (const auto& f : unit.functions) {
    if (!out.empty()) out += "\n";
    out += pretty_print(f);
  }
  return out;
}

}  // namespace pathforge
