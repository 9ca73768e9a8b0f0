#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pathforge {

struct SourceSpan {
  int line = 1;    // 1-based
  int col = 0;     // 0-based
  int length = 0;
};

enum class Scalar { Int, Float, Bool };

// Scalars plus homogeneous, non-nested lists of scalars.
struct SubsetType {
  bool is_list = false;
  Scalar elem = Scalar::Int;

  static SubsetType scalar(Scalar s) { return {false, s}; }
  static SubsetType list_of(Scalar s) { return {true, s}; }
  bool operator==(const SubsetType&) const = default;
};

std::string to_string(const SubsetType& t);

enum class BinOp { Add, Sub, Mul, Div, FloorDiv, Mod };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class BoolOp { And, Or };
enum class UnaryOp { Neg, Not };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind {
    IntLit,
    FloatLit,
    BoolLit,
    Name,
    Unary,
    Binary,
    BoolBin,
    Compare,
    Subscript,
    Len,
    Abs,
    Pop,      // value-position n.pop()
    Append,   // n.append(e); statement position only
    ListLit,
  };

  Kind kind;
  SourceSpan span;

  long long int_val = 0;
  double float_val = 0.0;
  bool bool_val = false;
  std::string name;   // Name; also the base variable of Pop

  UnaryOp uop{};
  BinOp bop{};
  BoolOp boolop{};
  CmpOp cop{};

  ExprPtr a;  // operand / lhs / subscript base / len+abs argument
  ExprPtr b;  // rhs / subscript index
  std::vector<ExprPtr> elems;  // ListLit
};

ExprPtr make_int(long long v, SourceSpan sp = {});
ExprPtr make_float(double v, SourceSpan sp = {});
ExprPtr make_bool(bool v, SourceSpan sp = {});
ExprPtr make_name(std::string n, SourceSpan sp = {});
ExprPtr make_unary(UnaryOp op, ExprPtr a, SourceSpan sp = {});
ExprPtr make_binary(BinOp op, ExprPtr a, ExprPtr b, SourceSpan sp = {});
ExprPtr make_boolbin(BoolOp op, ExprPtr a, ExprPtr b, SourceSpan sp = {});
ExprPtr make_compare(CmpOp op, ExprPtr a, ExprPtr b, SourceSpan sp = {});
ExprPtr make_subscript(ExprPtr base, ExprPtr index, SourceSpan sp = {});
ExprPtr make_len(ExprPtr arg, SourceSpan sp = {});
ExprPtr make_abs(ExprPtr arg, SourceSpan sp = {});
ExprPtr make_pop(std::string base, SourceSpan sp = {});
ExprPtr make_append(std::string base, ExprPtr arg, SourceSpan sp = {});
ExprPtr make_list(std::vector<ExprPtr> elems, SourceSpan sp = {});

// Assignment target: a variable or a single list subscript.
struct LValue {
  std::string name;
  ExprPtr index;  // null for plain variables
  SourceSpan span;
  bool is_subscript() const { return index != nullptr; }
};

struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;

struct Stmt {
  enum class Kind {
    Assign,
    AugAssign,
    If,
    While,
    ForRange,
    ForEach,
    Return,
    ExprStmt,  // x.append(e) or x.pop() only
    Break,
    Continue,
  };

  Kind kind;
  SourceSpan span;

  LValue target;       // Assign/AugAssign
  BinOp aug_op{};      // AugAssign
  ExprPtr value;       // rhs / return value / condition / ForEach iterable / ExprStmt
  ExprPtr start, stop, step;  // ForRange
  std::string loop_var;       // ForRange/ForEach
  std::vector<StmtPtr> body;
  std::vector<StmtPtr> orelse;
};

struct Param {
  std::string name;
  std::optional<SubsetType> annot;
  SourceSpan span;
};

struct FunctionDef {
  std::string name;
  std::vector<Param> params;
  std::optional<SubsetType> return_annot;
  std::vector<StmtPtr> body;
  SourceSpan span;
};

struct SourceUnit {
  std::vector<FunctionDef> functions;
  std::optional<std::string> enclosing_class_name;
  std::string source_text;
  std::string path;

  const FunctionDef* find(const std::string& name) const;
};

// Structural equality, ignoring spans. Used by the parser round-trip property.
bool same_tree(const Expr& a, const Expr& b);
bool same_tree(const Stmt& a, const Stmt& b);
bool same_tree(const FunctionDef& a, const FunctionDef& b);
bool same_tree(const SourceUnit& a, const SourceUnit& b);

// Normalized single-line rendering of expressions and simple statements,
// used for CFG node text and path steps.
std::string expr_text(const Expr& e);
std::string stmt_head_text(const Stmt& s);

// Full pretty printer; output re-parses to a structurally identical tree.
std::string pretty_print(const SourceUnit& unit);
std::string pretty_print(const FunctionDef& fn);

}  // namespace pathforge
