#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace pathforge {

// Exact rational; solver models bind real symbols to these.
struct Rational {
  long long num = 0;
  long long den = 1;

  static Rational of(long long n, long long d = 1);
  static Rational from_double(double v);
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const { return {-num, den}; }
  auto operator<=>(const Rational& o) const {
    return num * o.den <=> o.num * den;
  }
  bool operator==(const Rational& o) const { return num * o.den == o.num * den; }
  long long floor() const;
};

enum class Sort { Int, Real, Bool, ArrayIntInt, ArrayIntReal, ArrayIntBool };

bool is_array_sort(Sort s);
Sort array_sort_of(Sort elem);
Sort elem_sort_of(Sort array);
std::string sort_smtlib(Sort s);

// S-expression style constraint term. `op` holds the SMT-LIB operator for
// applications ("+", "and", "select", "store", "to_real", "to_int", ...).
struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { IntConst, RealConst, BoolConst, Symbol, App };
  Kind kind = Kind::IntConst;
  long long int_val = 0;
  Rational real_val;
  bool bool_val = false;
  std::string op;  // symbol name, or operator for App
  std::vector<TermPtr> args;
};

TermPtr t_int(long long v);
TermPtr t_real(Rational v);
TermPtr t_bool(bool v);
TermPtr t_sym(std::string name);
TermPtr t_app(std::string op, std::vector<TermPtr> args);
TermPtr t_not(TermPtr a);
TermPtr t_eq(TermPtr a, TermPtr b);

// Collect the names of every symbol referenced by a term.
void collect_symbols(const TermPtr& t, std::vector<std::string>& out);

std::string term_smtlib(const TermPtr& t);

struct SmtSymbol {
  std::string name;
  Sort sort = Sort::Int;
  // Source binding: variable and SSA index this symbol renames; synthetic
  // helper symbols (floordiv quotients, list-literal bases) have var empty.
  std::string var;
  int ssa_index = 0;
  std::optional<int> origin_step;
};

struct Assertion {
  TermPtr term;
  std::optional<int> origin_step;  // index into ExecutionPath.steps
  bool synthetic = false;          // guard/length side constraints
};

// For each list parameter, the pair of index-0 symbols; scalars carry only
// `array` (the value symbol) with `len` empty.
struct ParamSymbols {
  std::string value;  // scalar symbol or array symbol
  std::string len;    // length symbol, lists only
};

struct SmtScript {
  std::vector<SmtSymbol> decls;
  std::vector<Assertion> asserts;
  std::map<std::string, ParamSymbols> param_map;

  const SmtSymbol* find_decl(const std::string& name) const;
};

}  // namespace pathforge
