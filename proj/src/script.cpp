#include "pathforge/script.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pathforge {

Rational Rational::of(long long n, long long d) {
  if (d == 0) throw std::invalid_argument("rational with zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  long long g = std::gcd(n < 0 ? -n : n, d);
  if (g > 1) {
    n /= g;
    d /= g;
  }
  return Rational{n, d};
}

Rational Rational::from_double(double v) {
  // Doubles in the subset are decimal literals and small arithmetic results;
  // scale by a power of two until exact.
  long long den = 1;
  double x = v;
  for (int i = 0; i < 60 && x != std::floor(x); i++) {
    x *= 2;
    den *= 2;
  }
  return of(static_cast<long long>(x), den);
}

Rational Rational::operator+(const Rational& o) const {
  return of(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
  return of(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const {
  return of(num * o.num, den * o.den);
}
Rational Rational::operator/(const Rational& o) const {
  if (o.num == 0) throw std::invalid_argument("rational division by zero");
  return of(num * o.den, den * o.num);
}

long long Rational::floor() const {
  long long q = num / den;
  if (num % den != 0 && num < 0) q--;
  return q;
}

bool is_array_sort(Sort s) {
  return s == Sort::ArrayIntInt || s == Sort::ArrayIntReal || s == Sort::ArrayIntBool;
}

Sort array_sort_of(Sort elem) {
  switch (elem) {
    case Sort::Int: return Sort::ArrayIntInt;
    case Sort::Real: return Sort::ArrayIntReal;
    case Sort::Bool: return Sort::ArrayIntBool;
    default: throw std::invalid_argument("nested array sort");
  }
}

Sort elem_sort_of(Sort array) {
  switch (array) {
    case Sort::ArrayIntInt: return Sort::Int;
    case Sort::ArrayIntReal: return Sort::Real;
    case Sort::ArrayIntBool: return Sort::Bool;
    default: throw std::invalid_argument("not an array sort");
  }
}

std::string sort_smtlib(Sort s) {
  switch (s) {
    case Sort::Int: return "Int";
    case Sort::Real: return "Real";
    case Sort::Bool: return "Bool";
    case Sort::ArrayIntInt: return "(Array Int Int)";
    case Sort::ArrayIntReal: return "(Array Int Real)";
    case Sort::ArrayIntBool: return "(Array Int Bool)";
  }
  return "?";
}

TermPtr t_int(long long v) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::IntConst;
  t->int_val = v;
  return t;
}
TermPtr t_real(Rational v) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::RealConst;
  t->real_val = v;
  return t;
}
TermPtr t_bool(bool v) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::BoolConst;
  t->bool_val = v;
  return t;
}
TermPtr t_sym(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::Symbol;
  t->op = std::move(name);
  return t;
}
TermPtr t_app(std::string op, std::vector<TermPtr> args) {
  auto t = std::make_shared<Term>();
  t->kind = Term::Kind::App;
  t->op = std::move(op);
  t->args = std::move(args);
  return t;
}
TermPtr t_not(TermPtr a) { return t_app("not", {std::move(a)}); }
TermPtr t_eq(TermPtr a, TermPtr b) { return t_app("=", {std::move(a), std::move(b)}); }

void collect_symbols(const TermPtr& t, std::vector<std::string>& out) {
  if (t->kind == Term::Kind::Symbol) {
    out.push_back(t->op);
    return;
  }
  for (const auto& a : t->args) collect_symbols(a, out);
}

std::string term_smtlib(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::IntConst:
      if (t->int_val < 0)
        return "(- " + std::to_string(-t->int_val) + ")";
      return std::to_string(t->int_val);
    case Term::Kind::RealConst: {
      const Rational& r = t->real_val;
      std::string mag = std::to_string(r.num < 0 ? -r.num : r.num) + ".0";
      std::string body =
          r.den == 1 ? mag : "(/ " + mag + " " + std::to_string(r.den) + ".0)";
      if (r.num < 0) return "(- " + body + ")";
      return body;
    }
    case Term::Kind::BoolConst:
      return t->bool_val ? "true" : "false";
    case Term::Kind::Symbol:
      return t->op;
    case Term::Kind::App: {
      std::string s = "(" + t->op;
      for (const auto& a : t->args) {
        s += " ";
        s += term_smtlib(a);
      }
      return s + ")";
    }
  }
  return "?";
}

const SmtSymbol* SmtScript::find_decl(const std::string& name) const {
  for (const auto& d : decls)
    if (d.name == name) return &d;
  return nullptr;
}

}  // namespace pathforge
