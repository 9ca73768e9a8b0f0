#include <doctest.h>

#include <cstdlib>

#include "pathforge/solver.hpp"

using namespace pathforge;

namespace {

std::vector<SmtSymbol> decls_of(std::initializer_list<std::pair<const char*, Sort>> xs) {
  std::vector<SmtSymbol> out;
  for (const auto& [name, sort] : xs) {
    SmtSymbol s;
    s.name = name;
    s.sort = sort;
    out.push_back(s);
  }
  return out;
}

bool have_solver() { return std::getenv("PATHFORGE_SOLVER") != nullptr; }

}  // namespace

TEST_CASE("rational arithmetic is exact") {
  Rational half = Rational::of(1, 2);
  Rational third = Rational::of(1, 3);
  CHECK(half + third == Rational::of(5, 6));
  CHECK(half * third == Rational::of(1, 6));
  CHECK(half - third == Rational::of(1, 6));
  CHECK(half / third == Rational::of(3, 2));
  CHECK(Rational::from_double(0.5) == half);
  CHECK(Rational::of(-7, 2).floor() == -4);
  CHECK(Rational::of(7, 2).floor() == 3);
}

TEST_CASE("term rendering parenthesizes negatives and rationals") {
  CHECK(term_smtlib(t_int(-5)) == "(- 5)");
  CHECK(term_smtlib(t_int(5)) == "5");
  CHECK(term_smtlib(t_real(Rational::of(1, 2))) == "(/ 1.0 2.0)");
  CHECK(term_smtlib(t_app("+", {t_sym("x"), t_int(1)})) == "(+ x 1)");
}

TEST_CASE("model parsing: scalar define-funs") {
  auto decls = decls_of({{"x", Sort::Int}, {"y", Sort::Real}, {"b", Sort::Bool}});
  auto parsed = parse_model(
      "(\n"
      "  (define-fun x () Int (- 4))\n"
      "  (define-fun y () Real (/ 1.0 2.0))\n"
      "  (define-fun b () Bool true)\n"
      ")\n",
      decls);
  REQUIRE(std::holds_alternative<Model>(parsed));
  const Model& m = std::get<Model>(parsed);
  CHECK(m.lookup("x", Sort::Int) == Value::of_int(-4));
  CHECK(m.lookup("y", Sort::Real) == Value::of_real(Rational::of(1, 2)));
  CHECK(m.lookup("b", Sort::Bool) == Value::of_bool(true));
}

TEST_CASE("model parsing: store chain over a constant array") {
  auto decls = decls_of({{"a", Sort::ArrayIntInt}});
  auto parsed = parse_model(
      "((define-fun a () (Array Int Int)\n"
      "   (store (store ((as const (Array Int Int)) 0) 2 3) 0 7)))\n",
      decls);
  REQUIRE(std::holds_alternative<Model>(parsed));
  Value a = std::get<Model>(parsed).lookup("a", Sort::ArrayIntInt);
  CHECK(a.select(0) == Value::of_int(7));
  CHECK(a.select(1) == Value::of_int(0));
  CHECK(a.select(2) == Value::of_int(3));
}

TEST_CASE("model parsing: as-array indirection with an ite chain") {
  auto decls = decls_of({{"a", Sort::ArrayIntInt}});
  auto parsed = parse_model(
      "(\n"
      "  (define-fun a () (Array Int Int) (_ as-array k!0))\n"
      "  (define-fun k!0 ((x!0 Int)) Int\n"
      "    (ite (= x!0 1) 5 (ite (= x!0 3) 9 2)))\n"
      ")\n",
      decls);
  REQUIRE(std::holds_alternative<Model>(parsed));
  Value a = std::get<Model>(parsed).lookup("a", Sort::ArrayIntInt);
  CHECK(a.select(1) == Value::of_int(5));
  CHECK(a.select(3) == Value::of_int(9));
  CHECK(a.select(0) == Value::of_int(2));
}

TEST_CASE("model parsing: lambda form") {
  auto decls = decls_of({{"a", Sort::ArrayIntInt}});
  auto parsed = parse_model(
      "((define-fun a () (Array Int Int)\n"
      "   (lambda ((x!0 Int)) (ite (= x!0 0) 4 1))))\n",
      decls);
  REQUIRE(std::holds_alternative<Model>(parsed));
  Value a = std::get<Model>(parsed).lookup("a", Sort::ArrayIntInt);
  CHECK(a.select(0) == Value::of_int(4));
  CHECK(a.select(7) == Value::of_int(1));
}

TEST_CASE("model parsing: garbage reports an error") {
  auto parsed = parse_model("(define-fun x (", decls_of({{"x", Sort::Int}}));
  CHECK(std::holds_alternative<ModelParseError>(parsed));
}

TEST_CASE("missing symbols default by sort") {
  Model empty;
  CHECK(empty.lookup("x", Sort::Int) == Value::of_int(0));
  CHECK(empty.lookup("r", Sort::Real) == Value::of_real(Rational::of(0)));
  CHECK(empty.lookup("b", Sort::Bool) == Value::of_bool(false));
  Value arr = empty.lookup("a", Sort::ArrayIntInt);
  CHECK(arr.select(11) == Value::of_int(0));
}

TEST_CASE("eval_model checks assertions against a model") {
  SmtScript script;
  SmtSymbol x;
  x.name = "x";
  x.sort = Sort::Int;
  script.decls.push_back(x);
  script.asserts.push_back({t_app(">", {t_sym("x"), t_int(3)}), {}, false});

  Model good;
  good.bindings["x"] = Value::of_int(4);
  CHECK(eval_model(script, good));

  Model bad;
  bad.bindings["x"] = Value::of_int(3);
  CHECK(!eval_model(script, bad));
}

TEST_CASE("eval_model handles arrays, ite, and conversions") {
  SmtScript script;
  SmtSymbol a;
  a.name = "a";
  a.sort = Sort::ArrayIntInt;
  script.decls.push_back(a);
  // (= (select (store a 0 5) 0) 5)
  script.asserts.push_back(
      {t_eq(t_app("select", {t_app("store", {t_sym("a"), t_int(0), t_int(5)}),
                             t_int(0)}),
            t_int(5)),
       {},
       false});
  // (= (to_int (/ 7.0 2.0)) 3)
  script.asserts.push_back(
      {t_eq(t_app("to_int", {t_app("/", {t_real(Rational::of(7)),
                                         t_real(Rational::of(2))})}),
            t_int(3)),
       {},
       false});
  Model m;
  m.bindings["a"] = Value::of_array(Value::of_int(0), {});
  CHECK(eval_model(script, m));
}

TEST_CASE("external solver round trip" * doctest::skip(!have_solver())) {
  SolverConfig cfg = SolverConfig::from_environment();
  SmtScript script;
  SmtSymbol x;
  x.name = "x";
  x.sort = Sort::Int;
  script.decls.push_back(x);
  script.asserts.push_back({t_app(">", {t_sym("x"), t_int(3)}), {}, false});

  SolverVerdict v = solve(script, cfg);
  REQUIRE(is_sat(v));
  const Model& m = std::get<SatVerdict>(v).model;
  CHECK(m.lookup("x", Sort::Int).i > 3);
  CHECK(eval_model(script, m));

  script.asserts.push_back({t_app("<", {t_sym("x"), t_int(0)}), {}, false});
  CHECK(is_unsat(solve(script, cfg)));
}

TEST_CASE("solver failure surfaces for a missing executable") {
  SolverConfig cfg;
  cfg.command = {"definitely-not-a-solver-binary"};
  SmtScript script;
  SolverVerdict v = solve(script, cfg);
  CHECK(std::holds_alternative<SolverFailure>(v));
}
