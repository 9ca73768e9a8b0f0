#include <doctest.h>

#include "pathforge/parser.hpp"
#include "pathforge/typing.hpp"

using namespace pathforge;

namespace {

FunctionDef parse_first(const std::string& src) {
  SourceUnit u = parse_unit(src, "<test>");
  REQUIRE(!u.functions.empty());
  return u.functions.front();
}

}  // namespace

TEST_CASE("parser handles core statement forms") {
  auto fn = parse_first(
      "def f(a: int, n: list[int]) -> int:\n"
      "    total = 0\n"
      "    for x in n:\n"
      "        if x > a:\n"
      "            total += x\n"
      "    while total > 100:\n"
      "        total = total - 1\n"
      "    return total\n");
  CHECK(fn.name == "f");
  CHECK(fn.params.size() == 2);
  CHECK(fn.params[1].annot->is_list);
  CHECK(fn.body.size() == 4);
  CHECK(fn.body[1]->kind == Stmt::Kind::ForEach);
  CHECK(fn.body[2]->kind == Stmt::Kind::While);
}

TEST_CASE("chained comparison desugars to a conjunction") {
  auto fn = parse_first(
      "def f(a: int, b: int, c: int) -> bool:\n"
      "    return a < b < c\n");
  const Expr& r = *fn.body[0]->value;
  CHECK(r.kind == Expr::Kind::BoolBin);
  CHECK(expr_text(r) == "a < b and b < c");
}

TEST_CASE("class methods are flattened and self is dropped") {
  SourceUnit u = parse_unit(
      "class Solution:\n"
      "    def sumTwo(self, a: int, b: int) -> int:\n"
      "        return a + b\n",
      "<test>");
  REQUIRE(u.functions.size() == 1);
  CHECK(u.enclosing_class_name == "Solution");
  CHECK(u.functions[0].params.size() == 2);
  CHECK(u.functions[0].params[0].name == "a");
}

TEST_CASE("out-of-subset constructs raise unsupported-construct") {
  auto expect_unsupported = [](const std::string& src, const std::string& what) {
    try {
      parse_unit(src, "<test>");
      FAIL_CHECK("expected unsupported-construct for: " << what);
    } catch (const ParseError& ex) {
      CHECK(ex.unsupported());
    }
  };
  expect_unsupported("def f(x: int) -> int:\n    return x ** 2\n", "power");
  expect_unsupported("def f(n: list[int]) -> list[int]:\n    return n[1:2]\n",
                     "slice");
  expect_unsupported("def f(x: int) -> int:\n    y = {}\n    return x\n", "dict");
  expect_unsupported(
      "def f(n: list[int]) -> bool:\n    return 3 in n\n", "membership");
  expect_unsupported("def f(x: int) -> int:\n    g = lambda v: v\n    return x\n",
                     "lambda");
}

TEST_CASE("string conversion reports the precise construct") {
  try {
    parse_unit("def f(s: str):\n    y = str(s)\n    return y\n", "<test>");
    FAIL_CHECK("expected unsupported-construct");
  } catch (const ParseError& ex) {
    CHECK(ex.unsupported());
    CHECK(std::string(ex.what()).find("str conversion") != std::string::npos);
  }
}

TEST_CASE("pretty printed source re-parses to the same tree") {
  const char* sources[] = {
      "def f(a: int, b: int) -> int:\n"
      "    d = a - b\n"
      "    if d < 0:\n"
      "        d = -d\n"
      "    return d\n",
      "def g(n: list[int]) -> list[int]:\n"
      "    out = []\n"
      "    for i in range(len(n)):\n"
      "        out.append(n[i] * 2)\n"
      "    return out\n",
      "def h(x: float) -> float:\n"
      "    while x > 1.5:\n"
      "        x = x / 2.0\n"
      "    return x\n",
      "def k(n: list[int], t: int) -> int:\n"
      "    if len(n) > 0 and n[-1] == t:\n"
      "        n.pop()\n"
      "    return len(n)\n",
  };
  for (const char* src : sources) {
    SourceUnit a = parse_unit(src, "<test>");
    SourceUnit b = parse_unit(pretty_print(a), "<test>");
    CHECK(same_tree(a, b));
    // And the printer is a fixed point after one round.
    CHECK(pretty_print(a) == pretty_print(b));
  }
}

TEST_CASE("type inference resolves unannotated locals") {
  auto fn = parse_first(
      "def f(n: list[int]) -> int:\n"
      "    total = 0\n"
      "    for x in n:\n"
      "        total = total + x\n"
      "    return total\n");
  TypeEnv env = infer_types(fn);
  CHECK(!env.of("total").is_list);
  CHECK(env.of("total").elem == Scalar::Int);
  CHECK(env.of("x").elem == Scalar::Int);
  CHECK(env.of("n").is_list);
}

TEST_CASE("int and float widen to float") {
  auto fn = parse_first(
      "def f(a: int) -> float:\n"
      "    y = a + 0.5\n"
      "    return y\n");
  TypeEnv env = infer_types(fn);
  CHECK(env.of("y").elem == Scalar::Float);
}

TEST_CASE("true division of ints is a type error") {
  auto fn = parse_first(
      "def f(a: int, b: int) -> int:\n"
      "    q = a / b\n"
      "    return q\n");
  CHECK_THROWS_AS(infer_types(fn), TypeError);
}

TEST_CASE("list element types unify through append") {
  auto fn = parse_first(
      "def f(x: float) -> list[float]:\n"
      "    out = []\n"
      "    out.append(x)\n"
      "    return out\n");
  TypeEnv env = infer_types(fn);
  CHECK(env.of("out").is_list);
  CHECK(env.of("out").elem == Scalar::Float);
}

TEST_CASE("monomorphism violations raise a conflict error") {
  auto fn = parse_first(
      "def f(a: int) -> int:\n"
      "    b = True\n"
      "    b = a + 1\n"
      "    return b\n");
  CHECK_THROWS_AS(infer_types(fn), TypeError);
}
