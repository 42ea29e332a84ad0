#include "crf/expr.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace crf;

TEST_CASE("parse basic grammar") {
  auto e = parse_expr("x1^2*x2", 2);
  CHECK(eval(e, std::vector<double>{2, 3}) == doctest::Approx(12.0));

  CHECK_THROWS_AS(parse_expr("sin(x3)", 2), ParseError);

  auto c = parse_expr("PI*exp(x1)", 1);
  CHECK(eval(c, std::vector<double>{0.0}) == doctest::Approx(3.14159265358979));

  CHECK_THROWS_AS(parse_expr("x1 +", 1), ParseError);
  CHECK_THROWS_AS(parse_expr("foo(x1)", 1), ParseError);
  CHECK_THROWS_AS(parse_expr("(x1", 1), ParseError);

  // whitespace insignificant, unary minus, nested functions
  auto w = parse_expr("  - x1 ^ 2 + sqrt( exp(x2) ) ", 2);
  std::vector<double> p{1.5, 0.0};
  CHECK(eval(w, p) == doctest::Approx(-2.25 + 1.0));

  // t-coordinates map after the x block
  auto t = parse_expr("x1*t1", 1, 1);
  CHECK(eval(t, std::vector<double>{3.0, 4.0}) == doctest::Approx(12.0));
  CHECK_THROWS_AS(parse_expr("t1", 2, 0), ParseError);
}

TEST_CASE("parse error has position") {
  try {
    parse_expr("x1 + foo", 1);
    CHECK(false);
  } catch (const ParseError& err) {
    CHECK(err.pos == 5);
  }
}

TEST_CASE("print/parse round trip is a semantic fixpoint") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int dim = 1 + static_cast<int>(rng.next() % 3);
    auto e = test::random_trig_poly(rng, dim);
    auto printed = print_expr(e);
    auto reparsed = parse_expr(printed, dim);
    CHECK(print_expr(reparsed) == printed);  // idempotent after one round
    for (int k = 0; k < 5; ++k) {
      Point p(dim);
      for (auto& x : p) x = rng.uniform(-2, 2);
      CHECK(std::abs(eval(e, p) - eval(reparsed, p)) < 1e-12);
    }
  }
}

TEST_CASE("symbolic partials: base cases") {
  auto x1 = coord(1);
  auto e = powi(x1, 2);
  auto de = partial(e, 1);
  CHECK(eval(de, std::vector<double>{3.0}) == doctest::Approx(6.0));

  auto s = sin_e(x1);
  auto ds = partial(s, 1);
  CHECK(eval(ds, std::vector<double>{0.5}) == doctest::Approx(std::cos(0.5)));
}

TEST_CASE("partials are linear and satisfy the product rule identically") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    int dim = 2;
    auto f = test::random_polynomial(rng, dim);
    auto g = test::random_trig_poly(rng, dim);
    auto lhs = partial(mul(f, g), 1);
    auto rhs = add(mul(partial(f, 1), g), mul(f, partial(g, 1)));
    for (int k = 0; k < 5; ++k) {
      Point p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
      CHECK(std::abs(eval(lhs, p) - eval(rhs, p)) < 1e-12);
    }
  }
}

TEST_CASE("partial vs central differences on random expressions") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    int dim = 1 + static_cast<int>(rng.next() % 3);
    auto e = test::random_trig_poly(rng, dim);
    for (int rep = 0; rep < 2; ++rep) {
      Point p(dim);
      for (auto& x : p) x = rng.uniform(-1.5, 1.5);
      for (int i = 0; i < dim; ++i) {
        double sym = eval(partial(e, i + 1), p);
        double num = test::central_diff5(e, p, i);
        double scale = std::max({1.0, std::abs(sym), std::abs(num)});
        CHECK(std::abs(sym - num) / scale < 1e-6);
      }
    }
  }
}

TEST_CASE("mixed partials commute (value equality)") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto e = test::random_trig_poly(rng, 3);
    auto dij = partial(partial(e, 1), 2);
    auto dji = partial(partial(e, 2), 1);
    for (int k = 0; k < 50; ++k) {
      Point p{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
      CHECK(std::abs(eval(dij, p) - eval(dji, p)) < 1e-10);
    }
  }
}

TEST_CASE("eval_jet value and gradient") {
  auto e = mul(powi(coord(1), 2), coord(2));
  Jet1 j = eval_jet(e, std::vector<double>{2, 3});
  CHECK(j.value == doctest::Approx(12.0));
  CHECK(j.gradient[0] == doctest::Approx(12.0));
  CHECK(j.gradient[1] == doctest::Approx(4.0));

  Jet1 c = eval_jet(lit(5), std::vector<double>{0.3, 0.7});
  CHECK(c.value == doctest::Approx(5.0));
  CHECK(c.gradient[0] == 0.0);
  CHECK(c.gradient[1] == 0.0);
}

TEST_CASE("eval_jet gradient vs 5-point differences on random expressions") {
  SplitMix64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    int dim = 1 + static_cast<int>(rng.next() % 3);
    auto e = test::random_trig_poly(rng, dim);
    Point p(dim);
    for (auto& x : p) x = rng.uniform(-1.5, 1.5);
    Jet1 j = eval_jet(e, p);
    for (int i = 0; i < dim; ++i) {
      double num = test::central_diff5(e, p, i);
      double scale = std::max({1.0, std::abs(j.gradient[i]), std::abs(num)});
      CHECK(std::abs(j.gradient[i] - num) / scale < 1e-6);
    }
  }
}

TEST_CASE("singular evaluations raise EvalError naming the subexpression") {
  auto e = div_e(lit(1), coord(1));
  CHECK_THROWS_AS(eval(e, std::vector<double>{0.0, 1.0}), EvalError);
  try {
    eval(e, std::vector<double>{0.0, 1.0});
  } catch (const EvalError& err) {
    CHECK(err.subexpr == "1/x1");
  }
  CHECK_THROWS_AS(eval(log_e(coord(1)), std::vector<double>{-1.0}), EvalError);
  CHECK_THROWS_AS(eval(sqrt_e(coord(1)), std::vector<double>{-1.0}), EvalError);
  CHECK(eval(e, std::vector<double>{2.0, 1.0}) == doctest::Approx(0.5));
}

TEST_CASE("constant folding does not change values") {
  SplitMix64 rng(23);
  // mirror of the construction without folding: evaluate both sides
  auto folded = add(mul(lit(2), lit(3)), mul(lit(0), coord(1)));
  CHECK(is_const(folded));
  CHECK(eval(folded, std::vector<double>{9.0}) == doctest::Approx(6.0));
  auto one = powi(coord(1), 0);
  CHECK(eval(one, std::vector<double>{4.2}) == doctest::Approx(1.0));
  (void)rng;
}
