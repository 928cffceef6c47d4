#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "caplab/errors.hpp"
#include "caplab/expression.hpp"

using caplab::Error;
using caplab::Expression;

TEST_CASE("literals and arithmetic evaluate exactly") {
  CHECK(Expression::parse("2").eval(0.0) == 2.0);
  CHECK(Expression::parse("2 + 3 * 4").eval(0.0) == 14.0);
  CHECK(Expression::parse("(2 + 3) * 4").eval(0.0) == 20.0);
  CHECK(Expression::parse("7 / 2").eval(0.0) == 3.5);
  CHECK(Expression::parse("2 - 5").eval(0.0) == -3.0);
  CHECK(Expression::parse("-u").eval(1.5) == -1.5);
  CHECK(Expression::parse("2^10").eval(0.0) == 1024.0);
  // right associativity of the power operator
  CHECK(Expression::parse("2^3^2").eval(0.0) == 512.0);
}

TEST_CASE("variable and named constants") {
  CHECK(Expression::parse("u").eval(0.75) == 0.75);
  CHECK(Expression::parse("pi").eval(0.0) == doctest::Approx(M_PI).epsilon(1e-15));
  CHECK(Expression::parse("sin(pi)").eval(0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("unary functions match the standard library") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.1, 2.0);
  Expression e_exp = Expression::parse("exp(u)");
  Expression e_sin = Expression::parse("sin(u)");
  Expression e_cos = Expression::parse("cos(u)");
  Expression e_sqrt = Expression::parse("sqrt(u)");
  Expression e_log = Expression::parse("log(u)");
  for (int i = 0; i < 50; ++i) {
    double u = U(rng);
    CHECK(e_exp.eval(u) == doctest::Approx(std::exp(u)).epsilon(1e-15));
    CHECK(e_sin.eval(u) == doctest::Approx(std::sin(u)).epsilon(1e-15));
    CHECK(e_cos.eval(u) == doctest::Approx(std::cos(u)).epsilon(1e-15));
    CHECK(e_sqrt.eval(u) == doctest::Approx(std::sqrt(u)).epsilon(1e-15));
    CHECK(e_log.eval(u) == doctest::Approx(std::log(u)).epsilon(1e-15));
  }
}

TEST_CASE("symbolic derivative against centered differences") {
  const char* cases[] = {
      "u^3 - 2*u + 1",
      "sin(2*u) * exp(-u)",
      "sqrt(1 + u^2)",
      "u / (1 + u)",
      "cos(u)^2",
      "log(1 + u) * u",
      "exp(u^2 / 2)",
  };
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0.05, 1.5);
  for (const char* text : cases) {
    CAPTURE(text);
    Expression f = Expression::parse(text);
    Expression fp = f.derivative();
    for (int i = 0; i < 20; ++i) {
      double u = U(rng);
      double h = 1e-5;
      // 4th-order central stencil keeps the oracle error ~1e-11 here
      double fd = (-f.eval(u + 2 * h) + 8 * f.eval(u + h) - 8 * f.eval(u - h) +
                   f.eval(u - 2 * h)) / (12 * h);
      CHECK(fp.eval(u) == doctest::Approx(fd).epsilon(1e-8));
    }
  }
}

TEST_CASE("second derivative is the derivative of the derivative") {
  Expression f = Expression::parse("sin(u) * u^2");
  Expression f2 = f.derivative().derivative();
  // d2/du2 (u^2 sin u) = (2 - u^2) sin u + 4 u cos u
  for (double u : {0.3, 0.9, 1.7}) {
    double exact = (2.0 - u * u) * std::sin(u) + 4.0 * u * std::cos(u);
    CHECK(f2.eval(u) == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("round trip through str reparses to the same values") {
  const char* cases[] = {"u^3 - 2*u + 1", "sin(2*u)*exp(-u)", "1/(1+u^2)"};
  for (const char* text : cases) {
    Expression f = Expression::parse(text);
    Expression g = Expression::parse(f.str());
    for (double u : {0.0, 0.4, 1.3}) CHECK(f.eval(u) == g.eval(u));
  }
}

TEST_CASE("parse errors are reported, not swallowed") {
  CHECK_THROWS_AS(Expression::parse(""), Error);
  CHECK_THROWS_AS(Expression::parse("2 +"), Error);
  CHECK_THROWS_AS(Expression::parse("(1 + u"), Error);
  CHECK_THROWS_AS(Expression::parse("sin()"), Error);
  CHECK_THROWS_AS(Expression::parse("bogus(u)"), Error);
  CHECK_THROWS_AS(Expression::parse("1 2"), Error);
  CHECK_THROWS_AS(Expression::parse("v + 1"), Error);
}
