#include <doctest.h>

#include <cmath>
#include <numbers>

#include "../oracles.hpp"
#include "daecanon/errors.hpp"
#include "daecanon/matrix_fn.hpp"
#include "helpers.hpp"

using namespace daecanon;

TEST_CASE("parse evaluates arithmetic and functions") {
  ParamMap p{{"eta", 0.5}};
  CHECK(parse("1+2*3", {}).eval(0) == doctest::Approx(7));
  CHECK(parse("sin(t)^2+cos(t)^2", {}).eval(0.7) == doctest::Approx(1));
  CHECK(parse("eta*t", p).eval(4) == doctest::Approx(2));
  CHECK(parse("2^3", {}).eval(0) == doctest::Approx(8));
  CHECK(parse("exp(log(3))", {}).eval(0) == doctest::Approx(3));
  CHECK(parse("sqrt(t)/tan(t)", {}).eval(1.0) == doctest::Approx(1 / std::tan(1.0)));
}

TEST_CASE("unary minus binds looser than power") {
  CHECK(parse("-t^2", {}).eval(3) == doctest::Approx(-9));
  CHECK(parse("-t^2-1", {}).eval(1) == doctest::Approx(-2));
  CHECK(parse("(-t)^2", {}).eval(3) == doctest::Approx(9));
  CHECK(parse("2*-t", {}).eval(3) == doctest::Approx(-6));
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse("1+", {}), ParseError);
  CHECK_THROWS_AS(parse("(t", {}), ParseError);
  CHECK_THROWS_AS(parse("t^x", {}), ParseError);
  CHECK_THROWS_AS(parse("foo*t", {}), ParseError);
  CHECK_THROWS_AS(parse("sin t", {}), ParseError);
  CHECK_THROWS_AS(parse("t)", {}), ParseError);
}

TEST_CASE("derivatives of known functions") {
  ScalarFn gamma = parse("sqrt((-t+1)^2+1)", {});
  CHECK(std::abs(gamma.derivative().eval(1.0)) < 1e-14);
  CHECK(parse("t^3", {}).derivative(2).eval(2) == doctest::Approx(12));
  CHECK(parse("sin(t)", {}).derivative(4).eval(0.3) == doctest::Approx(std::sin(0.3)));
  CHECK(parse("log(t)", {}).derivative().eval(4) == doctest::Approx(0.25));
  CHECK(parse("tan(t)", {}).derivative().eval(0.4) == doctest::Approx(1 / std::pow(std::cos(0.4), 2)));
  CHECK(parse("1/t", {}).derivative().eval(2) == doctest::Approx(-0.25));
}

TEST_CASE("derivatives agree with central differences") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    testing::ExprGen g(seed);
    std::string src = g.expression(3);
    ScalarFn f = parse(src, g.params());
    ScalarFn df = f.derivative();
    for (double t : {-0.9, 0.2, 1.1}) {
      double h = 1e-5;
      double fd = (f.eval(t - 2 * h) - 8 * f.eval(t - h) + 8 * f.eval(t + h) - f.eval(t + 2 * h)) / (12 * h);
      CHECK_MESSAGE(std::abs(df.eval(t) - fd) <= 1e-6 * std::max(1.0, std::abs(fd)), src);
    }
  }
}

TEST_CASE("hash-consing shares equal subexpressions") {
  ScalarFn a = parse("sin(t)*t", {});
  ScalarFn b = parse("sin(t)*t", {});
  CHECK(a.same(b));
  CHECK((ScalarFn(0.0) * a).is_zero());
  CHECK((ScalarFn(1.0) * a).same(a));
}

TEST_CASE("tape matches direct evaluation") {
  std::vector<ScalarFn> roots{parse("sin(t)*cos(t)", {}), parse("sin(t)+t^2", {}), parse("exp(-t)", {})};
  Tape tape(roots);
  std::vector<double> out;
  tape.eval(0.8, out);
  REQUIRE(out.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(out[i] == doctest::Approx(roots[i].eval(0.8)));
}

TEST_CASE("matrix evaluation and inverse") {
  Context ctx(Interval{0.1, 3.0});
  MatrixFn e = testing::rows({{"sin(t)", "cos(t)", "0"}, {"0", "0", "0"}, {"-sin(2*t)/2", "sin(t)^2", "0"}});
  Eigen::MatrixXd want(3, 3);
  want << 1, 0, 0, 0, 0, 0, 0, 1, 0;
  CHECK((e.eval(std::numbers::pi / 2) - want).norm() < 1e-14);

  MatrixFn d = MatrixFn::from_rows({{ScalarFn(2.0), ScalarFn(0.0)}, {ScalarFn(0.0), ScalarFn(3.0)}});
  Eigen::MatrixXd dinv = inverse(d, ctx).eval(1.0);
  CHECK(dinv(0, 0) == doctest::Approx(0.5));
  CHECK(dinv(1, 1) == doctest::Approx(1.0 / 3));

  MatrixFn u = MatrixFn::from_rows({{parse("sqrt((1-t)^2+1)", {}), parse("cos(t)", {})}, {ScalarFn(0.0), ScalarFn(1.0)}});
  MatrixFn ui = inverse(u, ctx);
  for (double t : ctx.check_pts) CHECK((u.eval(t) * ui.eval(t) - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
  CHECK(max_dev(ui.derivative(), -ui * u.derivative() * ui, ctx.check_pts) < 1e-10);
}

TEST_CASE("inverse of a singular matrix is rejected") {
  Context ctx(Interval{0.0, 1.0});
  MatrixFn s = MatrixFn::from_rows({{ScalarFn::time(), ScalarFn::time()}, {ScalarFn(1.0), ScalarFn(1.0)}});
  CHECK_THROWS_AS(inverse(s, ctx), Error);
}
