#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "slhkit/errors.hpp"
#include "slhkit/numfmt.hpp"
#include "slhkit/scalar.hpp"

using namespace slh;

namespace {

ScalarExpr sym(const char* n) { return ScalarExpr::symbol(n); }

}  // namespace

TEST_CASE("format_double produces shortest round-trip strings") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.0) == "-2");
  CHECK(format_double(0.25) == "0.25");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(-0.0) == "0");
  for (double v : {0.1, 1e-6, 3.141592653589793, -1234.5678, 2e20}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("format_complex covers real, imaginary and mixed values") {
  CHECK(format_complex({2, 0}) == "2");
  CHECK(format_complex({0, 1}) == "i");
  CHECK(format_complex({0, -1}) == "-i");
  CHECK(format_complex({0, -2}) == "-2*i");
  CHECK(format_complex({1, 1}) == "(1+i)");
  CHECK(format_complex({1, -2}) == "(1-2*i)");
  CHECK(format_complex({-0.5, 0.5}) == "(-0.5+0.5*i)");
}

TEST_CASE("ring arithmetic reaches one canonical form") {
  const ScalarExpr x = sym("x"), y = sym("y");
  CHECK((x + y) * (x - y) == x * x - y * y);
  CHECK(x + x == ScalarExpr(2.0) * x);
  CHECK(x - x == ScalarExpr());
  CHECK((x - x).is_zero());
  CHECK(x * ScalarExpr(0.0) == ScalarExpr());
  CHECK((x * y) * x == x * x * y);
  CHECK(ScalarExpr(2.0) + ScalarExpr(3.0) == ScalarExpr(5.0));
}

TEST_CASE("trig factories fold constants and normalize odd/even arguments") {
  CHECK(ScalarExpr::sin(LinArg::number(0.0)) == ScalarExpr(0.0));
  CHECK(ScalarExpr::cos(LinArg::number(0.0)) == ScalarExpr(1.0));
  const double v = 0.37;
  CHECK(ScalarExpr::sin(LinArg::number(v)).number_value() == Complex(std::sin(v), 0.0));
  CHECK(ScalarExpr::expi(LinArg::number(v)).number_value() ==
        Complex(std::cos(v), std::sin(v)));
  // sin(-x) = -sin(x), cos(-x) = cos(x)
  CHECK(ScalarExpr::sin(LinArg::symbol("x", -1.0)) == -ScalarExpr::sin(LinArg::symbol("x")));
  CHECK(ScalarExpr::cos(LinArg::symbol("x", -1.0)) == ScalarExpr::cos(LinArg::symbol("x")));
}

TEST_CASE("conjugation is an involution and respects symbol domains") {
  const ScalarExpr beta = ScalarExpr::symbol("beta", false);
  const ScalarExpr theta = sym("theta");
  const ScalarExpr e = ScalarExpr(Complex(0.0, 2.0)) * beta * ScalarExpr::expi(LinArg::symbol("phi"));
  CHECK(e.conj().conj() == e);
  CHECK(theta.conj() == theta);  // real symbols are self-conjugate
  CHECK(beta.conj().str() == "conj(beta)");
  CHECK(e.conj().eval({{"beta", {0.3, -0.7}}, {"phi", {0.4, 0.0}}}) ==
        std::conj(e.eval({{"beta", {0.3, -0.7}}, {"phi", {0.4, 0.0}}})));
}

TEST_CASE("evaluation handles all atom kinds and reports unbound symbols") {
  const ScalarExpr e =
      ScalarExpr(2.0) * sym("x") * ScalarExpr::sin(LinArg::symbol("x")) + ScalarExpr(1.0);
  const double x = 0.81;
  CHECK(std::abs(e.eval({{"x", {x, 0.0}}}) - Complex(2 * x * std::sin(x) + 1, 0)) < 1e-15);
  CHECK_THROWS_AS(e.eval({}), UnboundSymbolError);
  CHECK_THROWS_AS(e.eval({{"x", {0.0, 2.0}}}), Error);  // complex value in trig argument
}

TEST_CASE("inverse folds numbers and evaluates as a reciprocal") {
  CHECK(ScalarExpr::inverse(ScalarExpr(2.0)) == ScalarExpr(0.5));
  CHECK_THROWS_AS(ScalarExpr::inverse(ScalarExpr()), Error);
  const ScalarExpr k = ScalarExpr::inverse(ScalarExpr(1.0) + sym("x"));
  CHECK(std::abs(k.eval({{"x", {1.0, 0.0}}}) - Complex(0.5, 0.0)) < 1e-15);
  CHECK(k.str() == "inv(1 + x)");
  CHECK(k == ScalarExpr::inverse(ScalarExpr(1.0) + sym("x")));  // structural identity
}

TEST_CASE("substitution maps symbols, conjugates and trig arguments") {
  const ScalarExpr e = sym("alpha") * ScalarExpr::sin(LinArg::symbol("theta"));
  const ScalarExpr num = e.substituted({{"theta", ScalarExpr(0.3)}});
  CHECK(num == sym("alpha") * ScalarExpr(std::sin(0.3)));
  const ScalarExpr renamed = e.substituted({{"theta", sym("phi")}});
  CHECK(renamed == sym("alpha") * ScalarExpr::sin(LinArg::symbol("phi")));
  const ScalarExpr beta = ScalarExpr::symbol("beta", false);
  CHECK(beta.conj().substituted({{"beta", ScalarExpr(Complex(1.0, 2.0))}}) ==
        ScalarExpr(Complex(1.0, -2.0)));
  CHECK_THROWS_AS(e.substituted({{"theta", sym("a") + sym("b")}}), Error);
}

TEST_CASE("first-order truncation expands trig atoms and drops higher orders") {
  const ScalarExpr alpha = sym("alpha"), theta = sym("theta");
  CHECK((alpha * ScalarExpr::sin(LinArg::symbol("theta"))).first_order_in("theta") ==
        alpha * theta);
  CHECK((alpha * ScalarExpr::cos(LinArg::symbol("theta"))).first_order_in("theta") == alpha);
  CHECK(ScalarExpr::expi(LinArg::symbol("theta", 2.0)).first_order_in("theta") ==
        ScalarExpr(1.0) + ScalarExpr(Complex(0.0, 2.0)) * theta);
  // sin^2 is second order and vanishes
  const ScalarExpr s = ScalarExpr::sin(LinArg::symbol("theta"));
  CHECK((s * s).first_order_in("theta") == ScalarExpr());
  // untouched symbols survive
  CHECK((alpha * theta).first_order_in("theta") == alpha * theta);
  CHECK((alpha * theta * theta).first_order_in("theta") == ScalarExpr());
  // mixed arguments cannot be expanded
  const LinArg mixed = LinArg::symbol("theta").plus(LinArg::symbol("phi"));
  CHECK_THROWS_AS(ScalarExpr::sin(mixed).first_order_in("theta"), Error);
}

TEST_CASE("rendering is deterministic with sign-aware joins") {
  const ScalarExpr alpha = sym("alpha"), theta = sym("theta");
  CHECK(ScalarExpr().str() == "0");
  CHECK((alpha * theta).str() == "alpha*theta");
  CHECK((ScalarExpr(2.0) * alpha - theta).str() == "2*alpha - theta");
  CHECK((-alpha).str() == "-alpha");
  CHECK((ScalarExpr(Complex(0.0, 1.0)) * alpha).str() == "i*alpha");
  CHECK((alpha * alpha).str() == "alpha^2");
  CHECK((alpha * ScalarExpr::sin(LinArg::symbol("theta"))).str() == "alpha*sin(theta)");
  CHECK(ScalarExpr::expi(LinArg::symbol("phi", -1.0)).str() == "expi(-phi)");
  const LinArg two_theta = LinArg::symbol("theta", 2.0);
  CHECK(ScalarExpr::cos(two_theta).str() == "cos(2*theta)");
}

TEST_CASE("symbol collection sees through trig arguments and inverses") {
  const ScalarExpr e = ScalarExpr::symbol("beta", false) *
                       ScalarExpr::inverse(ScalarExpr(1.0) + sym("x")) *
                       ScalarExpr::cos(LinArg::symbol("theta"));
  std::map<std::string, bool> syms;
  e.collect_symbols(syms);
  REQUIRE(syms.size() == 3);
  CHECK(syms.at("beta") == false);
  CHECK(syms.at("x") == true);
  CHECK(syms.at("theta") == true);
}
