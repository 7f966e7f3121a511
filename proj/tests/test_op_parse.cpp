#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "slhkit/errors.hpp"
#include "slhkit/op_parse.hpp"
#include "test_util.hpp"

using namespace slh;

TEST_CASE("canonical text round-trips through the parser") {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 80; ++k) {
    const OperatorExpr e = testutil::random_operator(rng);
    const OperatorExpr back = parse_operator(e.str(), {"b"});
    CHECK(back == e);
  }
}

TEST_CASE("bosonic and inverse forms round-trip") {
  const OperatorExpr n = OperatorExpr::creator("c") * OperatorExpr::annihilator("c");
  CHECK(parse_operator(n.str()) == n);
  const OperatorExpr e =
      OperatorExpr(ScalarExpr::inverse(ScalarExpr(1.0) + ScalarExpr::symbol("x"))) *
      OperatorExpr::pauli_z("q");
  CHECK(parse_operator(e.str()) == e);
  const OperatorExpr powers = OperatorExpr::creator("c") * OperatorExpr::creator("c") *
                              OperatorExpr::annihilator("c");
  CHECK(parse_operator(powers.str()) == powers);
}

TEST_CASE("convenience operators expand into the canonical basis") {
  CHECK(parse_operator("sp[R1]") == OperatorExpr::sigma_plus("R1"));
  CHECK(parse_operator("sm[R1]") == OperatorExpr::sigma_minus("R1"));
  CHECK(parse_operator("p0[R1]") == OperatorExpr::projector0("R1"));
  CHECK(parse_operator("p1[R1]") == OperatorExpr::projector1("R1"));
  CHECK(parse_operator("sp[R1]*sm[R1]") == OperatorExpr::projector1("R1"));
}

TEST_CASE("numbers, pi and powers are parsed") {
  CHECK(parse_operator("2.5") == OperatorExpr(2.5));
  CHECK(parse_operator("i*i") == OperatorExpr(-1.0));
  CHECK(parse_operator("X[q]^2") == OperatorExpr(1.0));
  CHECK(parse_operator("(1+i)*Z[q]") ==
        OperatorExpr(Complex(1.0, 1.0)) * OperatorExpr::pauli_z("q"));
  CHECK(parse_scalar("sin(2*pi)").number_value().real() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(parse_scalar("cos(pi)") == ScalarExpr(std::cos(M_PI)));
  CHECK(parse_scalar("sin(theta)^2 + cos(theta)^2").str() ==
        "cos(theta)^2 + sin(theta)^2");
}

TEST_CASE("symbol domains follow the complex-name set") {
  const OperatorExpr as_real = parse_operator("conj(beta)");
  CHECK(as_real == OperatorExpr(ScalarExpr::symbol("beta")));  // conj of a real symbol
  const OperatorExpr as_complex = parse_operator("conj(beta)", {"beta"});
  CHECK(as_complex == OperatorExpr(ScalarExpr::symbol("beta", false).conj()));
  CHECK(parse_operator("beta", {"beta"}).str() == "beta");
}

TEST_CASE("malformed input is rejected with parse errors") {
  CHECK_THROWS_AS(parse_operator("X[q"), OperatorParseError);
  CHECK_THROWS_AS(parse_operator("sin(a*b)"), OperatorParseError);
  CHECK_THROWS_AS(parse_operator("X[q] X[q]"), OperatorParseError);
  CHECK_THROWS_AS(parse_operator("W[q]"), OperatorParseError);
  CHECK_THROWS_AS(parse_operator("2^"), OperatorParseError);
  CHECK_THROWS_AS(parse_operator("X[q]^1.5"), OperatorParseError);
  CHECK_THROWS_AS(parse_operator(""), OperatorParseError);
  CHECK_THROWS_AS(parse_scalar("X[q]"), OperatorParseError);
  CHECK_THROWS_AS(parse_operator("inv(X[q])"), OperatorParseError);
}
