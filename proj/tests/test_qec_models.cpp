#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "slhkit/errors.hpp"
#include "slhkit/op_parse.hpp"
#include "slhkit/qec_models.hpp"

using namespace slh;

namespace {

const ScalarExpr kAlpha = ScalarExpr::symbol("alpha", false);
const ScalarExpr kOmega = ScalarExpr::symbol("Omega");
const ScalarExpr kTheta = ScalarExpr::symbol("theta");

OperatorExpr op(const std::string& text) { return parse_operator(text, {"alpha"}); }

}  // namespace

TEST_CASE("the controller truth table covers the four syndrome patterns") {
  const TruthTable t = standard_truth_table();
  REQUIRE(t.size() == 4);
  CHECK((t[0].m12 == 0 && t[0].m23 == 0 && !t[0].x1 && !t[0].x2 && !t[0].x3));
  CHECK((t[1].m12 == 1 && t[1].m23 == 0 && t[1].x1 == 1 && !t[1].x2 && !t[1].x3));
  CHECK((t[2].m12 == 1 && t[2].m23 == 1 && !t[2].x1 && t[2].x2 == 1 && !t[2].x3));
  CHECK((t[3].m12 == 0 && t[3].m23 == 1 && !t[3].x1 && !t[3].x2 && t[3].x3 == 1));
}

TEST_CASE("the syndrome projector is the odd-parity indicator") {
  const OperatorExpr m12 = syndrome_projector("Q1", "Q2");
  CHECK(m12 == op("0.5*(1 - Z[Q1]*Z[Q2])"));
  CHECK(m12.is_hermitian());
  // projector: M^2 = M
  CHECK(m12 * m12 == m12);
  // eigenvalues: +1 on odd parity, 0 on even
  CHECK(project_relay_state(m12, {{"Q1", 0}, {"Q2", 1}}) == OperatorExpr(1.0));
  CHECK(project_relay_state(m12, {{"Q1", 0}, {"Q2", 0}}).is_zero());
}

TEST_CASE("relay set and reset channels match their transcriptions") {
  const BitFlipModel m = build_bitflip(kAlpha, kOmega, ScalarExpr());
  REQUIRE(m.relay_lindblads.size() == 4);

  const OperatorExpr ls1 =
      op("alpha*(sp[R1]*0.5*(1 - Z[Q1]*Z[Q2]) - p0[R1]*(1 - 0.5*(1 - Z[Q1]*Z[Q2])))");
  const OperatorExpr lr1 =
      op("alpha*(-(p1[R1]*0.5*(1 - Z[Q1]*Z[Q2])) + sm[R1]*(1 - 0.5*(1 - Z[Q1]*Z[Q2])))");
  const OperatorExpr ls2 =
      op("alpha*(sp[R2]*0.5*(1 - Z[Q2]*Z[Q3]) - p0[R2]*(1 - 0.5*(1 - Z[Q2]*Z[Q3])))");
  const OperatorExpr lr2 =
      op("alpha*(-(p1[R2]*0.5*(1 - Z[Q2]*Z[Q3])) + sm[R2]*(1 - 0.5*(1 - Z[Q2]*Z[Q3])))");

  CHECK(m.relay_lindblads[0] == ls1);
  CHECK(m.relay_lindblads[1] == lr1);
  CHECK(m.relay_lindblads[2] == ls2);
  CHECK(m.relay_lindblads[3] == lr2);
  // canonical equality implies identical rendering
  CHECK(m.relay_lindblads[0].str() == ls1.str());
}

TEST_CASE("projecting the syndrome onto the set channel leaves a bare relay flip") {
  const BitFlipModel m = build_bitflip(kAlpha, kOmega, ScalarExpr());
  // odd parity on (Q1,Q2): the set channel reduces to alpha*sp[R1]
  CHECK(project_relay_state(m.relay_lindblads[0], {{"Q1", 0}, {"Q2", 1}}) ==
        op("alpha*sp[R1]"));
  // even parity: it reduces to the holding term -alpha*p0[R1]
  CHECK(project_relay_state(m.relay_lindblads[0], {{"Q1", 0}, {"Q2", 0}}) ==
        op("-alpha*p0[R1]"));
  // reset channel, even parity: alpha*sm[R1]
  CHECK(project_relay_state(m.relay_lindblads[1], {{"Q1", 1}, {"Q2", 1}}) ==
        op("alpha*sm[R1]"));
}

TEST_CASE("the corrective drive matches its transcription and is hermitian") {
  const BitFlipModel m = build_bitflip(kAlpha, kOmega, ScalarExpr());
  const OperatorExpr hc = parse_operator(
      "Omega*(1.4142135623730951*X[Q1]*p1[R1]*p0[R2]"
      " + X[Q2]*p1[R1]*p1[R2]"
      " - 1.4142135623730951*X[Q3]*p0[R1]*p1[R2])");
  CHECK(m.hamiltonian == hc);
  CHECK(m.hamiltonian.is_hermitian());
  for (const OperatorExpr& l : m.relay_lindblads) CHECK_FALSE(l.is_hermitian());
}

TEST_CASE("loss and error channels appear only when requested") {
  const BitFlipModel clean = build_bitflip(kAlpha, kOmega, ScalarExpr());
  CHECK(clean.loss_lindblads.empty());
  CHECK(clean.error_lindblads.empty());
  CHECK(clean.all_lindblads().size() == 4);

  const BitFlipModel lossy = build_bitflip(kAlpha, kOmega, kTheta);
  REQUIRE(lossy.loss_lindblads.size() == 1);
  CHECK(lossy.loss_lindblads[0] == op("alpha*theta*Z[Q2]"));

  const BitFlipModel noisy = build_bitflip(kAlpha, kOmega, kTheta, 0.25);
  REQUIRE(noisy.error_lindblads.size() == 3);
  CHECK(noisy.error_lindblads[0] == op("0.5*X[Q1]"));
  CHECK(noisy.error_lindblads[1] == op("0.5*X[Q2]"));
  CHECK(noisy.error_lindblads[2] == op("0.5*X[Q3]"));
  // ordering: relay channels, then errors, then loss
  const auto all = noisy.all_lindblads();
  REQUIRE(all.size() == 8);
  CHECK(all[0] == noisy.relay_lindblads[0]);
  CHECK(all[4] == noisy.error_lindblads[0]);
  CHECK(all[7] == noisy.loss_lindblads[0]);

  CHECK_THROWS_AS(build_bitflip(kAlpha, kOmega, kTheta, -0.1), UserError);
}

TEST_CASE("the nine-qubit loss channel is a three-site correlated dephasing") {
  const OperatorExpr l = build_ninequbit_loss_lindblad(kAlpha, kTheta);
  CHECK(l.str() == "alpha*theta*Z[Q2]*Z[Q5]*Z[Q8]");
  CHECK(build_ninequbit_loss_lindblad(kAlpha, ScalarExpr()).is_zero());
  CHECK(build_ninequbit_loss_lindblad(ScalarExpr(2.0), ScalarExpr(0.5)) ==
        parse_operator("Z[Q2]*Z[Q5]*Z[Q8]"));
}

TEST_CASE("relay projection keeps diagonal terms and drops flips") {
  const OperatorExpr e = op("Z[R1]*X[Q1] + X[R1]*Z[Q1] + 2*p1[R1]");
  // R1 = 0: Z[R1] -> +1, X[R1] term drops, p1 -> 0
  CHECK(project_relay_state(e, {{"R1", 0}}) == op("X[Q1]"));
  // R1 = 1: Z[R1] -> -1, p1 -> 1
  CHECK(project_relay_state(e, {{"R1", 1}}) == op("-X[Q1] + 2"));
  // labels not listed pass through untouched
  CHECK(project_relay_state(e, {}) == e);
  CHECK_THROWS_WITH_AS(project_relay_state(op("adag[R1]*a[R1]"), {{"R1", 0}}),
                       doctest::Contains("bosonic"), UserError);
}

TEST_CASE("the corrective drive satisfies the controller truth table") {
  const BitFlipModel m = build_bitflip(kAlpha, kOmega, ScalarExpr());
  const TruthTable table = standard_truth_table();
  CHECK(verify_controller_truth_table(m.hamiltonian, table));

  // deleting any of the three drive terms breaks a row
  const std::string t1 = "1.4142135623730951*X[Q1]*p1[R1]*p0[R2]";
  const std::string t2 = "X[Q2]*p1[R1]*p1[R2]";
  const std::string t3 = "1.4142135623730951*X[Q3]*p0[R1]*p1[R2]";
  CHECK_FALSE(verify_controller_truth_table(
      parse_operator("Omega*(" + t2 + " - " + t3 + ")"), table));
  CHECK_FALSE(verify_controller_truth_table(
      parse_operator("Omega*(" + t1 + " - " + t3 + ")"), table));
  CHECK_FALSE(verify_controller_truth_table(
      parse_operator("Omega*(" + t1 + " + " + t2 + ")"), table));

  // driving a qubit that the row wants silent breaks it too
  CHECK_FALSE(verify_controller_truth_table(
      m.hamiltonian + op("Omega*X[Q3]*p1[R1]*p0[R2]"), table));
  // a conditioned Z is not a corrective drive
  CHECK_FALSE(verify_controller_truth_table(
      m.hamiltonian + op("Omega*Z[Q1]*p1[R1]*p0[R2]"), table));
  // wandering off the register/relay spaces is an error, not a mismatch
  CHECK_THROWS_WITH_AS(
      verify_controller_truth_table(m.hamiltonian + op("X[W9]"), table),
      doctest::Contains("unexpected space"), UserError);
}

TEST_CASE("the model exports consistently to a triple and to matrices") {
  const BitFlipModel m = build_bitflip(kAlpha, kOmega, kTheta, 0.04);
  REQUIRE(m.spaces.size() == 5);
  CHECK(m.spaces[0].label == "Q1");
  CHECK(m.spaces[3].label == "R1");
  CHECK(m.spaces[3].kind == SpaceKind::relay);
  CHECK(m.layout().total_dim() == 32);

  const SLHTriple t = m.to_slh();
  CHECK(t.n_in == 8);
  CHECK(t.n_out == 8);
  CHECK(t.s(0, 0) == OperatorExpr(1.0));
  CHECK(t.s(0, 1).is_zero());
  CHECK(t.L == m.all_lindblads());
  CHECK(t.H == m.hamiltonian);

  const Bindings bindings{{"alpha", Complex(3.0, 0.0)},
                          {"Omega", Complex(210.0, 0.0)},
                          {"theta", Complex(0.01, 0.0)}};
  const LindbladModel lm = m.to_lindblad(bindings);
  CHECK(lm.layout.total_dim() == 32);
  REQUIRE(lm.lindblads.size() == 8);
  CHECK(lm.H.rows() == 32);
  CHECK(lm.H.isApprox(lm.H.adjoint()));
  // the loss channel realizes alpha*theta*Z[Q2]
  const Eigen::MatrixXcd z2 =
      to_matrix(parse_operator("Z[Q2]"), lm.layout, {});
  CHECK(lm.lindblads[7].isApprox(Complex(0.03, 0.0) * z2));
}

TEST_CASE("the protected codeword weights the all-zero and all-one registers") {
  const BitFlipModel m = build_bitflip(kAlpha, kOmega, ScalarExpr());
  const Eigen::VectorXcd psi = bitflip_initial_state(m.layout());
  REQUIRE(psi.size() == 32);
  CHECK(std::abs(psi(0) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-12);
  CHECK(std::abs(psi(28) - Complex(1.0 / std::sqrt(2.0), 0.0)) < 1e-12);
  double rest = 0.0;
  for (int k = 0; k < 32; ++k) {
    if (k != 0 && k != 28) rest += std::norm(psi(k));
  }
  CHECK(rest == 0.0);
}

TEST_CASE("relays converge to the syndrome at the measurement rate") {
  // freeze the register at |100> (syndrome m12=1, m23=0), start the relays in
  // the opposite configuration (R1=0, R2=1), and let only the set/reset
  // channels act: by t = 10/|alpha|^2 both relays have locked on.
  const BitFlipModel m = build_bitflip(ScalarExpr(1.0), ScalarExpr(), ScalarExpr());
  const SpaceLayout layout = m.layout();

  LindbladModel lm;
  lm.layout = layout;
  lm.H = Eigen::MatrixXcd::Zero(32, 32);
  for (const OperatorExpr& l : m.relay_lindblads) {
    lm.lindblads.push_back(to_matrix(l, layout, {}));
  }

  const Eigen::VectorXcd psi0 = parse_ket("|10001>", layout);
  const Eigen::MatrixXcd rho0 = psi0 * psi0.adjoint();

  std::vector<Observable> obs;
  obs.push_back({"p1R1", to_matrix(parse_operator("p1[R1]"), layout, {})});
  obs.push_back({"p0R2", to_matrix(parse_operator("p0[R2]"), layout, {})});

  SimOptions opt;
  opt.t_final = 10.0;
  opt.dt = 5e-3;
  opt.sample_stride = 200;
  const Trajectory tr = integrate(lm, rho0, obs, opt);

  const double p1r1 = tr.values[0].back().real();
  const double p0r2 = tr.values[1].back().real();
  CHECK(p1r1 > 0.99);
  CHECK(p0r2 > 0.99);
  // the register stays frozen: no X drives act
  CHECK(tr.trace_drift.back() < 1e-8);
  const double again =
      fidelity(tr.final_state, parse_ket("|10010>", layout));
  CHECK(again > 0.98);  // settled at |100>|10>
}
