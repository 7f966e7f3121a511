#pragma once

#include <string>
#include <utility>
#include <vector>

#include "slhkit/master_eq.hpp"
#include "slhkit/operator_expr.hpp"
#include "slhkit/slh.hpp"

namespace slh {

// One row of the bit-flip controller truth table: syndrome signal values
// (m12, m23) and the corrective drive pattern (x1, x2, x3) they demand.
struct TruthRow {
  int m12 = 0;
  int m23 = 0;
  int x1 = 0;
  int x2 = 0;
  int x3 = 0;
};

using TruthTable = std::vector<TruthRow>;

// (0,0)->(0,0,0), (1,0)->(1,0,0), (1,1)->(0,1,0), (0,1)->(0,0,1).
TruthTable standard_truth_table();

// Odd-parity indicator between two register qubits: (1 - Z[qa]*Z[qb])/2.
OperatorExpr syndrome_projector(const std::string& qa, const std::string& qb);

// The three-qubit bit-flip memory after model reduction: register qubits
// Q1..Q3, relays R1/R2 set and reset by the syndromes, a corrective drive
// Hamiltonian, optional register bit-flip noise, and the optional
// loss-induced dephasing channel alpha*theta*Z[Q2].
struct BitFlipModel {
  std::vector<LocalSpace> spaces;             // Q1,Q2,Q3 qubits; R1,R2 relays
  std::vector<OperatorExpr> relay_lindblads;  // L_s1, L_r1, L_s2, L_r2
  std::vector<OperatorExpr> error_lindblads;  // sqrt(gamma) * X[Qk]
  std::vector<OperatorExpr> loss_lindblads;   // empty when theta == 0
  OperatorExpr hamiltonian;                   // H_c

  std::vector<OperatorExpr> all_lindblads() const;
  SpaceLayout layout() const;

  // Port-less export: S = I_n over the Lindblad channels.
  SLHTriple to_slh() const;

  // Realizes every operator on the 32-dimensional register+relay space.
  LindbladModel to_lindblad(const Bindings& bindings) const;
};

// Builds the model with the given probe amplitude, feedback strength, and
// loss parameter (theta.is_zero() suppresses the loss channel).  gamma > 0
// appends the three register error channels sqrt(gamma)*X[Qk].
BitFlipModel build_bitflip(const ScalarExpr& alpha, const ScalarExpr& omega,
                           const ScalarExpr& theta, double gamma = 0.0);

// The loss-induced correlated dephasing operator of the nine-qubit code:
// alpha*theta*Z[Q2]*Z[Q5]*Z[Q8].
OperatorExpr build_ninequbit_loss_lindblad(const ScalarExpr& alpha,
                                           const ScalarExpr& theta);

// Diagonal block of `e` at a definite relay configuration: Z on a listed
// relay label becomes +1 (state 0) or -1 (state 1), X/Y terms on a listed
// relay are off-diagonal and drop out.  Other labels pass through.
OperatorExpr project_relay_state(
    const OperatorExpr& e, const std::vector<std::pair<std::string, int>>& relays);

// Checks the corrective drive against its truth table: for each
// row, the diagonal block of hc at relay configuration (m12, m23) must
// consist of X[Qk] drives exactly on the qubits with x_k = 1.  Labels other
// than Q1..Q3/R1..R2 are rejected.
bool verify_controller_truth_table(const OperatorExpr& hc, const TruthTable& table);

// The protected codeword (|000> + |111>)/sqrt(2) with both relays at rest.
Eigen::VectorXcd bitflip_initial_state(const SpaceLayout& layout);

}  // namespace slh
