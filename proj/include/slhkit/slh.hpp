#pragma once

#include <functional>
#include <vector>

#include "slhkit/circuit_algebra.hpp"
#include "slhkit/operator_expr.hpp"

namespace slh {

// ---------------------------------------------------------------------------
// SLHTriple: scattering matrix S (n_out x n_in, row-major), coupling vector L
// (n_out entries) and Hamiltonian H, all operator expressions.
// ---------------------------------------------------------------------------
struct SLHTriple {
  int n_in = 0;
  int n_out = 0;
  std::vector<OperatorExpr> S;
  std::vector<OperatorExpr> L;
  OperatorExpr H;

  static SLHTriple identity(int n);

  const OperatorExpr& s(int row, int col) const { return S[row * n_in + col]; }
  OperatorExpr& s(int row, int col) { return S[row * n_in + col]; }
};

bool operator==(const SLHTriple& a, const SLHTriple& b);  // structural

// b ◁ a — a's outputs feed b's inputs (requires a.n_out == b.n_in):
//   (S_b S_a, L_b + S_b L_a, H_a + H_b + Im{L_b^dag S_b L_a})
SLHTriple series(const SLHTriple& b, const SLHTriple& a);

// a ⊞ b — block-diagonal direct sum, a's ports first.
SLHTriple concat(const SLHTriple& a, const SLHTriple& b);

// [t]_{out_index -> in_index} (1-based): eliminates the loop via
// K = (1 - S_ij)^{-1}:
//   S'_kl = S_kl + S_kj K S_il
//   L'_k  = L_k + S_kj K L_i
//   H'    = H + Im{ sum_k L_k^dag S_kj K L_i }
// Throws SingularFeedbackError when (1 - S_ij) has no inverse, and UserError
// when the inverse exists but falls outside the symbolically invertible
// family handled here (scalars and shifted square-root-of-scalar operators).
SLHTriple feedback(const SLHTriple& t, int out_index, int in_index);

// Pure rewiring block for σ (1-based, input l exits at output σ(l)).
SLHTriple permutation_slh(const std::vector<int>& sigma);

// Row/column rewiring: after permute_outputs, old output k appears as output
// σ(k); after permute_inputs, new input l reads what old input σ(l) read.
SLHTriple permute_outputs(const SLHTriple& t, const std::vector<int>& sigma);
SLHTriple permute_inputs(const SLHTriple& t, const std::vector<int>& sigma);

// Recursively rewrites a circuit term to one SLH triple; component leaves are
// resolved through the callback.
SLHTriple reduce(const CircuitTerm& term,
                 const std::function<SLHTriple(const std::string&)>& resolve);

// Randomized semantic comparison entry-by-entry (S, L, and H).
bool slh_equal_numeric(const SLHTriple& a, const SLHTriple& b,
                       const NumericEqualitySpec& spec = {});

}  // namespace slh
