#pragma once

#include <map>
#include <string>
#include <vector>

#include "slhkit/scalar.hpp"

namespace slh {

// ---------------------------------------------------------------------------
// OpFactor: one local operator on a named subsystem.  Two-level systems use
// the Pauli letters X/Y/Z (the identity never appears as a factor); bosonic
// modes use a normal-ordered pair adag^create * a^annihilate with
// create + annihilate >= 1.  A monomial holds at most one factor per label.
// ---------------------------------------------------------------------------
enum class Pauli { X = 0, Y = 1, Z = 2 };

struct OpFactor {
  std::string label;
  bool boson = false;
  Pauli pauli = Pauli::X;  // when !boson
  int create = 0;          // when boson
  int annihilate = 0;      // when boson

  std::string str() const;
};

int cmp(const OpFactor& a, const OpFactor& b);
bool operator==(const OpFactor& a, const OpFactor& b);

using OpFactors = std::vector<OpFactor>;  // sorted by label

int cmp(const OpFactors& a, const OpFactors& b);

struct OpTerm {
  Complex coeff{0.0, 0.0};
  AtomPowers atoms;
  OpFactors ops;
};

// ---------------------------------------------------------------------------
// OperatorExpr: canonical sum of operator monomials (scalar coefficient times
// a product of local factors on distinct labels).  Factors on distinct labels
// commute; products on the same label are rewritten into the canonical basis:
// Pauli algebra for two-level systems, normal ordering for bosons.  Terms are
// sorted and merged, so structurally equal canonical forms mean equal
// operators (the converse holds up to scalar-level identities).
// ---------------------------------------------------------------------------
class OperatorExpr {
 public:
  OperatorExpr() = default;  // zero
  OperatorExpr(double v) : OperatorExpr(ScalarExpr(v)) {}
  OperatorExpr(const Complex& v) : OperatorExpr(ScalarExpr(v)) {}
  OperatorExpr(const ScalarExpr& s);  // implicit: scalar times identity

  static OperatorExpr pauli_x(const std::string& label);
  static OperatorExpr pauli_y(const std::string& label);
  static OperatorExpr pauli_z(const std::string& label);
  // Raising/lowering and level projectors, expanded into the Pauli basis
  // with the ground state |0> as the +1 eigenvector of Z:
  //   sigma_plus = |1><0| = (X - iY)/2       projector0 = (1 + Z)/2
  //   sigma_minus = |0><1| = (X + iY)/2      projector1 = (1 - Z)/2
  static OperatorExpr sigma_plus(const std::string& label);
  static OperatorExpr sigma_minus(const std::string& label);
  static OperatorExpr projector0(const std::string& label);
  static OperatorExpr projector1(const std::string& label);
  static OperatorExpr annihilator(const std::string& label);
  static OperatorExpr creator(const std::string& label);
  static OperatorExpr from_terms(std::vector<OpTerm> ts);

  const std::vector<OpTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_scalar() const;          // no operator factors anywhere
  ScalarExpr scalar_part() const;  // requires is_scalar()

  // Splits into the identity-proportional part and the rest.
  ScalarExpr scalar_component() const;
  OperatorExpr operator_component() const;

  OperatorExpr adjoint() const;
  OperatorExpr im_part() const;  // (A - adjoint(A)) / 2i
  bool is_hermitian() const;

  OperatorExpr substituted(const std::map<std::string, ScalarExpr>& map) const;
  OperatorExpr first_order_in(const std::string& symbol) const;
  void collect_symbols(std::map<std::string, bool>& out) const;
  // label -> uses bosonic factors; throws if a label mixes factor kinds
  void collect_labels(std::map<std::string, bool>& out) const;

  std::string str() const;

  friend OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b);
  friend OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b);
  friend OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b);
  OperatorExpr operator-() const;

 private:
  std::vector<OpTerm> terms_;
};

int cmp(const OperatorExpr& a, const OperatorExpr& b);
bool operator==(const OperatorExpr& a, const OperatorExpr& b);

// ---------------------------------------------------------------------------
// Randomized semantic equality: bind every free symbol to random values (real
// symbols uniform in [-1,1], complex symbols in the unit square), map both
// sides onto the joint matrix space of their labels (bosons truncated), and
// compare in operator norm relative to scale.  Deterministic via fixed seed.
// ---------------------------------------------------------------------------
struct NumericEqualitySpec {
  int samples = 20;
  double tolerance = 1e-9;
  unsigned long long seed = 0x51a8c0deULL;
  int boson_dim = 6;
};

bool equal_numeric(const OperatorExpr& a, const OperatorExpr& b,
                   const NumericEqualitySpec& spec = {});

}  // namespace slh
