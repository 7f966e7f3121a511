#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace slh {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// LinArg: a real-linear combination  c0 + k1*x1 + k2*x2 + ...  used as the
// argument of sin/cos/expi atoms.  Terms are sorted by symbol name and carry
// nonzero coefficients.
// ---------------------------------------------------------------------------
struct LinArg {
  double constant = 0.0;
  std::vector<std::pair<std::string, double>> terms;

  static LinArg number(double c);
  static LinArg symbol(const std::string& name, double coeff = 1.0);

  bool is_constant() const { return terms.empty(); }
  LinArg negated() const;
  LinArg plus(const LinArg& other) const;
  double eval(const std::function<double(const std::string&)>& lookup) const;
  std::string str() const;
};

int cmp(const LinArg& a, const LinArg& b);
bool operator==(const LinArg& a, const LinArg& b);

// Declaration order fixes the canonical sort order of trig atoms.
enum class TrigKind { cos, expi, sin };

class ScalarExpr;

// ---------------------------------------------------------------------------
// ScalarAtom: an indivisible scalar factor.
//   symbol       named scalar, real- or complex-valued
//   conj_symbol  conjugate of a complex-valued symbol
//   trig         sin/cos of a real linear argument, or expi(a) = e^{i a}
//   inverse      1/expr for an opaque canonical expression (from feedback
//                elimination); the boxed expression is immutable and shared
// ---------------------------------------------------------------------------
struct ScalarAtom {
  enum class Kind { symbol, conj_symbol, trig, inverse };

  Kind kind = Kind::symbol;
  std::string name;         // symbol / conj_symbol
  bool real_domain = true;  // symbol only; conjugates imply a complex domain
  TrigKind trig = TrigKind::sin;
  LinArg arg;
  std::shared_ptr<const ScalarExpr> denom;  // inverse

  std::string str() const;
};

int cmp(const ScalarAtom& a, const ScalarAtom& b);
bool operator==(const ScalarAtom& a, const ScalarAtom& b);

// Sorted (atom, power) pairs with power >= 1.
using AtomPowers = std::vector<std::pair<ScalarAtom, int>>;

int cmp(const AtomPowers& a, const AtomPowers& b);
AtomPowers merge_atom_powers(const AtomPowers& a, const AtomPowers& b);
AtomPowers conj_atom_powers(const AtomPowers& a);
std::string atom_powers_str(const AtomPowers& a);

struct ScalarMonomial {
  Complex coeff{0.0, 0.0};
  AtomPowers atoms;
};

// ---------------------------------------------------------------------------
// ScalarExpr: canonical sum of monomials.  Monomials are sorted by their atom
// lists, like monomials are merged, and zero coefficients are removed, so two
// expressions built along different routes from the same ring operations
// compare equal structurally.  The empty sum is zero.
// ---------------------------------------------------------------------------
class ScalarExpr {
 public:
  ScalarExpr() = default;  // zero
  ScalarExpr(double v) : ScalarExpr(Complex(v, 0.0)) {}
  ScalarExpr(const Complex& v);

  static ScalarExpr symbol(const std::string& name, bool real_domain = true);
  static ScalarExpr sin(const LinArg& a);
  static ScalarExpr cos(const LinArg& a);
  static ScalarExpr expi(const LinArg& a);
  // 1/e.  Numbers fold to their reciprocal; dividing by zero throws.
  static ScalarExpr inverse(const ScalarExpr& e);
  static ScalarExpr from_monomials(std::vector<ScalarMonomial> ms);

  const std::vector<ScalarMonomial>& monomials() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_number() const;
  Complex number_value() const;  // requires is_number()

  ScalarExpr conj() const;
  Complex eval(const std::map<std::string, Complex>& bindings) const;

  // Replaces each named symbol (and its conjugate) by the mapped expression.
  // Symbols inside trig arguments only admit numeric or single-real-symbol
  // replacements; anything else throws.
  ScalarExpr substituted(const std::map<std::string, ScalarExpr>& map) const;

  // First-order truncation in one real symbol t: expands sin(k t) -> k t,
  // cos(k t) -> 1, expi(k t) -> 1 + i k t, then discards every monomial of
  // combined degree >= 2 in t.  Trig arguments mixing t with constants or
  // other symbols are not expandable and throw.
  ScalarExpr first_order_in(const std::string& symbol) const;

  void collect_symbols(std::map<std::string, bool>& out) const;

  std::string str() const;

  friend ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b);
  friend ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b);
  ScalarExpr operator-() const;

 private:
  std::vector<ScalarMonomial> terms_;
};

int cmp(const ScalarExpr& a, const ScalarExpr& b);
bool operator==(const ScalarExpr& a, const ScalarExpr& b);

// Renders a monomial as a '*'-joined product with the sign split off:
// returns {negative, body}, e.g. -2i*a*sin(x) -> {true, "2*i*a*sin(x)"}.
// (The complex "i" coefficient case keeps its parenthesised form.)
std::pair<bool, std::string> monomial_body(const Complex& coeff,
                                           const std::string& factors);

}  // namespace slh
