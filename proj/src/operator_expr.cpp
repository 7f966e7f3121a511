#include "slhkit/operator_expr.hpp"

#include <algorithm>
#include <optional>

#include "slhkit/errors.hpp"

namespace slh {

// ---------------------------------------------------------------------------
// OpFactor
// ---------------------------------------------------------------------------

std::string OpFactor::str() const {
  if (!boson) {
    const char* p = pauli == Pauli::X ? "X" : pauli == Pauli::Y ? "Y" : "Z";
    return std::string(p) + "[" + label + "]";
  }
  std::string s;
  if (create > 0) {
    s = "adag[" + label + "]";
    if (create > 1) s += "^" + std::to_string(create);
  }
  if (annihilate > 0) {
    if (!s.empty()) s += "*";
    s += "a[" + label + "]";
    if (annihilate > 1) s += "^" + std::to_string(annihilate);
  }
  return s;
}

int cmp(const OpFactor& a, const OpFactor& b) {
  if (int c = a.label.compare(b.label)) return c < 0 ? -1 : 1;
  if (a.boson != b.boson) return a.boson ? 1 : -1;
  if (!a.boson) {
    if (a.pauli != b.pauli) return static_cast<int>(a.pauli) < static_cast<int>(b.pauli) ? -1 : 1;
    return 0;
  }
  if (a.create != b.create) return a.create < b.create ? -1 : 1;
  if (a.annihilate != b.annihilate) return a.annihilate < b.annihilate ? -1 : 1;
  return 0;
}

bool operator==(const OpFactor& a, const OpFactor& b) { return cmp(a, b) == 0; }

int cmp(const OpFactors& a, const OpFactors& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = cmp(a[i], b[i])) return c;
  }
  return a.size() < b.size() ? -1 : (a.size() > b.size() ? 1 : 0);
}

// ---------------------------------------------------------------------------
// canonicalization
// ---------------------------------------------------------------------------

namespace {

int cmp_term_key(const OpTerm& x, const OpTerm& y) {
  if (int c = cmp(x.ops, y.ops)) return c;
  return cmp(x.atoms, y.atoms);
}

std::vector<OpTerm> canonicalize(std::vector<OpTerm> ts) {
  std::sort(ts.begin(), ts.end(),
            [](const OpTerm& x, const OpTerm& y) { return cmp_term_key(x, y) < 0; });
  std::vector<OpTerm> out;
  for (auto& t : ts) {
    if (!out.empty() && cmp_term_key(out.back(), t) == 0) {
      out.back().coeff += t.coeff;
      if (out.back().coeff == Complex(0.0, 0.0)) out.pop_back();
    } else if (t.coeff != Complex(0.0, 0.0)) {
      out.push_back(std::move(t));
    }
  }
  return out;
}

// Product of two Pauli letters on the same label: phase plus an optional
// remaining letter (absent when the product is the identity).
std::pair<Complex, std::optional<Pauli>> pauli_product(Pauli a, Pauli b) {
  if (a == b) return {Complex(1.0, 0.0), std::nullopt};
  const Complex i(0.0, 1.0);
  switch (a) {
    case Pauli::X:
      return b == Pauli::Y ? std::pair{i, std::optional{Pauli::Z}}
                           : std::pair{-i, std::optional{Pauli::Y}};
    case Pauli::Y:
      return b == Pauli::Z ? std::pair{i, std::optional{Pauli::X}}
                           : std::pair{-i, std::optional{Pauli::Z}};
    case Pauli::Z:
    default:
      return b == Pauli::X ? std::pair{i, std::optional{Pauli::Y}}
                           : std::pair{-i, std::optional{Pauli::X}};
  }
}

double falling_product(int n, int k) {
  // k! * C(n1,k) style helper: computes binomial(n, k) exactly in double.
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = v * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return v;
}

// Normal ordering of adag^m1 a^n1 * adag^m2 a^n2 on one mode:
//   sum_k k! C(n1,k) C(m2,k) adag^(m1+m2-k) a^(n1+n2-k)
std::vector<std::pair<double, std::pair<int, int>>> boson_product(int m1, int n1, int m2,
                                                                  int n2) {
  std::vector<std::pair<double, std::pair<int, int>>> out;
  const int kmax = std::min(n1, m2);
  for (int k = 0; k <= kmax; ++k) {
    double factorial = 1.0;
    for (int i = 2; i <= k; ++i) factorial *= static_cast<double>(i);
    const double c = factorial * falling_product(n1, k) * falling_product(m2, k);
    out.push_back({c, {m1 + m2 - k, n1 + n2 - k}});
  }
  return out;
}

// Multiplies two canonical monomials; boson reordering can fan out into
// several result terms.
std::vector<OpTerm> term_product(const OpTerm& x, const OpTerm& y) {
  OpTerm base;
  base.coeff = x.coeff * y.coeff;
  base.atoms = merge_atom_powers(x.atoms, y.atoms);

  std::vector<OpTerm> partials{std::move(base)};
  std::size_t i = 0, j = 0;
  while (i < x.ops.size() || j < y.ops.size()) {
    if (j == y.ops.size() ||
        (i < x.ops.size() && x.ops[i].label < y.ops[j].label)) {
      for (auto& p : partials) p.ops.push_back(x.ops[i]);
      ++i;
    } else if (i == x.ops.size() || y.ops[j].label < x.ops[i].label) {
      for (auto& p : partials) p.ops.push_back(y.ops[j]);
      ++j;
    } else {
      const OpFactor& f = x.ops[i];
      const OpFactor& g = y.ops[j];
      if (f.boson != g.boson)
        throw Error("label '" + f.label + "' is used both as a two-level system and a boson");
      if (!f.boson) {
        auto [phase, letter] = pauli_product(f.pauli, g.pauli);
        for (auto& p : partials) {
          p.coeff *= phase;
          if (letter) {
            OpFactor nf;
            nf.label = f.label;
            nf.pauli = *letter;
            p.ops.push_back(nf);
          }
        }
      } else {
        auto expansion = boson_product(f.create, f.annihilate, g.create, g.annihilate);
        std::vector<OpTerm> next;
        next.reserve(partials.size() * expansion.size());
        for (const auto& p : partials) {
          for (const auto& [c, mn] : expansion) {
            OpTerm q = p;
            q.coeff *= c;
            if (mn.first + mn.second > 0) {
              OpFactor nf;
              nf.label = f.label;
              nf.boson = true;
              nf.create = mn.first;
              nf.annihilate = mn.second;
              q.ops.push_back(nf);
            }
            next.push_back(std::move(q));
          }
        }
        partials = std::move(next);
      }
      ++i;
      ++j;
    }
  }
  return partials;
}

OpTerm single_factor(OpFactor f) {
  OpTerm t;
  t.coeff = Complex(1.0, 0.0);
  t.ops.push_back(std::move(f));
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// OperatorExpr
// ---------------------------------------------------------------------------

OperatorExpr::OperatorExpr(const ScalarExpr& s) {
  terms_.reserve(s.monomials().size());
  for (const auto& m : s.monomials()) {
    OpTerm t;
    t.coeff = m.coeff;
    t.atoms = m.atoms;
    terms_.push_back(std::move(t));
  }
  terms_ = canonicalize(std::move(terms_));
}

OperatorExpr OperatorExpr::pauli_x(const std::string& label) {
  OpFactor f;
  f.label = label;
  f.pauli = Pauli::X;
  return from_terms({single_factor(std::move(f))});
}

OperatorExpr OperatorExpr::pauli_y(const std::string& label) {
  OpFactor f;
  f.label = label;
  f.pauli = Pauli::Y;
  return from_terms({single_factor(std::move(f))});
}

OperatorExpr OperatorExpr::pauli_z(const std::string& label) {
  OpFactor f;
  f.label = label;
  f.pauli = Pauli::Z;
  return from_terms({single_factor(std::move(f))});
}

OperatorExpr OperatorExpr::sigma_plus(const std::string& label) {
  const Complex half(0.5, 0.0), mhalf_i(0.0, -0.5);
  return OperatorExpr(half) * pauli_x(label) + OperatorExpr(mhalf_i) * pauli_y(label);
}

OperatorExpr OperatorExpr::sigma_minus(const std::string& label) {
  const Complex half(0.5, 0.0), half_i(0.0, 0.5);
  return OperatorExpr(half) * pauli_x(label) + OperatorExpr(half_i) * pauli_y(label);
}

OperatorExpr OperatorExpr::projector0(const std::string& label) {
  return OperatorExpr(0.5) + OperatorExpr(0.5) * pauli_z(label);
}

OperatorExpr OperatorExpr::projector1(const std::string& label) {
  return OperatorExpr(0.5) - OperatorExpr(0.5) * pauli_z(label);
}

OperatorExpr OperatorExpr::annihilator(const std::string& label) {
  OpFactor f;
  f.label = label;
  f.boson = true;
  f.annihilate = 1;
  return from_terms({single_factor(std::move(f))});
}

OperatorExpr OperatorExpr::creator(const std::string& label) {
  OpFactor f;
  f.label = label;
  f.boson = true;
  f.create = 1;
  return from_terms({single_factor(std::move(f))});
}

OperatorExpr OperatorExpr::from_terms(std::vector<OpTerm> ts) {
  OperatorExpr e;
  e.terms_ = canonicalize(std::move(ts));
  return e;
}

bool OperatorExpr::is_scalar() const {
  for (const auto& t : terms_) {
    if (!t.ops.empty()) return false;
  }
  return true;
}

ScalarExpr OperatorExpr::scalar_part() const {
  if (!is_scalar()) throw Error("scalar_part() on an expression with operator factors");
  return scalar_component();
}

ScalarExpr OperatorExpr::scalar_component() const {
  std::vector<ScalarMonomial> ms;
  for (const auto& t : terms_) {
    if (t.ops.empty()) ms.push_back({t.coeff, t.atoms});
  }
  return ScalarExpr::from_monomials(std::move(ms));
}

OperatorExpr OperatorExpr::operator_component() const {
  std::vector<OpTerm> ts;
  for (const auto& t : terms_) {
    if (!t.ops.empty()) ts.push_back(t);
  }
  return from_terms(std::move(ts));
}

OperatorExpr OperatorExpr::adjoint() const {
  std::vector<OpTerm> ts;
  ts.reserve(terms_.size());
  for (const auto& t : terms_) {
    OpTerm r;
    r.coeff = std::conj(t.coeff);
    r.atoms = conj_atom_powers(t.atoms);
    r.ops = t.ops;
    for (auto& f : r.ops) {
      if (f.boson) std::swap(f.create, f.annihilate);
    }
    ts.push_back(std::move(r));
  }
  return from_terms(std::move(ts));
}

OperatorExpr OperatorExpr::im_part() const {
  return OperatorExpr(Complex(0.0, -0.5)) * (*this - adjoint());
}

bool OperatorExpr::is_hermitian() const { return adjoint() == *this; }

OperatorExpr OperatorExpr::substituted(const std::map<std::string, ScalarExpr>& map) const {
  OperatorExpr total;
  for (const auto& t : terms_) {
    const ScalarExpr s =
        ScalarExpr::from_monomials({{t.coeff, t.atoms}}).substituted(map);
    std::vector<OpTerm> ts;
    for (const auto& m : s.monomials()) {
      OpTerm r;
      r.coeff = m.coeff;
      r.atoms = m.atoms;
      r.ops = t.ops;
      ts.push_back(std::move(r));
    }
    total = total + from_terms(std::move(ts));
  }
  return total;
}

OperatorExpr OperatorExpr::first_order_in(const std::string& symbol) const {
  OperatorExpr total;
  for (const auto& t : terms_) {
    const ScalarExpr s =
        ScalarExpr::from_monomials({{t.coeff, t.atoms}}).first_order_in(symbol);
    std::vector<OpTerm> ts;
    for (const auto& m : s.monomials()) {
      OpTerm r;
      r.coeff = m.coeff;
      r.atoms = m.atoms;
      r.ops = t.ops;
      ts.push_back(std::move(r));
    }
    total = total + from_terms(std::move(ts));
  }
  return total;
}

void OperatorExpr::collect_symbols(std::map<std::string, bool>& out) const {
  for (const auto& t : terms_) {
    ScalarExpr::from_monomials({{t.coeff, t.atoms}}).collect_symbols(out);
  }
}

void OperatorExpr::collect_labels(std::map<std::string, bool>& out) const {
  for (const auto& t : terms_) {
    for (const auto& f : t.ops) {
      auto [it, inserted] = out.emplace(f.label, f.boson);
      if (!inserted && it->second != f.boson)
        throw Error("label '" + f.label + "' is used both as a two-level system and a boson");
    }
  }
}

std::string OperatorExpr::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const OpTerm& t = terms_[i];
    std::string factors = atom_powers_str(t.atoms);
    for (const auto& f : t.ops) {
      if (!factors.empty()) factors += "*";
      factors += f.str();
    }
    auto [neg, body] = monomial_body(t.coeff, factors);
    if (i == 0) {
      s = (neg ? "-" : "") + body;
    } else {
      s += (neg ? " - " : " + ") + body;
    }
  }
  return s;
}

OperatorExpr operator+(const OperatorExpr& a, const OperatorExpr& b) {
  std::vector<OpTerm> ts = a.terms_;
  ts.insert(ts.end(), b.terms_.begin(), b.terms_.end());
  return OperatorExpr::from_terms(std::move(ts));
}

OperatorExpr operator-(const OperatorExpr& a, const OperatorExpr& b) { return a + (-b); }

OperatorExpr operator*(const OperatorExpr& a, const OperatorExpr& b) {
  std::vector<OpTerm> ts;
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      auto prods = term_product(x, y);
      ts.insert(ts.end(), std::make_move_iterator(prods.begin()),
                std::make_move_iterator(prods.end()));
    }
  }
  return OperatorExpr::from_terms(std::move(ts));
}

OperatorExpr OperatorExpr::operator-() const {
  OperatorExpr r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

namespace {

int cmp_complex_pair(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real() ? -1 : 1;
  if (a.imag() != b.imag()) return a.imag() < b.imag() ? -1 : 1;
  return 0;
}

}  // namespace

int cmp(const OperatorExpr& a, const OperatorExpr& b) {
  const auto& x = a.terms();
  const auto& y = b.terms();
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = cmp(x[i].ops, y[i].ops)) return c;
    if (int c = cmp(x[i].atoms, y[i].atoms)) return c;
    if (int c = cmp_complex_pair(x[i].coeff, y[i].coeff)) return c;
  }
  return x.size() < y.size() ? -1 : (x.size() > y.size() ? 1 : 0);
}

bool operator==(const OperatorExpr& a, const OperatorExpr& b) { return cmp(a, b) == 0; }

}  // namespace slh
