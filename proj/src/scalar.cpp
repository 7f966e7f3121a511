#include "slhkit/scalar.hpp"

#include <algorithm>
#include <cmath>

#include "slhkit/errors.hpp"
#include "slhkit/numfmt.hpp"

namespace slh {

namespace {

int cmp_double(double a, double b) { return a < b ? -1 : (a > b ? 1 : 0); }

int cmp_complex(const Complex& a, const Complex& b) {
  if (int c = cmp_double(a.real(), b.real())) return c;
  return cmp_double(a.imag(), b.imag());
}

int cmp_string(const std::string& a, const std::string& b) {
  int c = a.compare(b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

// ---------------------------------------------------------------------------
// LinArg
// ---------------------------------------------------------------------------

LinArg LinArg::number(double c) {
  LinArg a;
  a.constant = c;
  return a;
}

LinArg LinArg::symbol(const std::string& name, double coeff) {
  LinArg a;
  if (coeff != 0.0) a.terms.emplace_back(name, coeff);
  return a;
}

LinArg LinArg::negated() const {
  LinArg r;
  r.constant = -constant;
  r.terms.reserve(terms.size());
  for (const auto& [n, c] : terms) r.terms.emplace_back(n, -c);
  return r;
}

LinArg LinArg::plus(const LinArg& other) const {
  LinArg r;
  r.constant = constant + other.constant;
  std::size_t i = 0, j = 0;
  while (i < terms.size() || j < other.terms.size()) {
    if (j == other.terms.size() ||
        (i < terms.size() && terms[i].first < other.terms[j].first)) {
      r.terms.push_back(terms[i++]);
    } else if (i == terms.size() || other.terms[j].first < terms[i].first) {
      r.terms.push_back(other.terms[j++]);
    } else {
      double c = terms[i].second + other.terms[j].second;
      if (c != 0.0) r.terms.emplace_back(terms[i].first, c);
      ++i;
      ++j;
    }
  }
  return r;
}

double LinArg::eval(const std::function<double(const std::string&)>& lookup) const {
  double v = constant;
  for (const auto& [n, c] : terms) v += c * lookup(n);
  return v;
}

std::string LinArg::str() const {
  std::string s;
  if (constant != 0.0 || terms.empty()) s = format_double(constant);
  for (const auto& [n, c] : terms) {
    if (c >= 0.0 && !s.empty()) s += "+";
    if (c == 1.0) {
      s += n;
    } else if (c == -1.0) {
      s += "-" + n;
    } else {
      s += format_double(c) + "*" + n;
    }
  }
  return s;
}

int cmp(const LinArg& a, const LinArg& b) {
  if (int c = cmp_double(a.constant, b.constant)) return c;
  const std::size_t n = std::min(a.terms.size(), b.terms.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = cmp_string(a.terms[i].first, b.terms[i].first)) return c;
    if (int c = cmp_double(a.terms[i].second, b.terms[i].second)) return c;
  }
  return a.terms.size() < b.terms.size() ? -1
                                         : (a.terms.size() > b.terms.size() ? 1 : 0);
}

bool operator==(const LinArg& a, const LinArg& b) { return cmp(a, b) == 0; }

// ---------------------------------------------------------------------------
// ScalarAtom
// ---------------------------------------------------------------------------

std::string ScalarAtom::str() const {
  switch (kind) {
    case Kind::symbol:
      return name;
    case Kind::conj_symbol:
      return "conj(" + name + ")";
    case Kind::trig: {
      const char* fn = trig == TrigKind::sin   ? "sin"
                       : trig == TrigKind::cos ? "cos"
                                               : "expi";
      return std::string(fn) + "(" + arg.str() + ")";
    }
    case Kind::inverse:
      return "inv(" + denom->str() + ")";
  }
  return {};
}

int cmp(const ScalarAtom& a, const ScalarAtom& b) {
  if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  switch (a.kind) {
    case ScalarAtom::Kind::symbol:
    case ScalarAtom::Kind::conj_symbol:
      if (int c = cmp_string(a.name, b.name)) return c;
      if (a.real_domain != b.real_domain) return a.real_domain ? -1 : 1;
      return 0;
    case ScalarAtom::Kind::trig:
      if (a.trig != b.trig)
        return static_cast<int>(a.trig) < static_cast<int>(b.trig) ? -1 : 1;
      return cmp(a.arg, b.arg);
    case ScalarAtom::Kind::inverse:
      return cmp(*a.denom, *b.denom);
  }
  return 0;
}

bool operator==(const ScalarAtom& a, const ScalarAtom& b) { return cmp(a, b) == 0; }

int cmp(const AtomPowers& a, const AtomPowers& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = cmp(a[i].first, b[i].first)) return c;
    if (a[i].second != b[i].second) return a[i].second < b[i].second ? -1 : 1;
  }
  return a.size() < b.size() ? -1 : (a.size() > b.size() ? 1 : 0);
}

AtomPowers merge_atom_powers(const AtomPowers& a, const AtomPowers& b) {
  AtomPowers r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size()) {
      r.push_back(a[i++]);
    } else if (i == a.size()) {
      r.push_back(b[j++]);
    } else {
      int c = cmp(a[i].first, b[j].first);
      if (c < 0) {
        r.push_back(a[i++]);
      } else if (c > 0) {
        r.push_back(b[j++]);
      } else {
        r.emplace_back(a[i].first, a[i].second + b[j].second);
        ++i;
        ++j;
      }
    }
  }
  return r;
}

AtomPowers conj_atom_powers(const AtomPowers& a) {
  AtomPowers r;
  r.reserve(a.size());
  for (const auto& [atom, p] : a) {
    ScalarAtom m = atom;
    switch (atom.kind) {
      case ScalarAtom::Kind::symbol:
        if (!atom.real_domain) m.kind = ScalarAtom::Kind::conj_symbol;
        break;
      case ScalarAtom::Kind::conj_symbol:
        m.kind = ScalarAtom::Kind::symbol;
        m.real_domain = false;
        break;
      case ScalarAtom::Kind::trig:
        if (atom.trig == TrigKind::expi) m.arg = atom.arg.negated();
        break;
      case ScalarAtom::Kind::inverse:
        m.denom = std::make_shared<const ScalarExpr>(atom.denom->conj());
        break;
    }
    r.emplace_back(std::move(m), p);
  }
  std::sort(r.begin(), r.end(),
            [](const auto& x, const auto& y) { return cmp(x.first, y.first) < 0; });
  return r;
}

std::string atom_powers_str(const AtomPowers& a) {
  std::string s;
  for (const auto& [atom, p] : a) {
    if (!s.empty()) s += "*";
    s += atom.str();
    if (p > 1) s += "^" + std::to_string(p);
  }
  return s;
}

std::pair<bool, std::string> monomial_body(const Complex& coeff,
                                           const std::string& factors) {
  const bool neg = coeff.real() < 0.0 || (coeff.real() == 0.0 && coeff.imag() < 0.0);
  const Complex c = neg ? -coeff : coeff;
  if (factors.empty()) return {neg, format_complex(c)};
  if (c == Complex(1.0, 0.0)) return {neg, factors};
  return {neg, format_complex(c) + "*" + factors};
}

// ---------------------------------------------------------------------------
// ScalarExpr
// ---------------------------------------------------------------------------

namespace {

std::vector<ScalarMonomial> canonicalize(std::vector<ScalarMonomial> ms) {
  std::sort(ms.begin(), ms.end(), [](const ScalarMonomial& x, const ScalarMonomial& y) {
    return cmp(x.atoms, y.atoms) < 0;
  });
  std::vector<ScalarMonomial> out;
  for (auto& m : ms) {
    if (!out.empty() && cmp(out.back().atoms, m.atoms) == 0) {
      out.back().coeff += m.coeff;
      if (out.back().coeff == Complex(0.0, 0.0)) out.pop_back();
    } else if (m.coeff != Complex(0.0, 0.0)) {
      out.push_back(std::move(m));
    }
  }
  return out;
}

ScalarExpr single_atom(ScalarAtom atom) {
  ScalarMonomial m;
  m.coeff = Complex(1.0, 0.0);
  m.atoms.emplace_back(std::move(atom), 1);
  return ScalarExpr::from_monomials({std::move(m)});
}

ScalarExpr pow_expr(const ScalarExpr& e, int p) {
  ScalarExpr r(1.0);
  for (int i = 0; i < p; ++i) r = r * e;
  return r;
}

Complex pow_complex(const Complex& v, int p) {
  Complex r(1.0, 0.0);
  for (int i = 0; i < p; ++i) r *= v;
  return r;
}

}  // namespace

ScalarExpr::ScalarExpr(const Complex& v) {
  if (v != Complex(0.0, 0.0)) {
    ScalarMonomial m;
    m.coeff = v;
    terms_.push_back(std::move(m));
  }
}

ScalarExpr ScalarExpr::symbol(const std::string& name, bool real_domain) {
  ScalarAtom a;
  a.kind = ScalarAtom::Kind::symbol;
  a.name = name;
  a.real_domain = real_domain;
  return single_atom(std::move(a));
}

ScalarExpr ScalarExpr::sin(const LinArg& a) {
  if (a.is_constant()) return ScalarExpr(std::sin(a.constant));
  if (a.terms.front().second < 0.0) return -sin(a.negated());
  ScalarAtom at;
  at.kind = ScalarAtom::Kind::trig;
  at.trig = TrigKind::sin;
  at.arg = a;
  return single_atom(std::move(at));
}

ScalarExpr ScalarExpr::cos(const LinArg& a) {
  if (a.is_constant()) return ScalarExpr(std::cos(a.constant));
  LinArg arg = a.terms.front().second < 0.0 ? a.negated() : a;
  ScalarAtom at;
  at.kind = ScalarAtom::Kind::trig;
  at.trig = TrigKind::cos;
  at.arg = arg;
  return single_atom(std::move(at));
}

ScalarExpr ScalarExpr::expi(const LinArg& a) {
  if (a.is_constant()) return ScalarExpr(Complex(std::cos(a.constant), std::sin(a.constant)));
  ScalarAtom at;
  at.kind = ScalarAtom::Kind::trig;
  at.trig = TrigKind::expi;
  at.arg = a;
  return single_atom(std::move(at));
}

ScalarExpr ScalarExpr::inverse(const ScalarExpr& e) {
  if (e.is_zero()) throw Error("inverse of a zero expression");
  if (e.is_number()) return ScalarExpr(Complex(1.0, 0.0) / e.number_value());
  ScalarAtom at;
  at.kind = ScalarAtom::Kind::inverse;
  at.denom = std::make_shared<const ScalarExpr>(e);
  return single_atom(std::move(at));
}

ScalarExpr ScalarExpr::from_monomials(std::vector<ScalarMonomial> ms) {
  ScalarExpr e;
  e.terms_ = canonicalize(std::move(ms));
  return e;
}

bool ScalarExpr::is_number() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].atoms.empty());
}

Complex ScalarExpr::number_value() const {
  if (terms_.empty()) return Complex(0.0, 0.0);
  if (terms_.size() != 1 || !terms_[0].atoms.empty())
    throw Error("number_value() on a non-numeric expression");
  return terms_[0].coeff;
}

ScalarExpr ScalarExpr::conj() const {
  std::vector<ScalarMonomial> ms;
  ms.reserve(terms_.size());
  for (const auto& m : terms_) {
    ScalarMonomial r;
    r.coeff = std::conj(m.coeff);
    r.atoms = conj_atom_powers(m.atoms);
    ms.push_back(std::move(r));
  }
  return from_monomials(std::move(ms));
}

namespace {

Complex eval_atom(const ScalarAtom& atom, const std::map<std::string, Complex>& bindings) {
  auto lookup_real = [&](const std::string& n) -> double {
    auto it = bindings.find(n);
    if (it == bindings.end()) throw UnboundSymbolError(n);
    const Complex v = it->second;
    if (std::abs(v.imag()) > 1e-9 * (1.0 + std::abs(v.real())))
      throw Error("symbol '" + n + "' inside a trig argument must bind to a real value");
    return v.real();
  };
  switch (atom.kind) {
    case ScalarAtom::Kind::symbol: {
      auto it = bindings.find(atom.name);
      if (it == bindings.end()) throw UnboundSymbolError(atom.name);
      return it->second;
    }
    case ScalarAtom::Kind::conj_symbol: {
      auto it = bindings.find(atom.name);
      if (it == bindings.end()) throw UnboundSymbolError(atom.name);
      return std::conj(it->second);
    }
    case ScalarAtom::Kind::trig: {
      const double x = atom.arg.eval(lookup_real);
      switch (atom.trig) {
        case TrigKind::sin:
          return Complex(std::sin(x), 0.0);
        case TrigKind::cos:
          return Complex(std::cos(x), 0.0);
        case TrigKind::expi:
          return Complex(std::cos(x), std::sin(x));
      }
      break;
    }
    case ScalarAtom::Kind::inverse: {
      const Complex v = atom.denom->eval(bindings);
      if (v == Complex(0.0, 0.0)) throw Error("inverse expression evaluated at zero");
      return Complex(1.0, 0.0) / v;
    }
  }
  return Complex(0.0, 0.0);
}

}  // namespace

Complex ScalarExpr::eval(const std::map<std::string, Complex>& bindings) const {
  Complex total(0.0, 0.0);
  for (const auto& m : terms_) {
    Complex v = m.coeff;
    for (const auto& [atom, p] : m.atoms) v *= pow_complex(eval_atom(atom, bindings), p);
    total += v;
  }
  return total;
}

ScalarExpr ScalarExpr::substituted(const std::map<std::string, ScalarExpr>& map) const {
  auto subst_linarg = [&](const LinArg& a) -> LinArg {
    LinArg r;
    r.constant = a.constant;
    LinArg acc;  // rebuilt symbol part
    for (const auto& [n, k] : a.terms) {
      auto it = map.find(n);
      if (it == map.end()) {
        acc = acc.plus(LinArg::symbol(n, k));
        continue;
      }
      const ScalarExpr& e = it->second;
      if (e.is_number()) {
        const Complex v = e.number_value();
        if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real())))
          throw Error("substitution into a trig argument requires a real value for '" + n + "'");
        r.constant += k * v.real();
        continue;
      }
      const auto& ms = e.monomials();
      if (ms.size() == 1 && ms[0].atoms.size() == 1 && ms[0].atoms[0].second == 1 &&
          ms[0].atoms[0].first.kind == ScalarAtom::Kind::symbol &&
          ms[0].atoms[0].first.real_domain && ms[0].coeff.imag() == 0.0) {
        acc = acc.plus(LinArg::symbol(ms[0].atoms[0].first.name, k * ms[0].coeff.real()));
        continue;
      }
      throw Error("substitution into a trig argument requires a number or a real symbol for '" +
                  n + "'");
    }
    acc.constant += r.constant;
    return acc;
  };

  ScalarExpr total;
  for (const auto& m : terms_) {
    ScalarExpr part(m.coeff);
    ScalarMonomial passthrough;
    passthrough.coeff = Complex(1.0, 0.0);
    for (const auto& [atom, p] : m.atoms) {
      switch (atom.kind) {
        case ScalarAtom::Kind::symbol: {
          auto it = map.find(atom.name);
          if (it == map.end()) {
            passthrough.atoms.emplace_back(atom, p);
          } else {
            part = part * pow_expr(it->second, p);
          }
          break;
        }
        case ScalarAtom::Kind::conj_symbol: {
          auto it = map.find(atom.name);
          if (it == map.end()) {
            passthrough.atoms.emplace_back(atom, p);
          } else {
            part = part * pow_expr(it->second.conj(), p);
          }
          break;
        }
        case ScalarAtom::Kind::trig: {
          bool touched = false;
          for (const auto& [n, k] : atom.arg.terms) {
            (void)k;
            if (map.count(n)) touched = true;
          }
          if (!touched) {
            passthrough.atoms.emplace_back(atom, p);
          } else {
            const LinArg a = subst_linarg(atom.arg);
            ScalarExpr f = atom.trig == TrigKind::sin   ? sin(a)
                           : atom.trig == TrigKind::cos ? cos(a)
                                                        : expi(a);
            part = part * pow_expr(f, p);
          }
          break;
        }
        case ScalarAtom::Kind::inverse: {
          part = part * pow_expr(inverse(atom.denom->substituted(map)), p);
          break;
        }
      }
    }
    part = part * from_monomials({std::move(passthrough)});
    total = total + part;
  }
  return total;
}

ScalarExpr ScalarExpr::first_order_in(const std::string& symbol) const {
  auto arg_mentions = [&](const LinArg& a) {
    for (const auto& [n, k] : a.terms) {
      (void)k;
      if (n == symbol) return true;
    }
    return false;
  };

  ScalarExpr expanded;
  for (const auto& m : terms_) {
    ScalarExpr part(m.coeff);
    ScalarMonomial passthrough;
    passthrough.coeff = Complex(1.0, 0.0);
    for (const auto& [atom, p] : m.atoms) {
      switch (atom.kind) {
        case ScalarAtom::Kind::symbol:
        case ScalarAtom::Kind::conj_symbol:
          passthrough.atoms.emplace_back(atom, p);
          break;
        case ScalarAtom::Kind::trig: {
          if (!arg_mentions(atom.arg)) {
            passthrough.atoms.emplace_back(atom, p);
            break;
          }
          if (atom.arg.constant != 0.0 || atom.arg.terms.size() != 1)
            throw Error("cannot expand trig argument '" + atom.arg.str() +
                        "' to first order in '" + symbol + "'");
          const double k = atom.arg.terms[0].second;
          const ScalarExpr kt = ScalarExpr(k) * ScalarExpr::symbol(symbol);
          ScalarExpr f;
          switch (atom.trig) {
            case TrigKind::sin:
              f = kt;
              break;
            case TrigKind::cos:
              f = ScalarExpr(1.0);
              break;
            case TrigKind::expi:
              f = ScalarExpr(1.0) + ScalarExpr(Complex(0.0, 1.0)) * kt;
              break;
          }
          part = part * pow_expr(f, p);
          break;
        }
        case ScalarAtom::Kind::inverse: {
          std::map<std::string, bool> syms;
          atom.denom->collect_symbols(syms);
          if (syms.count(symbol))
            throw Error("cannot expand an inverse expression to first order in '" + symbol + "'");
          passthrough.atoms.emplace_back(atom, p);
          break;
        }
      }
    }
    part = part * from_monomials({std::move(passthrough)});
    expanded = expanded + part;
  }

  std::vector<ScalarMonomial> kept;
  for (const auto& m : expanded.terms_) {
    int degree = 0;
    for (const auto& [atom, p] : m.atoms) {
      if ((atom.kind == ScalarAtom::Kind::symbol ||
           atom.kind == ScalarAtom::Kind::conj_symbol) &&
          atom.name == symbol)
        degree += p;
    }
    if (degree < 2) kept.push_back(m);
  }
  return from_monomials(std::move(kept));
}

void ScalarExpr::collect_symbols(std::map<std::string, bool>& out) const {
  auto note = [&out](const std::string& n, bool real_domain) {
    auto [it, inserted] = out.emplace(n, real_domain);
    if (!inserted) it->second = it->second && real_domain;
  };
  for (const auto& m : terms_) {
    for (const auto& [atom, p] : m.atoms) {
      (void)p;
      switch (atom.kind) {
        case ScalarAtom::Kind::symbol:
          note(atom.name, atom.real_domain);
          break;
        case ScalarAtom::Kind::conj_symbol:
          note(atom.name, false);
          break;
        case ScalarAtom::Kind::trig:
          for (const auto& [n, k] : atom.arg.terms) {
            (void)k;
            note(n, true);
          }
          break;
        case ScalarAtom::Kind::inverse:
          atom.denom->collect_symbols(out);
          break;
      }
    }
  }
}

std::string ScalarExpr::str() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    auto [neg, body] = monomial_body(terms_[i].coeff, atom_powers_str(terms_[i].atoms));
    if (i == 0) {
      s = (neg ? "-" : "") + body;
    } else {
      s += (neg ? " - " : " + ") + body;
    }
  }
  return s;
}

ScalarExpr operator+(const ScalarExpr& a, const ScalarExpr& b) {
  std::vector<ScalarMonomial> ms = a.terms_;
  ms.insert(ms.end(), b.terms_.begin(), b.terms_.end());
  return ScalarExpr::from_monomials(std::move(ms));
}

ScalarExpr operator-(const ScalarExpr& a, const ScalarExpr& b) { return a + (-b); }

ScalarExpr operator*(const ScalarExpr& a, const ScalarExpr& b) {
  std::vector<ScalarMonomial> ms;
  ms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      ScalarMonomial m;
      m.coeff = x.coeff * y.coeff;
      m.atoms = merge_atom_powers(x.atoms, y.atoms);
      ms.push_back(std::move(m));
    }
  }
  return ScalarExpr::from_monomials(std::move(ms));
}

ScalarExpr ScalarExpr::operator-() const {
  ScalarExpr r = *this;
  for (auto& m : r.terms_) m.coeff = -m.coeff;
  return r;
}

int cmp(const ScalarExpr& a, const ScalarExpr& b) {
  const auto& x = a.monomials();
  const auto& y = b.monomials();
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = cmp(x[i].atoms, y[i].atoms)) return c;
    if (int c = cmp_complex(x[i].coeff, y[i].coeff)) return c;
  }
  return x.size() < y.size() ? -1 : (x.size() > y.size() ? 1 : 0);
}

bool operator==(const ScalarExpr& a, const ScalarExpr& b) { return cmp(a, b) == 0; }

}  // namespace slh
