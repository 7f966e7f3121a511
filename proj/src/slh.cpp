#include "slhkit/slh.hpp"

#include "slhkit/errors.hpp"

namespace slh {

SLHTriple SLHTriple::identity(int n) {
  SLHTriple t;
  t.n_in = t.n_out = n;
  t.S.assign(static_cast<std::size_t>(n) * n, OperatorExpr());
  for (int k = 0; k < n; ++k) t.s(k, k) = OperatorExpr(1.0);
  t.L.assign(n, OperatorExpr());
  return t;
}

bool operator==(const SLHTriple& a, const SLHTriple& b) {
  return a.n_in == b.n_in && a.n_out == b.n_out && a.S == b.S && a.L == b.L && a.H == b.H;
}

SLHTriple series(const SLHTriple& b, const SLHTriple& a) {
  if (a.n_out != b.n_in)
    throw TermError("series mismatch: right factor yields " + std::to_string(a.n_out) +
                    " outputs but left factor expects " + std::to_string(b.n_in) + " inputs");
  SLHTriple r;
  r.n_in = a.n_in;
  r.n_out = b.n_out;
  r.S.assign(static_cast<std::size_t>(r.n_out) * r.n_in, OperatorExpr());
  for (int k = 0; k < r.n_out; ++k) {
    for (int l = 0; l < r.n_in; ++l) {
      OperatorExpr acc;
      for (int m = 0; m < b.n_in; ++m) acc = acc + b.s(k, m) * a.s(m, l);
      r.s(k, l) = acc;
    }
  }
  r.L.assign(r.n_out, OperatorExpr());
  for (int k = 0; k < r.n_out; ++k) {
    OperatorExpr acc = b.L[k];
    for (int m = 0; m < b.n_in; ++m) acc = acc + b.s(k, m) * a.L[m];
    r.L[k] = acc;
  }
  // H = H_a + H_b + Im{ L_b^dag S_b L_a }
  OperatorExpr cross;
  for (int k = 0; k < b.n_out; ++k) {
    for (int m = 0; m < b.n_in; ++m) {
      cross = cross + b.L[k].adjoint() * b.s(k, m) * a.L[m];
    }
  }
  r.H = a.H + b.H + cross.im_part();
  return r;
}

SLHTriple concat(const SLHTriple& a, const SLHTriple& b) {
  SLHTriple r;
  r.n_in = a.n_in + b.n_in;
  r.n_out = a.n_out + b.n_out;
  r.S.assign(static_cast<std::size_t>(r.n_out) * r.n_in, OperatorExpr());
  for (int k = 0; k < a.n_out; ++k)
    for (int l = 0; l < a.n_in; ++l) r.s(k, l) = a.s(k, l);
  for (int k = 0; k < b.n_out; ++k)
    for (int l = 0; l < b.n_in; ++l) r.s(a.n_out + k, a.n_in + l) = b.s(k, l);
  r.L = a.L;
  r.L.insert(r.L.end(), b.L.begin(), b.L.end());
  r.H = a.H + b.H;
  return r;
}

namespace {

// Inverse of T = 1 - s for the families that arise from the component set:
// pure numbers, scalar expressions, and T = t0 + R with scalar t0 and R^2
// scalar (e.g. R proportional to a Pauli product), via
// T^{-1} = (t0 - R) / (t0^2 - R^2).
OperatorExpr invert_one_minus(const OperatorExpr& s_entry) {
  const OperatorExpr T = OperatorExpr(1.0) - s_entry;
  if (T.is_zero())
    throw SingularFeedbackError("feedback loop has unit open-loop scattering; 1 - S_ij = 0");
  if (T.is_scalar()) {
    const ScalarExpr t = T.scalar_part();
    if (t.is_number() && t.number_value() == Complex(0.0, 0.0))
      throw SingularFeedbackError("feedback loop has unit open-loop scattering; 1 - S_ij = 0");
    return OperatorExpr(ScalarExpr::inverse(t));
  }
  const ScalarExpr t0 = T.scalar_component();
  const OperatorExpr R = T.operator_component();
  const OperatorExpr R2 = R * R;
  if (!R2.is_scalar())
    throw UserError(
        "cannot eliminate feedback: (1 - S_ij) is outside the symbolically invertible family");
  const ScalarExpr d = t0 * t0 - R2.scalar_part();
  if (d.is_zero())
    throw SingularFeedbackError("feedback loop scattering entry 1 - S_ij is singular");
  return (OperatorExpr(t0) - R) * OperatorExpr(ScalarExpr::inverse(d));
}

}  // namespace

SLHTriple feedback(const SLHTriple& t, int out_index, int in_index) {
  if (out_index < 1 || out_index > t.n_out)
    throw TermError("feedback output index " + std::to_string(out_index) + " out of range 1.." +
                    std::to_string(t.n_out));
  if (in_index < 1 || in_index > t.n_in)
    throw TermError("feedback input index " + std::to_string(in_index) + " out of range 1.." +
                    std::to_string(t.n_in));
  const int i = out_index - 1;
  const int j = in_index - 1;
  const OperatorExpr K = invert_one_minus(t.s(i, j));

  SLHTriple r;
  r.n_in = t.n_in - 1;
  r.n_out = t.n_out - 1;
  r.S.assign(static_cast<std::size_t>(r.n_out) * r.n_in, OperatorExpr());
  r.L.assign(r.n_out, OperatorExpr());

  int rk = 0;
  for (int k = 0; k < t.n_out; ++k) {
    if (k == i) continue;
    int rl = 0;
    for (int l = 0; l < t.n_in; ++l) {
      if (l == j) continue;
      r.s(rk, rl) = t.s(k, l) + t.s(k, j) * K * t.s(i, l);
      ++rl;
    }
    r.L[rk] = t.L[k] + t.s(k, j) * K * t.L[i];
    ++rk;
  }

  OperatorExpr cross;
  for (int k = 0; k < t.n_out; ++k) {
    cross = cross + t.L[k].adjoint() * t.s(k, j) * K * t.L[i];
  }
  r.H = t.H + cross.im_part();
  return r;
}

SLHTriple permutation_slh(const std::vector<int>& sigma) {
  const int n = static_cast<int>(sigma.size());
  std::vector<bool> seen(sigma.size(), false);
  for (int v : sigma) {
    if (v < 1 || v > n || seen[v - 1])
      throw TermError("permutation must list each of 1.." + std::to_string(n) + " exactly once");
    seen[v - 1] = true;
  }
  SLHTriple t;
  t.n_in = t.n_out = n;
  t.S.assign(static_cast<std::size_t>(n) * n, OperatorExpr());
  for (int l = 0; l < n; ++l) t.s(sigma[l] - 1, l) = OperatorExpr(1.0);
  t.L.assign(n, OperatorExpr());
  return t;
}

SLHTriple permute_outputs(const SLHTriple& t, const std::vector<int>& sigma) {
  if (static_cast<int>(sigma.size()) != t.n_out)
    throw TermError("output permutation size does not match port count");
  return series(permutation_slh(sigma), t);
}

SLHTriple permute_inputs(const SLHTriple& t, const std::vector<int>& sigma) {
  if (static_cast<int>(sigma.size()) != t.n_in)
    throw TermError("input permutation size does not match port count");
  return series(t, permutation_slh(sigma));
}

SLHTriple reduce(const CircuitTerm& term,
                 const std::function<SLHTriple(const std::string&)>& resolve) {
  using Kind = CircuitTerm::Kind;
  switch (term.kind()) {
    case Kind::component: {
      SLHTriple t = resolve(term.instance());
      const Arity a = term.arity();
      if (t.n_in != a.n_in || t.n_out != a.n_out)
        throw Error("resolved model for '" + term.instance() +
                    "' does not match the term arity");
      return t;
    }
    case Kind::identity:
      return SLHTriple::identity(term.identity_size());
    case Kind::perm:
      return permutation_slh(term.sigma());
    case Kind::series:
      return series(reduce(term.left(), resolve), reduce(term.right(), resolve));
    case Kind::concat:
      return concat(reduce(term.left(), resolve), reduce(term.right(), resolve));
    case Kind::feedback:
      return feedback(reduce(term.inner(), resolve), term.out_index(), term.in_index());
  }
  throw Error("unreachable term kind");
}

bool slh_equal_numeric(const SLHTriple& a, const SLHTriple& b,
                       const NumericEqualitySpec& spec) {
  if (a.n_in != b.n_in || a.n_out != b.n_out) return false;
  for (std::size_t k = 0; k < a.S.size(); ++k) {
    if (!equal_numeric(a.S[k], b.S[k], spec)) return false;
  }
  for (std::size_t k = 0; k < a.L.size(); ++k) {
    if (!equal_numeric(a.L[k], b.L[k], spec)) return false;
  }
  return equal_numeric(a.H, b.H, spec);
}

}  // namespace slh
