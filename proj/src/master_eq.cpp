#include "slhkit/master_eq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "slhkit/errors.hpp"
#include "slhkit/numfmt.hpp"

namespace slh {

std::string space_kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::qubit:
      return "qubit";
    case SpaceKind::relay:
      return "relay";
    case SpaceKind::boson:
      return "boson";
  }
  return "qubit";
}

SpaceKind space_kind_from_name(const std::string& s) {
  if (s == "qubit") return SpaceKind::qubit;
  if (s == "relay") return SpaceKind::relay;
  if (s == "boson") return SpaceKind::boson;
  throw UserError("unknown space kind '" + s + "'");
}

int SpaceLayout::total_dim() const {
  long long d = 1;
  for (const auto& s : spaces) {
    if (s.dim < 1) throw Error("space '" + s.label + "' has dimension < 1");
    d *= s.dim;
    if (d > (1 << 20)) throw UserError("total Hilbert-space dimension exceeds the dense backend bound");
  }
  return static_cast<int>(d);
}

int SpaceLayout::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < spaces.size(); ++i) {
    if (spaces[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

SpaceLayout SpaceLayout::infer(const std::vector<OperatorExpr>& exprs, int boson_dim) {
  std::map<std::string, bool> labels;
  for (const auto& e : exprs) e.collect_labels(labels);
  SpaceLayout layout;
  for (const auto& [label, is_boson] : labels) {
    LocalSpace s;
    s.label = label;
    s.kind = is_boson ? SpaceKind::boson : SpaceKind::qubit;
    s.dim = is_boson ? boson_dim : 2;
    layout.spaces.push_back(std::move(s));
  }
  return layout;
}

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return r;
}

Eigen::MatrixXcd local_matrix(const OpFactor& f, const LocalSpace& space) {
  if (f.boson != (space.kind == SpaceKind::boson))
    throw Error("operator on '" + f.label + "' does not match the layout's space kind");
  if (!f.boson) {
    // Basis (|0>, |1>) with |0> the +1 eigenvector of Z.
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    const Complex i(0.0, 1.0);
    switch (f.pauli) {
      case Pauli::X:
        m(0, 1) = 1.0;
        m(1, 0) = 1.0;
        break;
      case Pauli::Y:
        m(0, 1) = -i;
        m(1, 0) = i;
        break;
      case Pauli::Z:
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
        break;
    }
    return m;
  }
  const int n = space.dim;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) a(k, k + 1) = std::sqrt(static_cast<double>(k + 1));
  Eigen::MatrixXcd adag = a.adjoint();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
  for (int k = 0; k < f.create; ++k) m = adag * m;
  for (int k = 0; k < f.annihilate; ++k) m = m * a;
  return m;
}

}  // namespace

Eigen::MatrixXcd to_matrix(const OperatorExpr& e, const SpaceLayout& layout,
                           const Bindings& bindings) {
  const int d = layout.total_dim();
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& t : e.terms()) {
    const Complex c = ScalarExpr::from_monomials({{t.coeff, t.atoms}}).eval(bindings);
    // factors are sorted by label, not layout position; pick them up per space
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    std::vector<bool> used(t.ops.size(), false);
    for (const auto& space : layout.spaces) {
      const OpFactor* f = nullptr;
      for (std::size_t k = 0; k < t.ops.size(); ++k) {
        if (t.ops[k].label == space.label) {
          f = &t.ops[k];
          used[k] = true;
          break;
        }
      }
      if (f) {
        m = kron(m, local_matrix(*f, space));
      } else {
        m = kron(m, Eigen::MatrixXcd::Identity(space.dim, space.dim));
      }
    }
    for (std::size_t k = 0; k < t.ops.size(); ++k) {
      if (!used[k]) throw Error("label '" + t.ops[k].label + "' missing from the space layout");
    }
    total += c * m;
  }
  return total;
}

Eigen::VectorXcd parse_ket(const std::string& text, const SpaceLayout& layout) {
  const int d = layout.total_dim();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto parse_number = [&]() -> double {
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
            text[pos] == 'e' || text[pos] == 'E' ||
            ((text[pos] == '+' || text[pos] == '-') && pos > start &&
             (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
      ++pos;
    if (pos == start) throw UserError("expected a number in ket '" + text + "'");
    return std::stod(text.substr(start, pos - start));
  };

  bool any = false;
  double sign = 1.0;
  skip_ws();
  while (pos < text.size()) {
    skip_ws();
    if (pos >= text.size()) break;
    if (text[pos] == '+') {
      sign = 1.0;
      ++pos;
      skip_ws();
    } else if (text[pos] == '-') {
      sign = -1.0;
      ++pos;
      skip_ws();
    } else if (any) {
      throw UserError("expected '+' or '-' between ket terms in '" + text + "'");
    }
    double coeff = 1.0;
    if (pos < text.size() && text[pos] != '|') {
      coeff = parse_number();
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        skip_ws();
      }
    }
    if (pos >= text.size() || text[pos] != '|')
      throw UserError("expected '|' to open a basis ket in '" + text + "'");
    ++pos;
    std::vector<int> digits;
    const bool comma_form = text.find(',', pos) != std::string::npos &&
                            text.find(',', pos) < text.find('>', pos);
    if (comma_form) {
      while (true) {
        skip_ws();
        digits.push_back(static_cast<int>(parse_number()));
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        break;
      }
    } else {
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        digits.push_back(text[pos] - '0');
        ++pos;
      }
    }
    skip_ws();
    if (pos >= text.size() || text[pos] != '>')
      throw UserError("expected '>' to close a basis ket in '" + text + "'");
    ++pos;
    if (digits.size() != layout.spaces.size())
      throw UserError("ket '" + text + "' has " + std::to_string(digits.size()) +
                      " digits but the layout has " + std::to_string(layout.spaces.size()) +
                      " spaces");
    long long index = 0;
    for (std::size_t k = 0; k < digits.size(); ++k) {
      if (digits[k] < 0 || digits[k] >= layout.spaces[k].dim)
        throw UserError("ket level " + std::to_string(digits[k]) + " out of range for space '" +
                        layout.spaces[k].label + "'");
      index = index * layout.spaces[k].dim + digits[k];
    }
    v(index) += sign * coeff;
    any = true;
    sign = 1.0;
    skip_ws();
  }
  if (!any) throw UserError("empty ket specification");
  const double n = v.norm();
  if (n == 0.0) throw UserError("ket specification sums to the zero vector");
  return v / n;
}

Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H,
                              const std::vector<Eigen::MatrixXcd>& Ls) {
  if (H.rows() != rho.rows() || H.cols() != rho.cols())
    throw Error("lindblad_rhs: Hamiltonian dimension mismatch");
  const Complex i(0.0, 1.0);
  Eigen::MatrixXcd r = -i * (H * rho - rho * H);
  for (const auto& L : Ls) {
    if (L.rows() != rho.rows()) throw Error("lindblad_rhs: coupling dimension mismatch");
    const Eigen::MatrixXcd LdL = L.adjoint() * L;
    r += L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
  }
  return r;
}

namespace {

// Effective drift G = -iH - 1/2 sum L^dag L, so that
// rhs(rho) = G rho + rho G^dag + sum L rho L^dag.
struct Rhs {
  Eigen::MatrixXcd G;
  std::vector<Eigen::MatrixXcd> Ls;

  explicit Rhs(const LindbladModel& m) {
    const Complex i(0.0, 1.0);
    G = -i * m.H;
    for (const auto& L : m.lindblads) G -= 0.5 * (L.adjoint() * L);
    Ls = m.lindblads;
  }

  Eigen::MatrixXcd operator()(const Eigen::MatrixXcd& rho) const {
    Eigen::MatrixXcd r = G * rho + rho * G.adjoint();
    for (const auto& L : Ls) r += L * rho * L.adjoint();
    return r;
  }
};

void record_sample(Trajectory& traj, double t, const Eigen::MatrixXcd& rho,
                   const std::vector<Observable>& obs, bool track_min_eig) {
  traj.times.push_back(t);
  for (std::size_t k = 0; k < obs.size(); ++k) {
    traj.values[k].push_back((obs[k].matrix * rho).trace());
  }
  traj.trace_drift.push_back(std::abs(rho.trace() - Complex(1.0, 0.0)));
  if (track_min_eig) {
    Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm, Eigen::EigenvaluesOnly);
    traj.min_eigenvalue.push_back(es.eigenvalues().minCoeff());
  }
}

Eigen::MatrixXcd rk4_step(const Rhs& rhs, const Eigen::MatrixXcd& rho, double h) {
  const Eigen::MatrixXcd k1 = rhs(rho);
  const Eigen::MatrixXcd k2 = rhs(rho + 0.5 * h * k1);
  const Eigen::MatrixXcd k3 = rhs(rho + 0.5 * h * k2);
  const Eigen::MatrixXcd k4 = rhs(rho + h * k3);
  return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// One adaptive Fehlberg 4(5) step attempt; returns the 5th-order solution and
// an error estimate against the embedded 4th-order one.
Eigen::MatrixXcd rkf45_step(const Rhs& rhs, const Eigen::MatrixXcd& y, double h,
                            double& err) {
  const Eigen::MatrixXcd k1 = rhs(y);
  const Eigen::MatrixXcd k2 = rhs(y + h * (0.25 * k1));
  const Eigen::MatrixXcd k3 = rhs(y + h * ((3.0 / 32.0) * k1 + (9.0 / 32.0) * k2));
  const Eigen::MatrixXcd k4 = rhs(
      y + h * ((1932.0 / 2197.0) * k1 - (7200.0 / 2197.0) * k2 + (7296.0 / 2197.0) * k3));
  const Eigen::MatrixXcd k5 =
      rhs(y + h * ((439.0 / 216.0) * k1 - 8.0 * k2 + (3680.0 / 513.0) * k3 -
                   (845.0 / 4104.0) * k4));
  const Eigen::MatrixXcd k6 =
      rhs(y + h * ((-8.0 / 27.0) * k1 + 2.0 * k2 - (3544.0 / 2565.0) * k3 +
                   (1859.0 / 4104.0) * k4 - (11.0 / 40.0) * k5));
  const Eigen::MatrixXcd y5 =
      y + h * ((16.0 / 135.0) * k1 + (6656.0 / 12825.0) * k3 + (28561.0 / 56430.0) * k4 -
               (9.0 / 50.0) * k5 + (2.0 / 55.0) * k6);
  const Eigen::MatrixXcd y4 =
      y + h * ((25.0 / 216.0) * k1 + (1408.0 / 2565.0) * k3 + (2197.0 / 4104.0) * k4 -
               0.2 * k5);
  err = (y5 - y4).norm();
  return y5;
}

}  // namespace

Trajectory integrate(const LindbladModel& model, const Eigen::MatrixXcd& rho0,
                     const std::vector<Observable>& observables, const SimOptions& opt) {
  const int d = model.layout.total_dim();
  if (rho0.rows() != d || rho0.cols() != d)
    throw Error("integrate: initial state dimension does not match the layout");
  if (opt.dt <= 0.0) throw UserError("integrate: dt must be positive");
  if (opt.t_final < 0.0) throw UserError("integrate: t_final must be nonnegative");

  Trajectory traj;
  traj.names.reserve(observables.size());
  for (const auto& o : observables) traj.names.push_back(o.name);
  traj.values.resize(observables.size());

  const Rhs rhs(model);
  Eigen::MatrixXcd rho = rho0;

  if (opt.method == StepMethod::rk4) {
    const long long steps = std::llround(opt.t_final / opt.dt);
    const int stride = std::max(1, opt.sample_stride);
    record_sample(traj, 0.0, rho, observables, opt.track_min_eigenvalue);
    for (long long i = 1; i <= steps; ++i) {
      rho = rk4_step(rhs, rho, opt.dt);
      if (i % stride == 0 || i == steps) {
        record_sample(traj, i * opt.dt, rho, observables, opt.track_min_eigenvalue);
      }
    }
  } else {
    // Adaptive stepping between fixed sample times keeps output grids
    // deterministic and directly comparable across runs.
    const int stride = std::max(1, opt.sample_stride);
    const double sample_dt = opt.dt * stride;
    const long long samples = std::max<long long>(1, std::llround(opt.t_final / sample_dt));
    record_sample(traj, 0.0, rho, observables, opt.track_min_eigenvalue);
    double h = opt.dt;
    for (long long s = 1; s <= samples; ++s) {
      const double t_target = std::min(s * sample_dt, opt.t_final);
      double t = (s - 1) * sample_dt;
      int rejects = 0;
      while (t < t_target - 1e-15 * std::max(1.0, t_target)) {
        const double step = std::min(h, t_target - t);
        double err = 0.0;
        const Eigen::MatrixXcd next = rkf45_step(rhs, rho, step, err);
        const double scale = opt.abs_tol + opt.rel_tol * std::max(rho.norm(), next.norm());
        if (err <= scale || step <= 1e-14) {
          rho = next;
          t += step;
          rejects = 0;
        } else if (++rejects > 60) {
          throw Error("integrate: adaptive step control failed to meet the tolerance");
        }
        const double ratio = err > 0.0 ? scale / err : 10.0;
        h = std::clamp(0.9 * step * std::pow(ratio, 0.2), 0.1 * step, 5.0 * step);
      }
      record_sample(traj, t_target, rho, observables, opt.track_min_eigenvalue);
    }
  }

  traj.final_state = rho;
  return traj;
}

double fidelity(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& psi) {
  if (rho.rows() != psi.size()) throw Error("fidelity: dimension mismatch");
  return (psi.adjoint() * rho * psi).value().real();
}

std::string trajectory_csv(const Trajectory& t) {
  std::string out = "t";
  for (const auto& n : t.names) out += "," + n;
  out += ",trace_drift\n";
  auto cell = [](const Complex& v) -> std::string {
    if (std::abs(v.imag()) <= 1e-12 * (1.0 + std::abs(v.real()))) return format_double(v.real());
    return format_complex(v);
  };
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    out += format_double(t.times[i]);
    for (const auto& series : t.values) out += "," + cell(series[i]);
    out += "," + format_double(t.trace_drift[i]) + "\n";
  }
  return out;
}

}  // namespace slh
