#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "slhkit/operator_expr.hpp"

namespace slh {

enum class SpaceKind { qubit, relay, boson };

std::string space_kind_name(SpaceKind k);
SpaceKind space_kind_from_name(const std::string& s);

struct LocalSpace {
  std::string label;
  SpaceKind kind = SpaceKind::qubit;
  int dim = 2;  // bosons: truncation dimension
};

// Ordered list of subsystems; matrices are Kronecker products in list order
// (spaces[0] is the leftmost, i.e. most significant, factor).
struct SpaceLayout {
  std::vector<LocalSpace> spaces;

  int total_dim() const;
  int index_of(const std::string& label) const;  // -1 when absent

  // Layout spanning the labels of the given expressions, sorted by label
  // name; two-level labels become qubits and bosonic labels receive the given
  // truncation dimension.
  static SpaceLayout infer(const std::vector<OperatorExpr>& exprs, int boson_dim);
};

using Bindings = std::map<std::string, Complex>;

// Linear, multiplicative, identity-preserving realization of an operator
// expression on the layout's matrix space.  All free symbols must be bound.
Eigen::MatrixXcd to_matrix(const OperatorExpr& e, const SpaceLayout& layout,
                           const Bindings& bindings = {});

// Parses a ket specification such as "|000> + |111>" or "(0,1)*|01>"
// (optionally comma-separated per-space digits: "|0,3,12>") and returns the
// normalized state vector.  Basis digit k of space s selects level k.
Eigen::VectorXcd parse_ket(const std::string& text, const SpaceLayout& layout);

// d rho/dt = -i[H, rho] + sum_k (L_k rho L_k^dag - 1/2 {L_k^dag L_k, rho})
Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& H,
                              const std::vector<Eigen::MatrixXcd>& Ls);

struct LindbladModel {
  SpaceLayout layout;
  Eigen::MatrixXcd H;
  std::vector<Eigen::MatrixXcd> lindblads;
};

struct Observable {
  std::string name;
  Eigen::MatrixXcd matrix;
};

enum class StepMethod { rk4, rk45 };

struct SimOptions {
  double t_final = 1.0;
  double dt = 1e-3;  // rk4: fixed step; rk45: initial step
  StepMethod method = StepMethod::rk4;
  int sample_stride = 1;    // rk4: record every n-th step
  double rel_tol = 1e-8;    // rk45
  double abs_tol = 1e-12;   // rk45
  bool track_min_eigenvalue = false;
};

struct Trajectory {
  std::vector<std::string> names;  // observable column names
  std::vector<double> times;
  // values[k][i] = observable k at sample i
  std::vector<std::vector<Complex>> values;
  std::vector<double> trace_drift;     // |tr(rho) - 1| per sample
  std::vector<double> min_eigenvalue;  // per sample, when tracked
  Eigen::MatrixXcd final_state;
};

// Deterministic integration of the master equation from rho0, recording the
// requested observables (tr(O rho)) along the way.
Trajectory integrate(const LindbladModel& model, const Eigen::MatrixXcd& rho0,
                     const std::vector<Observable>& observables, const SimOptions& opt);

// <psi|rho|psi> as a real number.
double fidelity(const Eigen::MatrixXcd& rho, const Eigen::VectorXcd& psi);

// CSV with header "t,<observable names...>,trace_drift"; complex samples
// render as (re+im*i), so no cell ever needs quoting.
std::string trajectory_csv(const Trajectory& t);

}  // namespace slh
