#include "slhkit/qec_models.hpp"

#include <cmath>
#include <set>

#include "slhkit/errors.hpp"

namespace slh {

TruthTable standard_truth_table() {
  return {
      TruthRow{0, 0, 0, 0, 0},
      TruthRow{1, 0, 1, 0, 0},
      TruthRow{1, 1, 0, 1, 0},
      TruthRow{0, 1, 0, 0, 1},
  };
}

OperatorExpr syndrome_projector(const std::string& qa, const std::string& qb) {
  return OperatorExpr(ScalarExpr(0.5)) *
         (OperatorExpr(1.0) - OperatorExpr::pauli_z(qa) * OperatorExpr::pauli_z(qb));
}

std::vector<OperatorExpr> BitFlipModel::all_lindblads() const {
  std::vector<OperatorExpr> out = relay_lindblads;
  out.insert(out.end(), error_lindblads.begin(), error_lindblads.end());
  out.insert(out.end(), loss_lindblads.begin(), loss_lindblads.end());
  return out;
}

SpaceLayout BitFlipModel::layout() const { return SpaceLayout{spaces}; }

SLHTriple BitFlipModel::to_slh() const {
  std::vector<OperatorExpr> ls = all_lindblads();
  SLHTriple t = SLHTriple::identity(static_cast<int>(ls.size()));
  t.L = std::move(ls);
  t.H = hamiltonian;
  return t;
}

LindbladModel BitFlipModel::to_lindblad(const Bindings& bindings) const {
  LindbladModel model;
  model.layout = layout();
  model.H = to_matrix(hamiltonian, model.layout, bindings);
  for (const OperatorExpr& l : all_lindblads()) {
    model.lindblads.push_back(to_matrix(l, model.layout, bindings));
  }
  return model;
}

BitFlipModel build_bitflip(const ScalarExpr& alpha, const ScalarExpr& omega,
                           const ScalarExpr& theta, double gamma) {
  BitFlipModel m;
  m.spaces = {
      LocalSpace{"Q1", SpaceKind::qubit, 2}, LocalSpace{"Q2", SpaceKind::qubit, 2},
      LocalSpace{"Q3", SpaceKind::qubit, 2}, LocalSpace{"R1", SpaceKind::relay, 2},
      LocalSpace{"R2", SpaceKind::relay, 2},
  };

  const OperatorExpr one(1.0);
  const OperatorExpr m12 = syndrome_projector("Q1", "Q2");
  const OperatorExpr m23 = syndrome_projector("Q2", "Q3");
  const OperatorExpr a(alpha);

  // Relay set/reset channels: R1 follows M12, R2 follows M23, each decaying
  // at rate |alpha|^2 toward the syndrome value.
  m.relay_lindblads = {
      a * (OperatorExpr::sigma_plus("R1") * m12 -
           OperatorExpr::projector0("R1") * (one - m12)),
      a * (-(OperatorExpr::projector1("R1") * m12) +
           OperatorExpr::sigma_minus("R1") * (one - m12)),
      a * (OperatorExpr::sigma_plus("R2") * m23 -
           OperatorExpr::projector0("R2") * (one - m23)),
      a * (-(OperatorExpr::projector1("R2") * m23) +
           OperatorExpr::sigma_minus("R2") * (one - m23)),
  };

  const double root2 = std::sqrt(2.0);
  m.hamiltonian =
      OperatorExpr(omega) *
      (OperatorExpr(ScalarExpr(root2)) * OperatorExpr::pauli_x("Q1") *
           OperatorExpr::projector1("R1") * OperatorExpr::projector0("R2") +
       OperatorExpr::pauli_x("Q2") * OperatorExpr::projector1("R1") *
           OperatorExpr::projector1("R2") -
       OperatorExpr(ScalarExpr(root2)) * OperatorExpr::pauli_x("Q3") *
           OperatorExpr::projector0("R1") * OperatorExpr::projector1("R2"));

  if (gamma < 0.0) throw UserError("gamma must be nonnegative");
  if (gamma > 0.0) {
    const ScalarExpr root_gamma(std::sqrt(gamma));
    m.error_lindblads = {
        OperatorExpr(root_gamma) * OperatorExpr::pauli_x("Q1"),
        OperatorExpr(root_gamma) * OperatorExpr::pauli_x("Q2"),
        OperatorExpr(root_gamma) * OperatorExpr::pauli_x("Q3"),
    };
  }

  if (!theta.is_zero()) {
    m.loss_lindblads = {OperatorExpr(alpha * theta) * OperatorExpr::pauli_z("Q2")};
  }
  return m;
}

OperatorExpr build_ninequbit_loss_lindblad(const ScalarExpr& alpha,
                                           const ScalarExpr& theta) {
  return OperatorExpr(alpha * theta) * OperatorExpr::pauli_z("Q2") *
         OperatorExpr::pauli_z("Q5") * OperatorExpr::pauli_z("Q8");
}

OperatorExpr project_relay_state(
    const OperatorExpr& e, const std::vector<std::pair<std::string, int>>& relays) {
  auto value_of = [&](const std::string& label) -> const int* {
    for (const auto& [name, v] : relays) {
      if (name == label) return &v;
    }
    return nullptr;
  };

  std::vector<OpTerm> kept;
  for (const OpTerm& term : e.terms()) {
    OpTerm next;
    next.coeff = term.coeff;
    next.atoms = term.atoms;
    bool dropped = false;
    for (const OpFactor& f : term.ops) {
      const int* v = value_of(f.label);
      if (!v) {
        next.ops.push_back(f);
        continue;
      }
      if (f.boson) {
        throw UserError("relay label '" + f.label + "' carries a bosonic factor");
      }
      if (f.pauli != Pauli::Z) {
        dropped = true;  // off-diagonal in the relay basis
        break;
      }
      if (*v == 1) next.coeff = -next.coeff;  // <1|Z|1> = -1
    }
    if (!dropped) kept.push_back(std::move(next));
  }
  return OperatorExpr::from_terms(std::move(kept));
}

bool verify_controller_truth_table(const OperatorExpr& hc, const TruthTable& table) {
  static const std::set<std::string> expected_labels = {"Q1", "Q2", "Q3", "R1",
                                                        "R2"};
  std::map<std::string, bool> labels;
  hc.collect_labels(labels);
  for (const auto& [label, boson] : labels) {
    if (boson || !expected_labels.count(label)) {
      throw UserError("controller Hamiltonian acts on unexpected space '" + label +
                      "'");
    }
  }

  for (const TruthRow& row : table) {
    // The relays settle to the syndrome values, so the drive seen by the
    // register is the diagonal block at (R1, R2) = (m12, m23).
    OperatorExpr block =
        project_relay_state(hc, {{"R1", row.m12}, {"R2", row.m23}});

    bool want[3] = {row.x1 != 0, row.x2 != 0, row.x3 != 0};
    bool seen[3] = {false, false, false};
    for (const OpTerm& term : block.terms()) {
      if (term.ops.size() != 1 || term.ops[0].boson ||
          term.ops[0].pauli != Pauli::X) {
        return false;  // anything but a plain single-qubit X drive
      }
      const std::string& label = term.ops[0].label;
      int k = label == "Q1" ? 0 : label == "Q2" ? 1 : label == "Q3" ? 2 : -1;
      if (k < 0) return false;
      seen[k] = true;
    }
    for (int k = 0; k < 3; ++k) {
      if (want[k] != seen[k]) return false;
    }
  }
  return true;
}

Eigen::VectorXcd bitflip_initial_state(const SpaceLayout& layout) {
  return parse_ket("|00000> + |11100>", layout);
}

}  // namespace slh
