#include <cmath>
#include <numbers>

#include "qhdc/error.hpp"
#include "qhdc/ops.hpp"

namespace qhdc::ops {

namespace {

int log2_exact(Eigen::Index n) {
  if (n < 2 || (n & (n - 1)) != 0) {
    throw InvalidDimension("dimension " + std::to_string(n) + " is not a power of two >= 2");
  }
  int k = 0;
  while ((Eigen::Index{1} << k) < n) ++k;
  return k;
}

}  // namespace

PhaseOracle::PhaseOracle(Eigen::VectorXcd phases) : phases_(std::move(phases)), n_qubits_(log2_exact(phases_.size())) {
  for (Eigen::Index i = 0; i < phases_.size(); ++i) {
    if (std::abs(std::abs(phases_[i]) - 1.0) > 1e-12) {
      throw InvalidArgument("phase oracle: entry " + std::to_string(i) + " is not unit modulus");
    }
  }
}

bool PhaseOracle::is_bipolar() const {
  for (Eigen::Index i = 0; i < phases_.size(); ++i) {
    const Complex p = phases_[i];
    if (std::abs(p - 1.0) > 1e-12 && std::abs(p + 1.0) > 1e-12) return false;
  }
  return true;
}

hdc::BipolarHypervector PhaseOracle::to_bipolar() const {
  if (!is_bipolar()) throw InvalidArgument("phase oracle is not bipolar");
  Eigen::VectorXi v(phases_.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = phases_[i].real() > 0 ? 1 : -1;
  return hdc::BipolarHypervector(std::move(v));
}

sim::Gate PhaseOracle::gate() const { return gate(sim::qubit_range(0, n_qubits_)); }

sim::Gate PhaseOracle::gate(std::vector<int> qubits) const {
  if (static_cast<int>(qubits.size()) != n_qubits_) throw InvalidArgument("phase oracle: qubit count mismatch");
  return sim::Diagonal{std::move(qubits), phases_};
}

PhaseOracle oracle_from_bipolar(const hdc::BipolarHypervector& v) {
  return PhaseOracle(v.as_real().cast<Complex>());
}

PhaseOracle compose_bind(std::span<const PhaseOracle> oracles) {
  if (oracles.empty()) throw InvalidArgument("compose_bind: no oracles");
  Eigen::VectorXcd p = oracles[0].phases();
  for (std::size_t k = 1; k < oracles.size(); ++k) {
    if (oracles[k].dim() != p.size()) throw InvalidDimension("compose_bind: dimension mismatch");
    p = p.cwiseProduct(oracles[k].phases());
  }
  // renormalize so accumulated rounding never trips the unit-modulus check
  for (Eigen::Index i = 0; i < p.size(); ++i) p[i] /= std::abs(p[i]);
  return PhaseOracle(std::move(p));
}

StatePrep prepare_state(const PhaseOracle& oracle) {
  const int n = oracle.n_qubits();
  Circuit c(n);
  for (int q = 0; q < n; ++q) c.append(sim::Hadamard{q});
  c.append(oracle.gate());
  return StatePrep{std::move(c), n, {}};
}

Circuit permutation_block(int n_qubits, long shift) {
  Circuit c(n_qubits);
  const long d = 1L << n_qubits;
  const long s = ((shift % d) + d) % d;
  const auto qs = sim::qubit_range(0, n_qubits);
  c.append(sim::Qft{qs, false});
  for (int j = 0; j < n_qubits; ++j) {
    const double lambda = 2.0 * std::numbers::pi * static_cast<double>(s) * static_cast<double>(1L << j) /
                          static_cast<double>(d);
    c.append(sim::PhaseShift{j, std::remainder(lambda, 2.0 * std::numbers::pi)});
  }
  c.append(sim::Qft{qs, true});
  return c;
}

StatePrep permute_circuit(StatePrep prep, long shift) {
  prep.circuit.append(permutation_block(prep.n_system, shift), sim::qubit_range(0, prep.n_system));
  return prep;
}

Eigen::VectorXcd prepared_state(const StatePrep& prep) {
  const auto state = sim::simulate(prep.circuit);
  const auto system = sim::qubit_range(0, prep.n_system);
  if (prep.postselect.empty()) {
    if (prep.n_qubits() != prep.n_system) {
      throw InvalidArgument("prepared_state: unheralded prep has extra qubits");
    }
    return state.amplitudes();
  }
  if (prep.n_qubits() != prep.n_system + static_cast<int>(prep.postselect.size())) {
    throw InvalidArgument("prepared_state: qubits are neither system nor post-selected");
  }
  Eigen::VectorXcd branch = sim::branch_amplitudes(state, system, prep.postselect, 0);
  const double norm = branch.norm();
  if (norm < 1e-12) throw ImpossibleOutcome("prepared_state: heralded branch has zero probability");
  return branch / norm;
}

StatePrep heralded_prep(const StatePrep& prep) {
  if (!prep.heralded()) return prep;
  const Eigen::VectorXcd psi = prepared_state(prep);
  const Eigen::Index d = psi.size();
  const double phi = std::abs(psi[0]) > 0 ? std::arg(psi[0]) : 0.0;
  const Complex global = std::polar(1.0, phi);
  const Eigen::VectorXcd rotated = psi * std::conj(global);  // rotated[0] real, >= 0

  Eigen::VectorXcd w = -rotated;
  w[0] += 1.0;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(d, d);
  const double wn = w.norm();
  if (wn > 1e-14) {
    w /= wn;
    u -= 2.0 * w * w.adjoint();
  }
  u *= global;
  // exact first column; the reflection already matches it to rounding
  u.col(0) = psi;

  Circuit c(prep.n_system);
  c.append(sim::UnitaryMatrix{sim::qubit_range(0, prep.n_system), std::move(u)});
  return StatePrep{std::move(c), prep.n_system, {}};
}

PhaseOracle rms_phase_encode(const Eigen::VectorXd& v) {
  if (v.size() == 0) throw InvalidDimension("rms_phase_encode: empty vector");
  const double rms = std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
  if (rms == 0.0) throw DegenerateVector("rms_phase_encode: vector has zero RMS");
  Eigen::VectorXcd p(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) p[i] = std::polar(1.0, std::numbers::pi * v[i] / rms);
  return PhaseOracle(std::move(p));
}

PhaseOracle rms_phase_encode(const hdc::BundleVector& v) { return rms_phase_encode(Eigen::VectorXd(v.cast<double>())); }

}  // namespace qhdc::ops
