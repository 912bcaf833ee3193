#include <cmath>

#include "qhdc/error.hpp"
#include "qhdc/ops.hpp"

namespace qhdc::ops {

Circuit hadamard_test_circuit(const StatePrep& psi_in, const StatePrep& phi_in) {
  const StatePrep psi = heralded_prep(psi_in);
  const StatePrep phi = heralded_prep(phi_in);
  if (psi.n_system != phi.n_system) throw InvalidDimension("hadamard test: register sizes differ");
  const int n = psi.n_system;
  if (psi.n_qubits() != n || phi.n_qubits() != n) throw InvalidArgument("hadamard test: prep wider than its system");

  Circuit c(n + 1);
  c.set_role(n, sim::QubitRole::Ancilla);
  c.append(sim::Hadamard{n});
  Circuit a(n + 1), b(n + 1);
  a.append(psi.circuit);
  b.append(phi.circuit);
  c.append(sim::controlled(std::move(a), {n}, {0}));
  c.append(sim::controlled(std::move(b), {n}, {1}));
  c.append(sim::Hadamard{n});
  return c;
}

SimilarityEstimate hadamard_test(const StatePrep& psi, const StatePrep& phi, ShotConfig shots) {
  const Circuit c = hadamard_test_circuit(psi, phi);
  const int anc = c.n_qubits() - 1;
  const auto state = sim::run(c, sim::Statevector::zero_state(c.n_qubits(), std::max(c.n_qubits(), sim::default_max_qubits())));

  SimilarityEstimate est;
  if (shots.shots == 0) {
    est.p0 = sim::marginal_probabilities(state, {anc})[0];
    est.value = 2.0 * est.p0 - 1.0;
    return est;
  }
  if (!shots.rng) throw InvalidArgument("hadamard test: sampled mode needs an rng");
  const auto res = sim::sample(state, {anc}, shots.shots, *shots.rng, {shots.readout_flip});
  const double s = static_cast<double>(shots.shots);
  est.mode = SimilarityEstimate::Mode::Sampled;
  est.shots = shots.shots;
  est.p0 = static_cast<double>(res.count("0")) / s;
  est.value = 2.0 * est.p0 - 1.0;
  est.std_error = std::sqrt(est.p0 * (1.0 - est.p0) / s);
  return est;
}

}  // namespace qhdc::ops
