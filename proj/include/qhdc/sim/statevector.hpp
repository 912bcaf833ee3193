#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qhdc/rng.hpp"
#include "qhdc/sim/circuit.hpp"

namespace qhdc::sim {

/// Register cap: QHDC_MAX_QUBITS if set, otherwise 16.
int default_max_qubits();

/// Dense 2^n amplitude vector.
class Statevector {
 public:
  /// |0...0>. Throws ResourceLimit unless 1 <= n <= max_qubits.
  static Statevector zero_state(int n_qubits, int max_qubits = default_max_qubits());

  /// Wraps explicit amplitudes; length must be a power of two and norm 1 within 1e-10.
  static Statevector from_amplitudes(Eigen::VectorXcd amplitudes);

  int n_qubits() const noexcept { return n_qubits_; }
  Eigen::Index dim() const noexcept { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_[i]; }

  double norm() const { return amplitudes_.norm(); }

  /// In-place gate application.
  void apply(const Gate& gate);
  void apply(const Circuit& circuit);

 private:
  Statevector(int n_qubits, Eigen::VectorXcd amplitudes);

  void apply_controlled(const Gate& gate, std::uint64_t ctrl_mask, std::uint64_t ctrl_value);

  int n_qubits_;
  Eigen::VectorXcd amplitudes_;
};

/// Value-returning gate application.
Statevector apply(Statevector state, const Gate& gate);
Statevector run(const Circuit& circuit, Statevector state);

/// Simulate `circuit` from |0...0>.
Statevector simulate(const Circuit& circuit);

/// Full 2^n x 2^n operator of a circuit, one basis column at a time.
Eigen::MatrixXcd circuit_unitary(const Circuit& circuit);

/// sum_i conj(a_i) b_i.
Complex inner_product(const Statevector& a, const Statevector& b);

/// Probability of each local outcome over `qubits` (qubits[0] is the low bit).
Eigen::VectorXd marginal_probabilities(const Statevector& state, const std::vector<int>& qubits);

struct Projection {
  Statevector state;
  double probability;
};

/// Post-measurement state for `outcome` on `qubits`, renormalized, and its
/// probability. Throws ImpossibleOutcome when the probability is zero.
Projection project(const Statevector& state, const std::vector<int>& qubits, std::uint64_t outcome);

/// Amplitudes of the `keep` qubits on the branch where `traced` qubits equal
/// `outcome`, without renormalization (keep[0] becomes the low bit).
Eigen::VectorXcd branch_amplitudes(const Statevector& state, const std::vector<int>& keep,
                                   const std::vector<int>& traced, std::uint64_t outcome);

struct ShotResult {
  /// Bitstrings printed most-significant measured qubit first.
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t shots = 0;

  std::uint64_t count(const std::string& bits) const {
    const auto it = counts.find(bits);
    return it == counts.end() ? 0 : it->second;
  }
};

struct SamplingOptions {
  /// Independent flip probability applied to each recorded bit. 0 disables.
  double readout_flip = 0.0;
};

/// S independent measurement draws on `qubits`. Deterministic given the rng state.
ShotResult sample(const Statevector& state, const std::vector<int>& qubits, std::uint64_t shots, Rng& rng,
                  SamplingOptions options = {});

std::string outcome_bits(std::uint64_t outcome, std::size_t width);

}  // namespace qhdc::sim
