#pragma once

// Quantum realizations of the HDC operations on the statevector engine.
//
// Register layout used throughout: system qubits occupy 0..n-1 (qubit 0 is the
// low bit of the hypervector index); any ancillas sit above them.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "qhdc/hdc.hpp"
#include "qhdc/rng.hpp"
#include "qhdc/sim/circuit.hpp"
#include "qhdc/sim/statevector.hpp"

namespace qhdc::ops {

using sim::Circuit;
using sim::Complex;

/// Diagonal unitary O|i> = phase_i |i> over a 2^n-dimensional register.
class PhaseOracle {
 public:
  /// Length must be a power of two >= 2 (InvalidDimension); phases unit modulus within 1e-12.
  explicit PhaseOracle(Eigen::VectorXcd phases);

  Eigen::Index dim() const noexcept { return phases_.size(); }
  int n_qubits() const noexcept { return n_qubits_; }
  const Eigen::VectorXcd& phases() const noexcept { return phases_; }

  /// True when every phase is +1 or -1 within 1e-12.
  bool is_bipolar() const;

  /// Inverse of oracle_from_bipolar; throws InvalidArgument for non-bipolar oracles.
  hdc::BipolarHypervector to_bipolar() const;

  /// Diagonal gate on qubits 0..n-1, or on the given qubits.
  sim::Gate gate() const;
  sim::Gate gate(std::vector<int> qubits) const;

 private:
  Eigen::VectorXcd phases_;
  int n_qubits_;
};

/// Phases equal the components. Throws InvalidDimension unless D is a power of two.
PhaseOracle oracle_from_bipolar(const hdc::BipolarHypervector& v);

/// Product oracle; for bipolar inputs this is the oracle of the bound vector.
PhaseOracle compose_bind(std::span<const PhaseOracle> oracles);

/// Circuit preparing a hypervector state from |0...0>.
///
/// System qubits are 0..n_system-1. Qubits listed in `postselect` are ancillas
/// whose |0...0> branch carries the prepared state (LCU bundles); plain preps
/// leave it empty and are unitary state preparations.
struct StatePrep {
  Circuit circuit;
  int n_system;
  std::vector<int> postselect;

  int n_qubits() const noexcept { return circuit.n_qubits(); }
  bool heralded() const noexcept { return !postselect.empty(); }
};

/// Hadamard on every qubit followed by one Diagonal gate.
StatePrep prepare_state(const PhaseOracle& oracle);

/// QFT; PhaseShift(q_j, 2 pi s 2^j / D); inverse QFT on qubits 0..n-1.
/// Net action |j> -> |j + s mod D>.
Circuit permutation_block(int n_qubits, long shift);

/// Appends permutation_block to the system register of `prep`.
StatePrep permute_circuit(StatePrep prep, long shift);

/// Normalized system amplitudes produced by a prep (heralded branch for LCU preps).
Eigen::VectorXcd prepared_state(const StatePrep& prep);

/// Unitary prep on the system register whose |0> column is exactly prepared_state(prep).
/// Plain preps are returned unchanged; heralded preps become one UnitaryMatrix
/// gate (phase-corrected Householder reflection).
StatePrep heralded_prep(const StatePrep& prep);

// ---------------------------------------------------------------------------
// Bundling: LCU + oblivious amplitude amplification

struct LcuOptions {
  int max_rounds = 10;
  /// Skip amplification when alpha^2 already reaches this; also the target the
  /// round search aims for.
  double success_threshold = 0.9;
  int max_qubits = sim::default_max_qubits();
};

/// Test-only mutation switches for the amplification circuit.
struct OaaFaults {
  /// Drop the phase inversion of the all-zero state (S0 becomes identity).
  bool zero_reflection_disabled = false;
};

struct LcuBundlePlan {
  std::vector<StatePrep> unitaries;
  std::vector<double> weights;
  int n_system = 0;
  int m = 0;  ///< ancilla count, ceil(log2 K)
  /// Weight-state preparation on the ancilla register (local qubits 0..m-1);
  /// its |0> column is (sqrt(w_0), ..., sqrt(w_{K-1}), 0, ...).
  Circuit prep_circuit{1};
  Eigen::MatrixXcd prep_unitary;
  /// PREP -> SELECT -> PREP^dagger on n_system + m qubits.
  Circuit a{1};
  double alpha = 0.0;
  int rounds = 0;
  int max_rounds = 10;
  double success_threshold = 0.9;

  std::vector<int> system_qubits() const;
  std::vector<int> ancilla_qubits() const;
};

/// ceil(log2 K), with K = 1 needing no ancilla.
int ancilla_count(std::size_t k);

/// Binary-tree Ry preparation of sqrt(weights) on m qubits (qubit m-1 splits first).
Circuit weight_state_prep(std::span<const double> weights, int m);

/// PREP -> SELECT -> PREP^dagger over n_system + ceil(log2 K) qubits, without
/// simulating it. Weights are normalized; empty means uniform.
Circuit lcu_circuit(std::span<const StatePrep> unitaries, std::span<const double> weights = {});

/// Builds A, simulates it once to measure alpha, and picks the OAA round count.
/// Uniform weights when `weights` is empty. Throws ResourceLimit when the
/// register would exceed options.max_qubits.
LcuBundlePlan lcu_prepare(std::vector<StatePrep> unitaries, std::vector<double> weights = {},
                          LcuOptions options = {});

/// sin^2((2r + 1) asin(alpha)).
double predicted_success(double alpha, int rounds);

/// OAA round count for success amplitude alpha.
///
/// Returns 0 when alpha^2 >= threshold. Otherwise r_est = floor(pi/(4 theta) - 1/2)
/// with theta = asin(alpha), and the window [r_est - 2, r_est + 2] is scored with
/// the closed-form success law: the smallest r whose predicted success reaches
/// the threshold is taken, else the maximizer (lowest r on ties). The result is
/// clamped to max_rounds.
int estimate_rounds(double alpha, int max_rounds = 10, double success_threshold = 0.9);

/// A followed by `rounds` applications of Q = -A S0 A^dagger S_psi. S_psi flips
/// the ancilla-zero subspace; S0 flips the full all-zero state. The overall sign
/// of Q is folded into the S0 diagonal.
Circuit oaa_circuit(const LcuBundlePlan& plan, int rounds, OaaFaults faults = {});

struct AmplifiedState {
  sim::Statevector state;
  double success_probability;
};

/// Runs oaa_circuit(plan, plan.rounds) and reports the ancilla-zero probability.
AmplifiedState oaa_amplify(const LcuBundlePlan& plan, OaaFaults faults = {});

struct BundleResult {
  StatePrep prep;                  ///< heralded prep: A Q^r with ancillas post-selected
  Eigen::VectorXcd system_state;   ///< normalized heralded system state
  double alpha = 0.0;
  int rounds = 0;
  double success_probability = 0.0;
  int m = 0;
  std::size_t k = 0;
};

/// LCU -> estimate_rounds -> OAA -> project(ancilla = 0). Throws
/// CancellationError when the states sum to zero.
BundleResult bundle_states(std::vector<StatePrep> preps, std::vector<double> weights = {},
                           LcuOptions options = {}, OaaFaults faults = {});

/// Normalized sum of the individually simulated prep states. Reference path only.
Eigen::VectorXcd analytic_bundle(std::span<const StatePrep> preps, std::span<const double> weights = {});

struct ProbabilisticLcuResult {
  sim::Statevector final_state;      ///< system + 1 ancilla (qubit n_system)
  Circuit circuit{1};                ///< the realized round sequence
  std::vector<std::size_t> selected; ///< unitary index drawn in each round
  std::vector<double> ancilla_p0;    ///< P(ancilla = 0) after each round
  int control_value = 1;             ///< ancilla value that triggers U_k
};

/// Per round: H(anc); draw k ~ weights; Controlled(U_k, anc = 1); H(anc).
ProbabilisticLcuResult probabilistic_lcu(std::span<const StatePrep> unitaries, std::span<const double> weights,
                                         int rounds, Rng& rng);

// ---------------------------------------------------------------------------
// Similarity

struct SimilarityEstimate {
  enum class Mode { Exact, Sampled };
  double value = 0.0;      ///< Re<psi|phi> = P(0) - P(1)
  double p0 = 0.0;         ///< ancilla P(0), exact or estimated
  Mode mode = Mode::Exact;
  std::uint64_t shots = 0;
  double std_error = 0.0;  ///< sqrt(p0 (1 - p0) / S); 0 in exact mode
};

struct ShotConfig {
  std::uint64_t shots = 0;  ///< 0 selects exact evaluation
  Rng* rng = nullptr;       ///< required when shots > 0
  double readout_flip = 0.0;
};

/// H(anc); Controlled(psi, anc = 0); Controlled(phi, anc = 1); H(anc), with the
/// ancilla at qubit n_system. Heralded preps are replaced by heralded_prep first.
Circuit hadamard_test_circuit(const StatePrep& psi, const StatePrep& phi);

SimilarityEstimate hadamard_test(const StatePrep& psi, const StatePrep& phi, ShotConfig shots = {});

/// phase_i = exp(i pi v_i / RMS), RMS = sqrt(mean(v^2)). Throws DegenerateVector when RMS == 0.
PhaseOracle rms_phase_encode(const Eigen::VectorXd& v);
PhaseOracle rms_phase_encode(const hdc::BundleVector& v);

}  // namespace qhdc::ops
