#pragma once

// Lowering to the primitive basis {Rz, Ry, Rx, H, PhaseShift, CNOT} and
// resource accounting on the lowered stream.
//
// Every lowering routine reports a global phase offset: the emitted gates
// implement e^{i offset} times the source unitary.

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

#include "qhdc/sim/circuit.hpp"

namespace qhdc::synth {

using sim::Circuit;
using sim::Gate;

bool is_primitive(const Gate& g);

/// Receiver of lowered primitive gates.
class GateSink {
 public:
  virtual ~GateSink() = default;
  virtual void emit(const Gate& g) = 0;
};

/// Collects gates into a circuit.
class CircuitSink final : public GateSink {
 public:
  explicit CircuitSink(int n_qubits) : circuit_(n_qubits) {}
  void emit(const Gate& g) override { circuit_.append(g); }
  Circuit& circuit() noexcept { return circuit_; }

 private:
  Circuit circuit_;
};

/// Depth by greedy ASAP over qubit dependency chains, each primitive one step.
class ResourceCounter final : public GateSink {
 public:
  explicit ResourceCounter(int n_qubits) : level_(static_cast<std::size_t>(n_qubits), 0) {}
  void emit(const Gate& g) override;

  std::uint64_t depth() const noexcept { return depth_; }
  std::uint64_t cnot_count() const noexcept { return cnots_; }
  std::uint64_t total_gates() const noexcept { return total_; }

 private:
  std::vector<std::uint64_t> level_;
  std::uint64_t depth_ = 0, cnots_ = 0, total_ = 0;
};

struct PrimitiveCircuit {
  Circuit circuit;
  /// circuit unitary == e^{i phase_offset} * source unitary
  double phase_offset = 0.0;
};

/// Walsh-coefficient synthesis on `qubits` (qubits[0] low bit). The parity for
/// each Z-string lands on its highest qubit, visited in Gray-code order, so a
/// target at local position t costs 2^t CNOTs (2^n - 2 in total); blocks whose
/// coefficients all vanish are skipped.
double synth_diagonal(const std::vector<int>& qubits, const Eigen::VectorXcd& phases, GateSink& sink);
PrimitiveCircuit synth_diagonal(const Eigen::VectorXcd& phases);

/// H and controlled-phase ladder followed by qubit-reversal swaps. Exact (offset 0).
void synth_qft(const std::vector<int>& qubits, bool inverse, GateSink& sink);
PrimitiveCircuit synth_qft(int n_qubits, bool inverse = false);

/// e^{i delta} Rz(alpha) Ry(beta) Rz(gamma); zero angles are dropped.
struct Zyz {
  double delta, alpha, beta, gamma;
};
Zyz zyz_decompose(const Eigen::Matrix2cd& u);

/// `gate` applied only where controls[i] == values[i].
///
/// Single-control X is a CNOT. Diagonal kinds become one larger diagonal over
/// gate qubits plus controls. Other single-qubit gates U = W D W^dagger are
/// lowered as W^dagger, controlled diag(D), W. Composite gates are lowered to
/// primitives first and each primitive is controlled.
double lower_controlled(const Gate& gate, const std::vector<int>& controls, const std::vector<int>& values,
                        GateSink& sink);
PrimitiveCircuit lower_controlled(const Gate& gate, const std::vector<int>& controls,
                                  const std::vector<int>& values, int n_qubits);

/// Throws InvalidArgument for dense unitaries on more than one qubit.
double lower(const Gate& gate, GateSink& sink);
double lower(const Circuit& circuit, GateSink& sink);
PrimitiveCircuit lower(const Circuit& circuit);

struct ResourceReport {
  std::uint64_t depth = 0;
  std::uint64_t cnot_count = 0;
  std::uint64_t total_gates = 0;
  int n_system = 0;
  int n_ancilla = 0;
};

/// Counts on the lowered circuit, streamed without materializing it. Qubit
/// roles of `circuit` give the system/ancilla split.
ResourceReport resources(const Circuit& circuit);

}  // namespace qhdc::synth
