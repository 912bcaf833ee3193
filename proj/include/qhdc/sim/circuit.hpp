#pragma once

// Gate set and circuit intermediate representation.
//
// Qubit ordering: qubit q is bit q of the basis-state index (qubit 0 is the
// least significant bit). Gates acting on a qubit list treat list[0] as the
// least significant bit of their local index.

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace qhdc::sim {

using Complex = std::complex<double>;

class Circuit;

struct Hadamard {
  int qubit;
};

struct PauliX {
  int qubit;
};

/// diag(1, e^{i angle}).
struct PhaseShift {
  int qubit;
  double angle;
};

/// diag(e^{-i angle/2}, e^{i angle/2}).
struct Rz {
  int qubit;
  double angle;
};

struct Ry {
  int qubit;
  double angle;
};

struct Rx {
  int qubit;
  double angle;
};

struct Cnot {
  int control;
  int target;
};

/// Diagonal unitary over `qubits`; phases[j] multiplies local basis state j.
struct Diagonal {
  std::vector<int> qubits;
  Eigen::VectorXcd phases;
};

/// |j> -> 2^{-k/2} sum_k e^{+2 pi i jk/2^k} |k> over `qubits`; conjugated when inverse.
struct Qft {
  std::vector<int> qubits;
  bool inverse = false;
};

struct UnitaryMatrix {
  std::vector<int> qubits;
  Eigen::MatrixXcd matrix;
};

/// Applies `body` on the subspace where controls[i] == values[i] for all i and
/// the identity elsewhere. The body's full unitary is controlled, global phase
/// included.
struct Controlled {
  std::shared_ptr<const Circuit> body;
  std::vector<int> controls;
  std::vector<int> values;
};

using Gate = std::variant<Hadamard, PauliX, PhaseShift, Rz, Ry, Rx, Cnot, Diagonal, Qft,
                          UnitaryMatrix, Controlled>;

/// Qubits a gate touches (controls included).
std::vector<int> gate_qubits(const Gate& g);

/// Short lowercase name ("h", "cx", "diagonal", ...).
std::string gate_name(const Gate& g);

/// Hermitian adjoint.
Gate adjoint(const Gate& g);

/// Gate with every qubit index q replaced by mapping[q].
Gate remap(const Gate& g, const std::vector<int>& mapping);

/// 2x2 matrix of a single-qubit gate kind; throws for multi-qubit kinds.
Eigen::Matrix2cd single_qubit_matrix(const Gate& g);

enum class QubitRole { System, Ancilla };

class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  std::size_t size() const noexcept { return gates_.size(); }
  bool empty() const noexcept { return gates_.empty(); }

  /// Validates indices and gate well-formedness; throws InvalidArgument.
  Circuit& append(Gate g);

  /// Append every gate of `other`, mapping its qubit q to mapping[q].
  Circuit& append(const Circuit& other, const std::vector<int>& mapping);

  /// Append `other`, which must have no more qubits than this circuit (identity mapping).
  Circuit& append(const Circuit& other);

  Circuit inverse() const;

  const std::vector<QubitRole>& roles() const noexcept { return roles_; }
  void set_role(int qubit, QubitRole role);

 private:
  int n_qubits_;
  std::vector<Gate> gates_;
  std::vector<QubitRole> roles_;
};

/// Validates a gate against a register of `n_qubits`; throws InvalidArgument.
void validate_gate(const Gate& g, int n_qubits);

/// Wrap `body` as a single controlled gate.
Gate controlled(Circuit body, std::vector<int> controls, std::vector<int> values);

/// Qubit list 0..n-1 offset by `first`.
std::vector<int> qubit_range(int first, int count);

}  // namespace qhdc::sim
