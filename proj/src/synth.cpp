#include "qhdc/synth.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "qhdc/error.hpp"

namespace qhdc::synth {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kZero = 1e-12;

void emit_zyz(int q, const Zyz& z, GateSink& sink) {
  if (std::abs(z.gamma) > kZero) sink.emit(sim::Rz{q, z.gamma});
  if (std::abs(z.beta) > kZero) sink.emit(sim::Ry{q, z.beta});
  if (std::abs(z.alpha) > kZero) sink.emit(sim::Rz{q, z.alpha});
}

// In-place Walsh-Hadamard transform, unnormalized.
void fwht(std::vector<double>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1) {
    for (std::size_t i = 0; i < a.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = a[j], y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
}

void controlled_phase(int c, int t, double lambda, GateSink& sink) {
  sink.emit(sim::PhaseShift{c, lambda / 2});
  sink.emit(sim::Cnot{c, t});
  sink.emit(sim::PhaseShift{t, -lambda / 2});
  sink.emit(sim::Cnot{c, t});
  sink.emit(sim::PhaseShift{t, lambda / 2});
}

// Diagonal over gate qubits followed by controls, identity off the control pattern.
double controlled_diagonal(const std::vector<int>& qubits, const Eigen::VectorXcd& phases,
                           const std::vector<int>& controls, const std::vector<int>& values, GateSink& sink) {
  std::vector<int> all = qubits;
  all.insert(all.end(), controls.begin(), controls.end());
  const std::size_t k = qubits.size();
  std::uint64_t pattern = 0;
  for (std::size_t i = 0; i < values.size(); ++i) pattern |= static_cast<std::uint64_t>(values[i]) << i;
  Eigen::VectorXcd big = Eigen::VectorXcd::Ones(Eigen::Index{1} << all.size());
  const auto low = Eigen::Index{1} << k;
  big.segment(static_cast<Eigen::Index>(pattern) * low, low) = phases;
  return synth_diagonal(all, big, sink);
}

// Controlled single-qubit M = W diag(d) W^dagger: only the diagonal needs the controls.
double controlled_single(int t, const Eigen::Matrix2cd& m, const std::vector<int>& controls,
                         const std::vector<int>& values, GateSink& sink) {
  if (std::abs(m(0, 1)) < 1e-14 && std::abs(m(1, 0)) < 1e-14) {
    return controlled_diagonal({t}, Eigen::Vector2cd(m(0, 0), m(1, 1)), controls, values, sink);
  }
  Eigen::ComplexSchur<Eigen::Matrix2cd> schur(m);
  const Eigen::Matrix2cd w = schur.matrixU();
  Eigen::Vector2cd d = schur.matrixT().diagonal();
  for (Eigen::Index i = 0; i < 2; ++i) d[i] /= std::abs(d[i]);
  emit_zyz(t, zyz_decompose(w.adjoint()), sink);
  const double off = controlled_diagonal({t}, d, controls, values, sink);
  emit_zyz(t, zyz_decompose(w), sink);
  return off;
}

// Buffered primitive lowering of a composite gate, re-emitted under control.
std::vector<Gate> primitives_of(const Gate& g) {
  struct Buffer final : GateSink {
    std::vector<Gate> gates;
    void emit(const Gate& x) override { gates.push_back(x); }
  } buf;
  lower(g, buf);
  return std::move(buf.gates);
}

}  // namespace

bool is_primitive(const Gate& g) {
  return std::holds_alternative<sim::Rz>(g) || std::holds_alternative<sim::Ry>(g) ||
         std::holds_alternative<sim::Rx>(g) || std::holds_alternative<sim::Hadamard>(g) ||
         std::holds_alternative<sim::PhaseShift>(g) || std::holds_alternative<sim::Cnot>(g);
}

void ResourceCounter::emit(const Gate& g) {
  if (!is_primitive(g)) {
    throw InvalidArgument("resource counter received non-primitive gate " + sim::gate_name(g));
  }
  std::uint64_t lvl = 0;
  const auto qs = sim::gate_qubits(g);
  for (int q : qs) lvl = std::max(lvl, level_.at(static_cast<std::size_t>(q)));
  ++lvl;
  for (int q : qs) level_[static_cast<std::size_t>(q)] = lvl;
  depth_ = std::max(depth_, lvl);
  ++total_;
  if (std::holds_alternative<sim::Cnot>(g)) ++cnots_;
}

double synth_diagonal(const std::vector<int>& qubits, const Eigen::VectorXcd& phases, GateSink& sink) {
  const std::size_t n = qubits.size();
  if (phases.size() != (Eigen::Index{1} << n)) throw InvalidArgument("synth_diagonal: expected 2^n phases");
  std::vector<double> a(static_cast<std::size_t>(phases.size()));
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    if (std::abs(std::abs(phases[i]) - 1.0) > 1e-12) {
      throw InvalidArgument("synth_diagonal: phase " + std::to_string(i) + " is not unit modulus");
    }
    a[static_cast<std::size_t>(i)] = std::arg(phases[i]);
  }
  fwht(a);
  const double scale = 1.0 / static_cast<double>(a.size());
  for (double& x : a) x *= scale;
  // phases = exp(i sum_S a_S Z_S); exp(i a Z) = Rz(-2a)

  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t block = std::size_t{1} << t;
    bool any = false;
    for (std::size_t s = 0; s < block && !any; ++s) any = std::abs(a[block | s]) > kZero;
    if (!any) continue;
    const int target = qubits[t];
    std::size_t prev = 0;
    for (std::size_t i = 0; i < block; ++i) {
      const std::size_t g = i ^ (i >> 1);
      if (i > 0) sink.emit(sim::Cnot{qubits[static_cast<std::size_t>(std::countr_zero(g ^ prev))], target});
      const double c = a[block | g];
      if (std::abs(c) > kZero) sink.emit(sim::Rz{target, -2.0 * c});
      prev = g;
    }
    if (t > 0) sink.emit(sim::Cnot{qubits[t - 1], target});
  }
  return -a[0];
}

PrimitiveCircuit synth_diagonal(const Eigen::VectorXcd& phases) {
  int n = 0;
  while ((Eigen::Index{1} << n) < phases.size()) ++n;
  if (n < 1 || (Eigen::Index{1} << n) != phases.size()) throw InvalidArgument("synth_diagonal: length is not a power of two >= 2");
  CircuitSink sink(n);
  const double off = synth_diagonal(sim::qubit_range(0, n), phases, sink);
  return {std::move(sink.circuit()), off};
}

void synth_qft(const std::vector<int>& qubits, bool inverse, GateSink& sink) {
  const int n = static_cast<int>(qubits.size());
  if (n < 1) throw InvalidArgument("synth_qft: empty register");
  struct Step {
    int kind;  // 0 H, 1 controlled phase, 2 swap
    int a, b;
    double lambda;
  };
  std::vector<Step> steps;
  for (int i = n - 1; i >= 0; --i) {
    steps.push_back({0, i, 0, 0.0});
    for (int j = i - 1; j >= 0; --j) steps.push_back({1, j, i, std::numbers::pi / std::ldexp(1.0, i - j)});
  }
  for (int k = 0; k < n / 2; ++k) steps.push_back({2, k, n - 1 - k, 0.0});
  if (inverse) std::reverse(steps.begin(), steps.end());

  for (const auto& s : steps) {
    const int qa = qubits[static_cast<std::size_t>(s.a)];
    const int qb = qubits[static_cast<std::size_t>(s.b)];
    switch (s.kind) {
      case 0:
        sink.emit(sim::Hadamard{qa});
        break;
      case 1:
        controlled_phase(qa, qb, inverse ? -s.lambda : s.lambda, sink);
        break;
      default:
        sink.emit(sim::Cnot{qa, qb});
        sink.emit(sim::Cnot{qb, qa});
        sink.emit(sim::Cnot{qa, qb});
    }
  }
}

PrimitiveCircuit synth_qft(int n_qubits, bool inverse) {
  CircuitSink sink(n_qubits);
  synth_qft(sim::qubit_range(0, n_qubits), inverse, sink);
  return {std::move(sink.circuit()), 0.0};
}

Zyz zyz_decompose(const Eigen::Matrix2cd& u) {
  const double delta = std::arg(u.determinant()) / 2.0;
  const Eigen::Matrix2cd v = u * std::polar(1.0, -delta);
  const double abs_a = std::abs(v(0, 0)), abs_b = std::abs(v(1, 0));
  const double beta = 2.0 * std::atan2(abs_b, abs_a);
  double alpha = 0.0, gamma = 0.0;
  if (abs_b < 1e-14) {
    alpha = -2.0 * std::arg(v(0, 0));
  } else if (abs_a < 1e-14) {
    alpha = 2.0 * std::arg(v(1, 0));
  } else {
    const double sum = -2.0 * std::arg(v(0, 0));
    const double diff = 2.0 * std::arg(v(1, 0));
    alpha = (sum + diff) / 2.0;
    gamma = (sum - diff) / 2.0;
  }
  return {delta, alpha, beta, gamma};
}

double lower_controlled(const Gate& gate, const std::vector<int>& controls, const std::vector<int>& values,
                        GateSink& sink) {
  if (controls.size() != values.size()) throw InvalidArgument("lower_controlled: controls/values size");
  if (controls.empty()) return lower(gate, sink);

  return std::visit(
      Overloaded{
          [&](const sim::Controlled& x) {
            std::vector<int> c = controls, v = values;
            c.insert(c.end(), x.controls.begin(), x.controls.end());
            v.insert(v.end(), x.values.begin(), x.values.end());
            double off = 0.0;
            for (const auto& inner : x.body->gates()) off += lower_controlled(inner, c, v, sink);
            return off;
          },
          [&](const sim::Diagonal& x) { return controlled_diagonal(x.qubits, x.phases, controls, values, sink); },
          [&](const sim::PhaseShift& x) {
            Eigen::Vector2cd p(1.0, std::polar(1.0, x.angle));
            return controlled_diagonal({x.qubit}, p, controls, values, sink);
          },
          [&](const sim::Rz& x) {
            Eigen::Vector2cd p(std::polar(1.0, -x.angle / 2), std::polar(1.0, x.angle / 2));
            return controlled_diagonal({x.qubit}, p, controls, values, sink);
          },
          [&](const sim::Cnot& x) {
            std::vector<int> c = controls, v = values;
            c.push_back(x.control);
            v.push_back(1);
            return lower_controlled(sim::PauliX{x.target}, c, v, sink);
          },
          [&](const sim::Qft& x) {
            // synth_qft is exact, so no phase needs restoring under control
            double off = 0.0;
            for (const auto& p : primitives_of(x)) off += lower_controlled(p, controls, values, sink);
            return off;
          },
          [&](const sim::UnitaryMatrix& x) -> double {
            if (x.qubits.size() != 1) throw InvalidArgument("lower: dense multi-qubit unitaries are not supported");
            return controlled_single(x.qubits[0], x.matrix, controls, values, sink);
          },
          [&](const auto& x) -> double {
            // remaining single-qubit kinds: H, X, Ry, Rx
            const int t = sim::gate_qubits(x)[0];
            if (std::holds_alternative<sim::PauliX>(Gate(x)) && controls.size() == 1) {
              // value 0: conjugate by Rx(pi) = -iX on the control; the pair contributes -1
              if (values[0] == 0) sink.emit(sim::Rx{controls[0], std::numbers::pi});
              sink.emit(sim::Cnot{controls[0], t});
              if (values[0] == 0) sink.emit(sim::Rx{controls[0], std::numbers::pi});
              return values[0] == 0 ? std::numbers::pi : 0.0;
            }
            return controlled_single(t, sim::single_qubit_matrix(x), controls, values, sink);
          },
      },
      gate);
}

PrimitiveCircuit lower_controlled(const Gate& gate, const std::vector<int>& controls,
                                  const std::vector<int>& values, int n_qubits) {
  CircuitSink sink(n_qubits);
  const double off = lower_controlled(gate, controls, values, sink);
  return {std::move(sink.circuit()), off};
}

double lower(const Gate& gate, GateSink& sink) {
  return std::visit(
      Overloaded{
          [&](const sim::Diagonal& x) { return synth_diagonal(x.qubits, x.phases, sink); },
          [&](const sim::Qft& x) {
            synth_qft(x.qubits, x.inverse, sink);
            return 0.0;
          },
          [&](const sim::UnitaryMatrix& x) {
            if (x.qubits.size() != 1) throw InvalidArgument("lower: dense multi-qubit unitaries are not supported");
            const Zyz z = zyz_decompose(x.matrix);
            emit_zyz(x.qubits[0], z, sink);
            return -z.delta;
          },
          [&](const sim::PauliX& x) {
            // X = i Rx(pi)
            sink.emit(sim::Rx{x.qubit, std::numbers::pi});
            return -std::numbers::pi / 2;
          },
          [&](const sim::Controlled& x) {
            double off = 0.0;
            for (const auto& inner : x.body->gates()) off += lower_controlled(inner, x.controls, x.values, sink);
            return off;
          },
          [&](const auto& x) {
            sink.emit(x);
            return 0.0;
          },
      },
      gate);
}

double lower(const Circuit& circuit, GateSink& sink) {
  double off = 0.0;
  for (const auto& g : circuit.gates()) off += lower(g, sink);
  return off;
}

PrimitiveCircuit lower(const Circuit& circuit) {
  CircuitSink sink(circuit.n_qubits());
  const double off = lower(circuit, sink);
  return {std::move(sink.circuit()), off};
}

ResourceReport resources(const Circuit& circuit) {
  ResourceCounter counter(circuit.n_qubits());
  lower(circuit, counter);
  ResourceReport r;
  r.depth = counter.depth();
  r.cnot_count = counter.cnot_count();
  r.total_gates = counter.total_gates();
  for (auto role : circuit.roles()) (role == sim::QubitRole::Ancilla ? r.n_ancilla : r.n_system)++;
  return r;
}

}  // namespace qhdc::synth
