#include "qhdc/sim/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <utility>

#include "qhdc/error.hpp"

namespace qhdc::sim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::uint64_t bit(int q) { return std::uint64_t{1} << q; }

std::uint64_t mask_of(const std::vector<int>& qubits) {
  std::uint64_t m = 0;
  for (int q : qubits) m |= bit(q);
  return m;
}

/// offsets[j] scatters local index j onto the register bits named by `qubits`.
std::vector<std::uint64_t> local_offsets(const std::vector<int>& qubits) {
  const std::size_t n = std::size_t{1} << qubits.size();
  std::vector<std::uint64_t> offsets(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t b = 0; b < qubits.size(); ++b) {
      if ((j >> b) & 1U) offsets[j] |= bit(qubits[b]);
    }
  }
  return offsets;
}

std::uint64_t gather_index(std::uint64_t i, const std::vector<int>& qubits) {
  std::uint64_t local = 0;
  for (std::size_t b = 0; b < qubits.size(); ++b) local |= ((i >> qubits[b]) & 1U) << b;
  return local;
}

/// In-place unitary DFT: y_k = N^{-1/2} sum_j x_j exp(sign * 2 pi i jk / N).
void unitary_dft(Eigen::Ref<Eigen::VectorXcd> x, double sign) {
  const Eigen::Index n = x.size();
  for (Eigen::Index i = 1, j = 0; i < n; ++i) {
    Eigen::Index b = n >> 1;
    for (; j & b; b >>= 1) j ^= b;
    j ^= b;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (Eigen::Index len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    for (Eigen::Index start = 0; start < n; start += len) {
      for (Eigen::Index k = 0; k < len / 2; ++k) {
        const Complex w = std::polar(1.0, ang * static_cast<double>(k));
        const Complex u = x[start + k];
        const Complex v = x[start + k + len / 2] * w;
        x[start + k] = u + v;
        x[start + k + len / 2] = u - v;
      }
    }
  }
  x /= std::sqrt(static_cast<double>(n));
}

}  // namespace

int default_max_qubits() {
  if (const char* env = std::getenv("QHDC_MAX_QUBITS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 30) return static_cast<int>(v);
  }
  return 16;
}

Statevector::Statevector(int n_qubits, Eigen::VectorXcd amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

Statevector Statevector::zero_state(int n_qubits, int max_qubits) {
  if (n_qubits < 1 || n_qubits > max_qubits) {
    throw ResourceLimit("register of " + std::to_string(n_qubits) + " qubits outside [1, " +
                        std::to_string(max_qubits) + "]");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(Eigen::Index{1} << n_qubits);
  amps[0] = 1.0;
  return Statevector(n_qubits, std::move(amps));
}

Statevector Statevector::from_amplitudes(Eigen::VectorXcd amplitudes) {
  const Eigen::Index d = amplitudes.size();
  if (d < 2 || (d & (d - 1)) != 0) throw InvalidDimension("statevector length must be a power of two >= 2");
  if (std::abs(amplitudes.norm() - 1.0) > 1e-10) throw InvalidArgument("statevector must have unit norm");
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  return Statevector(n, std::move(amplitudes));
}

void Statevector::apply(const Gate& gate) {
  validate_gate(gate, n_qubits_);
  apply_controlled(gate, 0, 0);
}

void Statevector::apply(const Circuit& circuit) {
  if (circuit.n_qubits() > n_qubits_) throw InvalidArgument("circuit is wider than the register");
  for (const auto& g : circuit.gates()) apply_controlled(g, 0, 0);
}

void Statevector::apply_controlled(const Gate& gate, std::uint64_t ctrl_mask, std::uint64_t ctrl_value) {
  const auto dim = static_cast<std::uint64_t>(amplitudes_.size());
  auto& a = amplitudes_;

  auto apply_1q = [&](int q, const Eigen::Matrix2cd& m, std::uint64_t cm, std::uint64_t cv) {
    const std::uint64_t qb = bit(q);
    for (std::uint64_t i = 0; i < dim; ++i) {
      if ((i & qb) || (i & cm) != cv) continue;
      const Complex x0 = a[static_cast<Eigen::Index>(i)];
      const Complex x1 = a[static_cast<Eigen::Index>(i | qb)];
      a[static_cast<Eigen::Index>(i)] = m(0, 0) * x0 + m(0, 1) * x1;
      a[static_cast<Eigen::Index>(i | qb)] = m(1, 0) * x0 + m(1, 1) * x1;
    }
  };

  // Gather each block over `qubits`, transform it, scatter it back.
  auto apply_block = [&](const std::vector<int>& qubits, auto&& transform) {
    const std::uint64_t qm = mask_of(qubits);
    const auto offsets = local_offsets(qubits);
    Eigen::VectorXcd block(static_cast<Eigen::Index>(offsets.size()));
    for (std::uint64_t base = 0; base < dim; ++base) {
      if ((base & qm) || (base & ctrl_mask) != ctrl_value) continue;
      for (std::size_t j = 0; j < offsets.size(); ++j) block[static_cast<Eigen::Index>(j)] = a[static_cast<Eigen::Index>(base | offsets[j])];
      transform(block);
      for (std::size_t j = 0; j < offsets.size(); ++j) a[static_cast<Eigen::Index>(base | offsets[j])] = block[static_cast<Eigen::Index>(j)];
    }
  };

  std::visit(Overloaded{
                 [&](const Cnot& g) {
                   Eigen::Matrix2cd x;
                   x << 0, 1, 1, 0;
                   apply_1q(g.target, x, ctrl_mask | bit(g.control), ctrl_value | bit(g.control));
                 },
                 [&](const Diagonal& g) {
                   for (std::uint64_t i = 0; i < dim; ++i) {
                     if ((i & ctrl_mask) != ctrl_value) continue;
                     a[static_cast<Eigen::Index>(i)] *= g.phases[static_cast<Eigen::Index>(gather_index(i, g.qubits))];
                   }
                 },
                 [&](const Qft& g) {
                   const double sign = g.inverse ? -1.0 : 1.0;
                   apply_block(g.qubits, [&](Eigen::VectorXcd& block) { unitary_dft(block, sign); });
                 },
                 [&](const UnitaryMatrix& g) {
                   if (g.qubits.size() == 1) {
                     apply_1q(g.qubits[0], g.matrix, ctrl_mask, ctrl_value);
                     return;
                   }
                   apply_block(g.qubits, [&](Eigen::VectorXcd& block) { block = (g.matrix * block).eval(); });
                 },
                 [&](const Controlled& g) {
                   std::uint64_t m = ctrl_mask, v = ctrl_value;
                   for (std::size_t k = 0; k < g.controls.size(); ++k) {
                     m |= bit(g.controls[k]);
                     if (g.values[k]) v |= bit(g.controls[k]);
                   }
                   for (const auto& inner : g.body->gates()) apply_controlled(inner, m, v);
                 },
                 [&](const auto&) { apply_1q(gate_qubits(gate)[0], single_qubit_matrix(gate), ctrl_mask, ctrl_value); },
             },
             gate);
}

Statevector apply(Statevector state, const Gate& gate) {
  state.apply(gate);
  return state;
}

Statevector run(const Circuit& circuit, Statevector state) {
  state.apply(circuit);
  return state;
}

Statevector simulate(const Circuit& circuit) {
  return run(circuit, Statevector::zero_state(circuit.n_qubits()));
}

Eigen::MatrixXcd circuit_unitary(const Circuit& circuit) {
  const Eigen::Index d = Eigen::Index{1} << circuit.n_qubits();
  Eigen::MatrixXcd u(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d);
    e[c] = 1.0;
    u.col(c) = run(circuit, Statevector::from_amplitudes(std::move(e))).amplitudes();
  }
  return u;
}

Complex inner_product(const Statevector& a, const Statevector& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("inner_product: register size mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

Eigen::VectorXd marginal_probabilities(const Statevector& state, const std::vector<int>& qubits) {
  validate_gate(Qft{qubits, false}, state.n_qubits());
  Eigen::VectorXd p = Eigen::VectorXd::Zero(Eigen::Index{1} << qubits.size());
  const auto& a = state.amplitudes();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    p[static_cast<Eigen::Index>(gather_index(static_cast<std::uint64_t>(i), qubits))] += std::norm(a[i]);
  }
  return p;
}

Projection project(const Statevector& state, const std::vector<int>& qubits, std::uint64_t outcome) {
  validate_gate(Qft{qubits, false}, state.n_qubits());
  if (outcome >= (std::uint64_t{1} << qubits.size())) throw InvalidArgument("project: outcome out of range");
  Eigen::VectorXcd amps = state.amplitudes();
  double prob = 0.0;
  for (Eigen::Index i = 0; i < amps.size(); ++i) {
    if (gather_index(static_cast<std::uint64_t>(i), qubits) != outcome) {
      amps[i] = 0.0;
    } else {
      prob += std::norm(amps[i]);
    }
  }
  if (prob <= 0.0) throw ImpossibleOutcome("project: outcome " + outcome_bits(outcome, qubits.size()) + " has zero probability");
  amps /= std::sqrt(prob);
  return {Statevector::from_amplitudes(std::move(amps)), prob};
}

Eigen::VectorXcd branch_amplitudes(const Statevector& state, const std::vector<int>& keep,
                                   const std::vector<int>& traced, std::uint64_t outcome) {
  if (keep.size() + traced.size() != static_cast<std::size_t>(state.n_qubits())) {
    throw InvalidArgument("branch_amplitudes: keep + traced must cover the register");
  }
  const auto keep_offsets = local_offsets(keep);
  const auto traced_offsets = local_offsets(traced);
  const std::uint64_t base = traced_offsets.at(outcome);
  Eigen::VectorXcd out(static_cast<Eigen::Index>(keep_offsets.size()));
  for (std::size_t j = 0; j < keep_offsets.size(); ++j) {
    out[static_cast<Eigen::Index>(j)] = state[static_cast<Eigen::Index>(base | keep_offsets[j])];
  }
  return out;
}

std::string outcome_bits(std::uint64_t outcome, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t b = 0; b < width; ++b) {
    if ((outcome >> b) & 1U) s[width - 1 - b] = '1';
  }
  return s;
}

ShotResult sample(const Statevector& state, const std::vector<int>& qubits, std::uint64_t shots, Rng& rng,
                  SamplingOptions options) {
  if (shots < 1) throw InvalidArgument("sample: shots must be >= 1");
  if (options.readout_flip < 0.0 || options.readout_flip > 1.0) throw InvalidArgument("sample: flip probability outside [0,1]");
  const Eigen::VectorXd p = marginal_probabilities(state, qubits);
  std::vector<double> cdf(static_cast<std::size_t>(p.size()));
  double acc = 0.0;
  for (Eigen::Index j = 0; j < p.size(); ++j) cdf[static_cast<std::size_t>(j)] = (acc += p[j]);
  // Last outcome with nonzero mass absorbs rounding at the top of the CDF.
  std::size_t last = cdf.size() - 1;
  while (last > 0 && p[static_cast<Eigen::Index>(last)] == 0.0) --last;

  std::vector<std::uint64_t> tally(cdf.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * acc;
    auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    idx = std::min(idx, last);
    if (options.readout_flip > 0.0) {
      for (std::size_t b = 0; b < qubits.size(); ++b) {
        if (rng.uniform() < options.readout_flip) idx ^= std::size_t{1} << b;
      }
    }
    ++tally[idx];
  }
  ShotResult result;
  result.shots = shots;
  for (std::size_t j = 0; j < tally.size(); ++j) {
    if (tally[j]) result.counts[outcome_bits(j, qubits.size())] = tally[j];
  }
  return result;
}

}  // namespace qhdc::sim
