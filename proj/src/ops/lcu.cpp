#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qhdc/error.hpp"
#include "qhdc/ops.hpp"

namespace qhdc::ops {

namespace {

std::vector<double> normalized_weights(std::span<const double> weights, std::size_t k) {
  if (weights.empty()) return std::vector<double>(k, 1.0 / static_cast<double>(k));
  if (weights.size() != k) throw InvalidArgument("lcu: weight count does not match unitary count");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidArgument("lcu: weights must be finite and non-negative");
    total += w;
  }
  if (total <= 0.0) throw InvalidArgument("lcu: weights sum to zero");
  std::vector<double> out(weights.begin(), weights.end());
  for (double& w : out) w /= total;
  return out;
}

// Unitary preps over a common system register; heralded ones are materialized.
std::vector<StatePrep> unitary_preps(std::vector<StatePrep> preps) {
  if (preps.empty()) throw InvalidArgument("lcu: no unitaries");
  const int n = preps.front().n_system;
  for (auto& p : preps) {
    if (p.n_system != n) throw InvalidDimension("lcu: unitaries act on different register sizes");
    if (p.heralded()) p = heralded_prep(p);
    if (p.n_qubits() != n) throw InvalidArgument("lcu: unitary has qubits outside the system register");
  }
  return preps;
}

std::vector<int> bits_of(std::size_t k, int m) {
  std::vector<int> v(static_cast<std::size_t>(m));
  for (int b = 0; b < m; ++b) v[static_cast<std::size_t>(b)] = static_cast<int>((k >> b) & 1U);
  return v;
}

// Ancilla-zero branch of a simulated register; an empty ancilla list is the whole state.
Eigen::VectorXcd zero_branch(const sim::Statevector& s, const std::vector<int>& system,
                             const std::vector<int>& ancillas) {
  if (ancillas.empty()) return s.amplitudes();
  return sim::branch_amplitudes(s, system, ancillas, 0);
}

}  // namespace

std::vector<int> LcuBundlePlan::system_qubits() const { return sim::qubit_range(0, n_system); }
std::vector<int> LcuBundlePlan::ancilla_qubits() const { return sim::qubit_range(n_system, m); }

int ancilla_count(std::size_t k) {
  if (k == 0) throw InvalidArgument("ancilla_count: K must be positive");
  int m = 0;
  while ((std::size_t{1} << m) < k) ++m;
  return m;
}

Circuit weight_state_prep(std::span<const double> weights, int m) {
  if (m < 1) throw InvalidArgument("weight_state_prep: need at least one qubit");
  const std::size_t dim = std::size_t{1} << m;
  if (weights.size() > dim) throw InvalidArgument("weight_state_prep: more weights than basis states");
  std::vector<double> w(dim, 0.0);
  std::copy(weights.begin(), weights.end(), w.begin());

  // mass[j >> l] over the subtree below level l
  auto mass = [&](int l, std::size_t node) {
    double s = 0.0;
    for (std::size_t j = node << l; j < ((node + 1) << l); ++j) s += w[j];
    return s;
  };

  Circuit c(m);
  for (int l = m - 1; l >= 0; --l) {
    const std::size_t prefixes = std::size_t{1} << (m - 1 - l);
    for (std::size_t p = 0; p < prefixes; ++p) {
      const double n0 = mass(l, 2 * p), n1 = mass(l, 2 * p + 1);
      if (n0 + n1 <= 0.0 || n1 <= 0.0) continue;
      const double theta = 2.0 * std::atan2(std::sqrt(n1), std::sqrt(n0));
      if (l == m - 1) {
        c.append(sim::Ry{l, theta});
        continue;
      }
      Circuit body(m);
      body.append(sim::Ry{l, theta});
      std::vector<int> controls = sim::qubit_range(l + 1, m - 1 - l);
      c.append(sim::controlled(std::move(body), std::move(controls), bits_of(p, m - 1 - l)));
    }
  }
  return c;
}

LcuBundlePlan lcu_prepare(std::vector<StatePrep> unitaries, std::vector<double> weights, LcuOptions options) {
  LcuBundlePlan plan;
  plan.unitaries = unitary_preps(std::move(unitaries));
  plan.weights = normalized_weights(weights, plan.unitaries.size());
  plan.n_system = plan.unitaries.front().n_system;
  plan.m = ancilla_count(plan.unitaries.size());
  plan.max_rounds = options.max_rounds;
  plan.success_threshold = options.success_threshold;
  const int width = plan.n_system + plan.m;
  if (width > options.max_qubits) {
    throw ResourceLimit("lcu: " + std::to_string(width) + " qubits exceeds cap of " +
                        std::to_string(options.max_qubits));
  }

  if (plan.m == 0) {
    plan.prep_unitary = Eigen::MatrixXcd::Identity(1, 1);
    plan.a = plan.unitaries.front().circuit;
    plan.alpha = 1.0;
    plan.rounds = 0;
    return plan;
  }

  plan.prep_circuit = weight_state_prep(plan.weights, plan.m);
  plan.prep_unitary = sim::circuit_unitary(plan.prep_circuit);
  plan.a = lcu_circuit(plan.unitaries, plan.weights);
  const auto anc = plan.ancilla_qubits();

  const auto state = sim::run(plan.a, sim::Statevector::zero_state(width, options.max_qubits));
  plan.alpha = std::min(1.0, zero_branch(state, plan.system_qubits(), anc).norm());
  plan.rounds = estimate_rounds(plan.alpha, plan.max_rounds, plan.success_threshold);
  return plan;
}

Circuit lcu_circuit(std::span<const StatePrep> unitaries_in, std::span<const double> weights_in) {
  const auto unitaries = unitary_preps(std::vector<StatePrep>(unitaries_in.begin(), unitaries_in.end()));
  const auto weights = normalized_weights(weights_in, unitaries.size());
  const int n = unitaries.front().n_system;
  const int m = ancilla_count(unitaries.size());
  if (m == 0) return unitaries.front().circuit;

  const int width = n + m;
  const auto anc = sim::qubit_range(n, m);
  const Circuit prep = weight_state_prep(weights, m);
  Circuit a(width);
  for (int q : anc) a.set_role(q, sim::QubitRole::Ancilla);
  a.append(prep, anc);
  for (std::size_t k = 0; k < unitaries.size(); ++k) {
    if (weights[k] == 0.0) continue;
    Circuit body(width);
    body.append(unitaries[k].circuit);
    a.append(sim::controlled(std::move(body), anc, bits_of(k, m)));
  }
  a.append(prep.inverse(), anc);
  return a;
}

double predicted_success(double alpha, int rounds) {
  const double theta = std::asin(std::clamp(alpha, 0.0, 1.0));
  const double s = std::sin((2.0 * rounds + 1.0) * theta);
  return s * s;
}

// Extra rounds must buy at least this much success probability; near-flat
// windows (alpha close to 1/sqrt 2) otherwise pick deeper circuits on rounding noise.
constexpr double kRoundGain = 1e-4;

int estimate_rounds(double alpha, int max_rounds, double success_threshold) {
  if (!(alpha >= 0.0 && alpha <= 1.0 + 1e-12)) throw InvalidArgument("estimate_rounds: alpha outside [0, 1]");
  if (alpha == 0.0) return 0;  // nothing to amplify; caller reports cancellation
  if (alpha >= 1.0 || alpha * alpha >= success_threshold) return 0;
  const double theta = std::asin(alpha);
  const int r_est = static_cast<int>(std::floor(std::numbers::pi / (4.0 * theta) - 0.5));
  const int lo = std::max(0, r_est - 2);
  const int hi = std::min(r_est + 2, max_rounds);
  if (lo > hi) return std::max(0, max_rounds);

  for (int r = lo; r <= hi; ++r) {
    if (predicted_success(alpha, r) >= success_threshold - 1e-12) return r;
  }
  int best = lo;
  double best_p = predicted_success(alpha, lo);
  for (int r = lo + 1; r <= hi; ++r) {
    const double p = predicted_success(alpha, r);
    if (p > best_p + kRoundGain) {
      best = r;
      best_p = p;
    }
  }
  return best;
}

Circuit oaa_circuit(const LcuBundlePlan& plan, int rounds, OaaFaults faults) {
  if (rounds < 0) throw InvalidArgument("oaa: negative round count");
  Circuit c = plan.a;
  if (plan.m == 0 || rounds == 0) return c;

  const int width = plan.n_system + plan.m;
  const auto anc = plan.ancilla_qubits();
  Eigen::VectorXcd s_psi = Eigen::VectorXcd::Ones(Eigen::Index{1} << plan.m);
  s_psi[0] = -1.0;
  // -S0 = diag(1, -1, -1, ...); with the fault S0 is identity and this is -I
  Eigen::VectorXcd neg_s0 = -Eigen::VectorXcd::Ones(Eigen::Index{1} << width);
  if (!faults.zero_reflection_disabled) neg_s0[0] = 1.0;
  const Circuit a_dag = plan.a.inverse();

  for (int r = 0; r < rounds; ++r) {
    c.append(sim::Diagonal{anc, s_psi});
    c.append(a_dag);
    c.append(sim::Diagonal{sim::qubit_range(0, width), neg_s0});
    c.append(plan.a);
  }
  return c;
}

AmplifiedState oaa_amplify(const LcuBundlePlan& plan, OaaFaults faults) {
  const Circuit c = oaa_circuit(plan, plan.rounds, faults);
  auto state = sim::run(c, sim::Statevector::zero_state(c.n_qubits(), std::max(c.n_qubits(), sim::default_max_qubits())));
  const double p = zero_branch(state, plan.system_qubits(), plan.ancilla_qubits()).squaredNorm();
  return AmplifiedState{std::move(state), p};
}

BundleResult bundle_states(std::vector<StatePrep> preps, std::vector<double> weights, LcuOptions options,
                           OaaFaults faults) {
  const std::size_t k = preps.size();
  const auto plan = lcu_prepare(std::move(preps), std::move(weights), options);
  if (plan.alpha < 1e-12) throw CancellationError("bundle: superposed states cancel (alpha = 0)");

  Circuit c = oaa_circuit(plan, plan.rounds, faults);
  const auto state = sim::run(c, sim::Statevector::zero_state(c.n_qubits(), options.max_qubits));
  Eigen::VectorXcd branch = zero_branch(state, plan.system_qubits(), plan.ancilla_qubits());
  const double p = branch.squaredNorm();
  if (p < 1e-24) throw ImpossibleOutcome("bundle: heralded branch vanished after amplification");

  BundleResult out{StatePrep{std::move(c), plan.n_system, plan.ancilla_qubits()}, {}};
  out.system_state = branch / std::sqrt(p);
  out.alpha = plan.alpha;
  out.rounds = plan.rounds;
  out.success_probability = p;
  out.m = plan.m;
  out.k = k;
  return out;
}

Eigen::VectorXcd analytic_bundle(std::span<const StatePrep> preps, std::span<const double> weights) {
  if (preps.empty()) throw InvalidArgument("analytic_bundle: no states");
  const auto w = normalized_weights(weights, preps.size());
  Eigen::VectorXcd sum = w[0] * prepared_state(preps[0]);
  for (std::size_t k = 1; k < preps.size(); ++k) {
    const Eigen::VectorXcd psi = prepared_state(preps[k]);
    if (psi.size() != sum.size()) throw InvalidDimension("analytic_bundle: dimension mismatch");
    sum += w[k] * psi;
  }
  const double norm = sum.norm();
  if (norm < 1e-12) throw CancellationError("analytic_bundle: states cancel");
  return sum / norm;
}

ProbabilisticLcuResult probabilistic_lcu(std::span<const StatePrep> unitaries, std::span<const double> weights,
                                         int rounds, Rng& rng) {
  if (rounds < 0) throw InvalidArgument("probabilistic_lcu: negative round count");
  const auto us = unitary_preps(std::vector<StatePrep>(unitaries.begin(), unitaries.end()));
  const auto w = normalized_weights(weights, us.size());
  const int n = us.front().n_system;
  const int anc = n;

  ProbabilisticLcuResult out{sim::Statevector::zero_state(n + 1), Circuit(n + 1), {}, {}, 1};
  out.circuit.set_role(anc, sim::QubitRole::Ancilla);
  for (int r = 0; r < rounds; ++r) {
    const double u = rng.uniform();
    std::size_t k = 0;
    double cum = w[0];
    while (k + 1 < w.size() && u >= cum) cum += w[++k];

    Circuit round(n + 1);
    round.append(sim::Hadamard{anc});
    Circuit body(n + 1);
    body.append(us[k].circuit);
    round.append(sim::controlled(std::move(body), {anc}, {out.control_value}));
    round.append(sim::Hadamard{anc});

    out.final_state.apply(round);
    out.circuit.append(round);
    out.selected.push_back(k);
    out.ancilla_p0.push_back(sim::marginal_probabilities(out.final_state, {anc})[0]);
  }
  return out;
}

}  // namespace qhdc::ops
