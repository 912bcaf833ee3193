#include "selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "qhdc/hdc.hpp"
#include "qhdc/ops.hpp"
#include "qhdc/synth.hpp"
#include "qhdc/tasks/reasoning.hpp"

namespace qhdc::cli {

namespace {

using ops::StatePrep;

struct Check {
  std::string name;
  std::function<std::string()> run;  // empty string on success
};

// Largest |a - e^{i phi} b| with the phase taken from the largest entry of b.
double phase_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double phase) {
  return (a - std::polar(1.0, phase) * b).cwiseAbs().maxCoeff();
}

std::string grover_law(bool fault) {
  const int n = 4;
  Rng rng(11);
  const auto v = hdc::random_hypervector(1 << n, rng);
  const auto psi = ops::prepare_state(ops::oracle_from_bipolar(v));
  const auto neg = ops::prepare_state(ops::oracle_from_bipolar(-v));
  for (double alpha : {0.11, 0.3}) {
    auto plan = ops::lcu_prepare({psi, neg}, {(1 + alpha) / 2, (1 - alpha) / 2});
    for (int r = 0; r <= 4; ++r) {
      plan.rounds = r;
      const double measured = ops::oaa_amplify(plan, {fault}).success_probability;
      const double law = ops::predicted_success(alpha, r);
      if (std::abs(measured - law) > 1e-6) {
        return "alpha=" + std::to_string(alpha) + " r=" + std::to_string(r) + " measured " + std::to_string(measured) +
               " law " + std::to_string(law);
      }
    }
  }
  return {};
}

std::string round_estimate() {
  if (ops::estimate_rounds(0.11) != 6) return "alpha=0.11 gave " + std::to_string(ops::estimate_rounds(0.11));
  if (ops::estimate_rounds(std::sqrt(0.5)) != 0) return "alpha=1/sqrt2 should need no rounds";
  return {};
}

std::string similarity() {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const auto a = hdc::random_hypervector(64, rng), b = hdc::random_hypervector(64, rng);
    const double q = ops::hadamard_test(ops::prepare_state(ops::oracle_from_bipolar(a)),
                                        ops::prepare_state(ops::oracle_from_bipolar(b)))
                         .value;
    if (std::abs(q - hdc::cosine(a, b)) > 1e-10) return "hadamard test differs from cosine";
  }
  return {};
}

std::string permutation() {
  for (int n = 1; n <= 4; ++n) {
    const long d = 1L << n;
    for (long s = 0; s < d; ++s) {
      const auto u = sim::circuit_unitary(ops::permutation_block(n, s));
      for (long j = 0; j < d; ++j) {
        if (std::abs(u((j + s) % d, j) - 1.0) > 1e-10) return "n=" + std::to_string(n) + " s=" + std::to_string(s);
      }
    }
  }
  return {};
}

std::string bundling() {
  Rng rng(3);
  for (int k : {2, 3, 5, 9}) {
    std::vector<StatePrep> preps;
    for (int i = 0; i < k; ++i) preps.push_back(ops::prepare_state(ops::oracle_from_bipolar(hdc::random_hypervector(16, rng))));
    Eigen::VectorXcd ref;
    try {
      ref = ops::analytic_bundle(preps);
    } catch (const CancellationError&) {
      continue;
    }
    const auto res = ops::bundle_states(preps);
    const double fid = std::norm(ref.dot(res.system_state));
    if (fid < 1 - 1e-9) return "K=" + std::to_string(k) + " fidelity " + std::to_string(fid);
  }
  return {};
}

std::string reasoning_equivalence() {
  const auto book = tasks::reasoning_codebook(16, 2);
  const auto c = tasks::reasoning_query_classical(book, tasks::BundleMode::Raw);
  const auto q = tasks::reasoning_query_quantum(book);
  for (std::size_t i = 0; i < c.table.size(); ++i) {
    if (std::abs(c.table[i].similarity - q.table[i].similarity) > 1e-10) return "entity " + c.table[i].entity;
  }
  return {};
}

std::string synthesis() {
  Rng rng(9);
  for (int n = 1; n <= 5; ++n) {
    Eigen::VectorXcd ph(1 << n);
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph[i] = std::polar(1.0, 2 * std::numbers::pi * rng.uniform());
    const auto p = synth::synth_diagonal(ph);
    sim::Circuit src(n);
    src.append(sim::Diagonal{sim::qubit_range(0, n), ph});
    if (phase_distance(sim::circuit_unitary(p.circuit), sim::circuit_unitary(src), p.phase_offset) > 1e-9) {
      return "diagonal n=" + std::to_string(n);
    }
    const auto q = synth::synth_qft(n);
    sim::Circuit qs(n);
    qs.append(sim::Qft{sim::qubit_range(0, n), false});
    if (phase_distance(sim::circuit_unitary(q.circuit), sim::circuit_unitary(qs), 0.0) > 1e-9) return "qft n=" + std::to_string(n);
  }
  sim::Circuit body(3);
  body.append(sim::Hadamard{0});
  body.append(sim::Ry{0, 0.4});
  sim::Circuit src(3);
  src.append(sim::controlled(body, {1, 2}, {1, 0}));
  const auto low = synth::lower(src);
  if (phase_distance(sim::circuit_unitary(low.circuit), sim::circuit_unitary(src), low.phase_offset) > 1e-9) {
    return "controlled block";
  }
  return {};
}

}  // namespace

int run_selftest(const std::string& fault, std::ostream& out) {
  const bool s0 = fault == "s0-sign";
  const std::vector<Check> checks{
      {"grover-law", [&] { return grover_law(s0); }},
      {"round-estimate", round_estimate},
      {"hadamard-test-cosine", similarity},
      {"permutation-oracle", permutation},
      {"bundle-fidelity", bundling},
      {"reasoning-equivalence", reasoning_equivalence},
      {"synthesis", synthesis},
  };
  int failures = 0;
  for (const auto& c : checks) {
    std::string err;
    try {
      err = c.run();
    } catch (const std::exception& e) {
      err = std::string("exception: ") + e.what();
    }
    if (err.empty()) {
      out << "PASS " << c.name << "\n";
    } else {
      out << "FAIL " << c.name << ": " << err << "\n";
      ++failures;
    }
  }
  return failures;
}

}  // namespace qhdc::cli
