#include "qhdc/tasks/resources.hpp"

#include "qhdc/error.hpp"
#include "qhdc/tasks/classifier.hpp"

namespace qhdc::tasks {

std::string to_string(ResourceMode m) { return m == ResourceMode::Flat ? "flat" : "probabilistic"; }

std::vector<ops::StatePrep> prototype_feature_circuits(int n_qubits, const ResourceConfig& cfg) {
  if (n_qubits < 1) throw InvalidArgument("resources: need at least one system qubit");
  const auto levels = level_codebook(cfg.seed, hdc::Index{1} << n_qubits);
  Rng rng(derive_seed(cfg.seed, 0xB175));
  std::vector<ops::StatePrep> out;
  out.reserve(cfg.samples * cfg.features);
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    for (std::size_t p = 0; p < cfg.features; ++p) {
      out.push_back(feature_circuit(levels, rng.coin() ? 1 : 0, static_cast<int>(p)));
    }
  }
  return out;
}

ScalingRow prototype_resources(int n_qubits, ResourceMode mode, const ResourceConfig& cfg) {
  const auto units = prototype_feature_circuits(n_qubits, cfg);
  ScalingRow row{n_qubits, mode, 0, {}, false};
  if (mode == ResourceMode::Flat) {
    row.report = synth::resources(ops::lcu_circuit(units));
  } else {
    Rng rng(derive_seed(cfg.seed, 0x9A0B));
    const auto run = ops::probabilistic_lcu(units, {}, cfg.rounds, rng);
    row.rounds = cfg.rounds;
    row.report = synth::resources(run.circuit);
  }
  row.infeasible = row.report.depth > cfg.infeasible_depth;
  return row;
}

}  // namespace qhdc::tasks
