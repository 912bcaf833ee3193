#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qhdc/ops.hpp"
#include "qhdc/synth.hpp"

namespace qhdc::tasks {

enum class ResourceMode { Flat, Probabilistic };
std::string to_string(ResourceMode m);

struct ResourceConfig {
  std::size_t samples = 27;
  std::size_t features = 16;
  int rounds = 15;  // probabilistic mode
  std::uint64_t seed = 7;
  std::uint64_t infeasible_depth = 1'000'000;
};

/// Feature circuits of `samples` random 16-bit samples at D = 2^n, in sample-major order.
std::vector<ops::StatePrep> prototype_feature_circuits(int n_qubits, const ResourceConfig& cfg);

struct ScalingRow {
  int n_qubits;
  ResourceMode mode;
  int rounds;  // 0 for flat (one LCU pass, no amplification)
  synth::ResourceReport report;
  bool infeasible;
};

/// Flat: the single LCU operator over all feature circuits of one class, counted
/// without simulation. Probabilistic: the realized round sequence.
ScalingRow prototype_resources(int n_qubits, ResourceMode mode, const ResourceConfig& cfg = {});

}  // namespace qhdc::tasks
