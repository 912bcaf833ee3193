#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qhdc/hdc.hpp"
#include "qhdc/ops.hpp"
#include "qhdc/tasks/dataset.hpp"
#include "qhdc/tasks/metrics.hpp"

namespace qhdc::tasks {

inline constexpr std::array<int, 2> kClasses{3, 6};

enum class TrainMode { Classical, Hybrid };
enum class InferMode { Classical, QuantumExact, QuantumSampled };

std::string to_string(TrainMode m);
std::string to_string(InferMode m);
InferMode parse_infer_mode(const std::string& s);

struct ClassifierConfig {
  hdc::Index dim = 10000;
  std::uint64_t seed = 7;
  /// Negative selects the mode default: 3 for classical, 0 for hybrid.
  int retrain_epochs = -1;
  TrainMode mode = TrainMode::Classical;

  int resolved_epochs() const { return retrain_epochs >= 0 ? retrain_epochs : (mode == TrainMode::Classical ? 3 : 0); }
};

struct ClassifierModel {
  hdc::Index dim = 0;
  int n_qubits = 0;  // log2(dim), 0 when dim is not a power of two
  hdc::Codebook levels;  // "level0", "level1"
  std::array<hdc::BundleVector, 2> prototypes;  // order of kClasses
  std::vector<ops::PhaseOracle> rms_oracles;    // hybrid only
  int retrain_epochs = 0;
  std::vector<std::size_t> retrain_errors;      // misclassifications per epoch
  std::uint64_t seed = 0;
  TrainMode mode = TrainMode::Classical;
};

/// Level codebook drawn from `seed` with names level0, level1.
hdc::Codebook level_codebook(std::uint64_t seed, hdc::Index dim);

/// sum_p permute(level[bit_p], p).
hdc::BundleVector encode_sample(const FeatureSample& s, const hdc::Codebook& levels);

/// prepare_state(level[bit]) followed by the permutation circuit for shift `pixel`.
ops::StatePrep feature_circuit(const hdc::Codebook& levels, int bit, int pixel);

/// Bipolar vector carried by a feature state: round(sqrt(D) * Re psi_i).
/// Throws InvalidArgument if the state is not a bipolar phase state within 1e-9.
hdc::BipolarHypervector decode_feature_state(const Eigen::VectorXcd& psi);

/// Hybrid encoding: each of the 32 (pixel, level) feature circuits is simulated
/// once and decoded, then the decoded vectors are summed classically.
class HybridEncoder {
 public:
  explicit HybridEncoder(const hdc::Codebook& levels);
  hdc::BundleVector encode(const FeatureSample& s) const;
  const hdc::BipolarHypervector& feature(int bit, int pixel) const;

 private:
  std::vector<hdc::BipolarHypervector> features_;  // index 2 * pixel + bit
};

/// Throws InvalidArgument for a single-class set, DegenerateVector for an all-zero prototype.
ClassifierModel train(std::span<const FeatureSample> data, const ClassifierConfig& cfg);

/// Recomputes rms_oracles from the prototypes.
void attach_rms_oracles(ClassifierModel& model);

struct Prediction {
  int label;
  double score;        // sim(class 3) - sim(class 6)
  double max_std_error = 0.0;
};

/// Sampled mode uses `rng` for shot noise; required then.
Prediction infer(const ClassifierModel& model, const FeatureSample& s, InferMode mode, std::uint64_t shots = 0,
                 Rng* rng = nullptr);

struct CvConfig {
  ClassifierConfig model;
  InferMode infer = InferMode::Classical;
  std::uint64_t shots = 10000;
  int folds = 5;
  std::size_t train_size = 100;
  std::size_t test_size = 50;
  unsigned workers = 1;
};

struct FoldSplit {
  std::vector<std::size_t> train, test;
};

/// Stratified folds by class; fold f tests on a stratified draw of `test_size`
/// from fold f and trains on `train_size` drawn from the other folds.
/// Throws InvalidArgument when a fold lacks a class or the pools are too small.
std::vector<FoldSplit> stratified_splits(std::span<const FeatureSample> data, int folds, std::size_t train_size,
                                         std::size_t test_size, std::uint64_t seed);

/// Raw fold assignment (index -> fold) used by stratified_splits.
std::vector<int> fold_assignment(std::span<const FeatureSample> data, int folds, std::uint64_t seed);

struct EvalReport {
  InferMode mode = InferMode::Classical;
  Confusion confusion{};
  std::vector<double> fold_f1;
  double f1_mean = 0.0;
  double f1_std = 0.0;
  double auc = 0.0;
  std::vector<double> fold_seconds;
  double max_std_error = 0.0;  // sampled mode only
  std::size_t n_test = 0;
};

/// Quantum inference modes train in hybrid mode regardless of cfg.model.mode.
/// Fold f's sampled inferences draw from stream (seed, f, sample), so any worker
/// count gives the same report.
EvalReport cross_validate(std::span<const FeatureSample> data, const CvConfig& cfg);

struct SweepRow {
  hdc::Index dim;
  double f1;
  std::uint64_t hadamard_depth;
  std::uint64_t hadamard_cnots;
};

/// Fixed split (fold 0 of stratified_splits), hybrid training, quantum-exact inference.
std::vector<SweepRow> dimensionality_sweep(std::span<const FeatureSample> data, std::span<const hdc::Index> dims,
                                           std::uint64_t seed, std::size_t train_size = 100,
                                           std::size_t test_size = 50);

}  // namespace qhdc::tasks
