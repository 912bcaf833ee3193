#include "qhdc/tasks/classifier.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "qhdc/error.hpp"
#include "qhdc/synth.hpp"

namespace qhdc::tasks {

namespace {

constexpr int kPixels = 16;

std::size_t class_index(int label) {
  if (label == kClasses[0]) return 0;
  if (label == kClasses[1]) return 1;
  throw InvalidArgument("label " + std::to_string(label) + " is not one of the two classes");
}

int log2_if_pow2(hdc::Index d) {
  if (d < 2 || (d & (d - 1)) != 0) return 0;
  int n = 0;
  while ((hdc::Index{1} << n) < d) ++n;
  return n;
}

// Stratified draw of `size` items from `pool`, class counts by largest remainder.
std::vector<std::size_t> stratified_draw(std::span<const FeatureSample> data, std::vector<std::size_t> pool,
                                         std::size_t size, Rng& rng, const char* what) {
  std::array<std::vector<std::size_t>, 2> by_class;
  for (auto i : pool) by_class[class_index(data[i].label)].push_back(i);
  if (by_class[0].empty() || by_class[1].empty()) {
    throw InvalidArgument(std::string(what) + " pool is missing a class");
  }
  const double total = static_cast<double>(pool.size());
  std::array<std::size_t, 2> take{};
  std::array<double, 2> frac{};
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < 2; ++k) {
    const double exact = static_cast<double>(size) * static_cast<double>(by_class[k].size()) / total;
    take[k] = static_cast<std::size_t>(std::floor(exact));
    frac[k] = exact - static_cast<double>(take[k]);
    assigned += take[k];
  }
  while (assigned < size) {
    const std::size_t k = frac[0] >= frac[1] ? 0 : 1;
    ++take[k];
    frac[k] = -1.0;
    ++assigned;
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < 2; ++k) {
    if (take[k] > by_class[k].size()) {
      throw InvalidArgument(std::string(what) + " pool too small: need " + std::to_string(take[k]) + " of class " +
                            std::to_string(kClasses[k]) + ", have " + std::to_string(by_class[k].size()));
    }
    rng.shuffle(by_class[k].begin(), by_class[k].end());
    out.insert(out.end(), by_class[k].begin(), by_class[k].begin() + static_cast<std::ptrdiff_t>(take[k]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct FoldResult {
  std::vector<int> truth, predicted;
  std::vector<double> scores;
  double seconds = 0.0;
  double max_std_error = 0.0;
};

}  // namespace

std::string to_string(TrainMode m) { return m == TrainMode::Classical ? "classical" : "hybrid"; }

std::string to_string(InferMode m) {
  switch (m) {
    case InferMode::Classical:
      return "classical";
    case InferMode::QuantumExact:
      return "quantum-exact";
    default:
      return "quantum-sampled";
  }
}

InferMode parse_infer_mode(const std::string& s) {
  if (s == "classical") return InferMode::Classical;
  if (s == "quantum-exact") return InferMode::QuantumExact;
  if (s == "quantum-sampled") return InferMode::QuantumSampled;
  throw InvalidArgument("unknown mode '" + s + "'");
}

hdc::Codebook level_codebook(std::uint64_t seed, hdc::Index dim) { return hdc::Codebook(seed, dim, {"level0", "level1"}); }

hdc::BundleVector encode_sample(const FeatureSample& s, const hdc::Codebook& levels) {
  hdc::BundleVector acc = hdc::BundleVector::Zero(levels.dim());
  for (int p = 0; p < kPixels; ++p) {
    acc += hdc::permute(levels.entries()[s.bits[static_cast<std::size_t>(p)]].components(), p);
  }
  return acc;
}

ops::StatePrep feature_circuit(const hdc::Codebook& levels, int bit, int pixel) {
  const auto& level = levels.entries().at(static_cast<std::size_t>(bit));
  return ops::permute_circuit(ops::prepare_state(ops::oracle_from_bipolar(level)), pixel);
}

hdc::BipolarHypervector decode_feature_state(const Eigen::VectorXcd& psi) {
  const double s = std::sqrt(static_cast<double>(psi.size()));
  Eigen::VectorXi v(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    const ops::Complex x = psi[i] * s;
    const int b = x.real() >= 0 ? 1 : -1;
    if (std::abs(x - static_cast<double>(b)) > 1e-9) {
      throw InvalidArgument("decode: amplitude " + std::to_string(i) + " is not +-1/sqrt(D)");
    }
    v[i] = b;
  }
  return hdc::BipolarHypervector(std::move(v));
}

HybridEncoder::HybridEncoder(const hdc::Codebook& levels) {
  features_.reserve(2 * kPixels);
  for (int p = 0; p < kPixels; ++p) {
    for (int b = 0; b < 2; ++b) features_.push_back(decode_feature_state(ops::prepared_state(feature_circuit(levels, b, p))));
  }
}

const hdc::BipolarHypervector& HybridEncoder::feature(int bit, int pixel) const {
  return features_.at(static_cast<std::size_t>(2 * pixel + bit));
}

hdc::BundleVector HybridEncoder::encode(const FeatureSample& s) const {
  hdc::BundleVector acc = hdc::BundleVector::Zero(features_.front().dim());
  for (int p = 0; p < kPixels; ++p) acc += feature(s.bits[static_cast<std::size_t>(p)], p).components();
  return acc;
}

ClassifierModel train(std::span<const FeatureSample> data, const ClassifierConfig& cfg) {
  std::array<std::size_t, 2> counts{};
  for (const auto& s : data) ++counts[class_index(s.label)];
  if (counts[0] == 0 || counts[1] == 0) throw InvalidArgument("train: both classes must be present");

  ClassifierModel m{cfg.dim, log2_if_pow2(cfg.dim), level_codebook(cfg.seed, cfg.dim), {}, {}, 0, {}, cfg.seed, cfg.mode};
  if (cfg.mode == TrainMode::Hybrid && m.n_qubits == 0) {
    throw InvalidDimension("hybrid training needs a power-of-two dimension");
  }

  std::vector<hdc::LabeledVector> enc;
  enc.reserve(data.size());
  if (cfg.mode == TrainMode::Hybrid) {
    const HybridEncoder encoder(m.levels);
    for (const auto& s : data) enc.push_back({encoder.encode(s), class_index(s.label)});
  } else {
    for (const auto& s : data) enc.push_back({encode_sample(s, m.levels), class_index(s.label)});
  }

  std::vector<hdc::BundleVector> protos(2, hdc::BundleVector::Zero(cfg.dim));
  for (const auto& e : enc) protos[e.label] += e.vector;
  m.retrain_epochs = cfg.resolved_epochs();
  for (int e = 0; e < m.retrain_epochs; ++e) {
    auto r = hdc::retrain_epoch(std::move(protos), enc);
    protos = std::move(r.prototypes);
    m.retrain_errors.push_back(r.misclassified);
  }
  for (std::size_t k = 0; k < 2; ++k) {
    if (protos[k].isZero()) throw DegenerateVector("prototype of class " + std::to_string(kClasses[k]) + " is all zero");
    m.prototypes[k] = std::move(protos[k]);
  }
  if (cfg.mode == TrainMode::Hybrid) attach_rms_oracles(m);
  return m;
}

void attach_rms_oracles(ClassifierModel& model) {
  model.rms_oracles.clear();
  for (const auto& p : model.prototypes) model.rms_oracles.push_back(ops::rms_phase_encode(p));
}

Prediction infer(const ClassifierModel& model, const FeatureSample& s, InferMode mode, std::uint64_t shots, Rng* rng) {
  const hdc::BundleVector q = encode_sample(s, model.levels);
  std::array<double, 2> sim{};
  double max_se = 0.0;
  if (mode == InferMode::Classical) {
    for (std::size_t k = 0; k < 2; ++k) sim[k] = hdc::cosine(model.prototypes[k], q);
  } else {
    if (model.rms_oracles.size() != 2) throw InvalidArgument("infer: model has no phase oracles");
    const auto query = ops::prepare_state(ops::rms_phase_encode(q));
    ops::ShotConfig sc;
    if (mode == InferMode::QuantumSampled) {
      if (shots == 0 || !rng) throw InvalidArgument("infer: sampled mode needs shots and an rng");
      sc.shots = shots;
      sc.rng = rng;
    }
    for (std::size_t k = 0; k < 2; ++k) {
      const auto est = ops::hadamard_test(query, ops::prepare_state(model.rms_oracles[k]), sc);
      sim[k] = est.value;
      max_se = std::max(max_se, est.std_error);
    }
  }
  return {sim[0] >= sim[1] ? kClasses[0] : kClasses[1], sim[0] - sim[1], max_se};
}

std::vector<int> fold_assignment(std::span<const FeatureSample> data, int folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("need at least two folds");
  std::vector<int> fold(data.size(), 0);
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (class_index(data[i].label) == k) idx.push_back(i);
    }
    Rng rng(derive_seed(seed, 0xF0D0 + k));
    rng.shuffle(idx.begin(), idx.end());
    for (std::size_t j = 0; j < idx.size(); ++j) fold[idx[j]] = static_cast<int>(j % static_cast<std::size_t>(folds));
  }
  return fold;
}

std::vector<FoldSplit> stratified_splits(std::span<const FeatureSample> data, int folds, std::size_t train_size,
                                         std::size_t test_size, std::uint64_t seed) {
  const auto fold = fold_assignment(data, folds, seed);
  std::vector<FoldSplit> out;
  for (int f = 0; f < folds; ++f) {
    std::vector<std::size_t> in, rest;
    for (std::size_t i = 0; i < data.size(); ++i) (fold[i] == f ? in : rest).push_back(i);
    Rng rng(derive_seed(seed, 0x5EED00 + static_cast<std::uint64_t>(f)));
    FoldSplit s;
    s.test = stratified_draw(data, in, test_size, rng, ("fold " + std::to_string(f) + " test").c_str());
    s.train = stratified_draw(data, rest, train_size, rng, ("fold " + std::to_string(f) + " train").c_str());
    out.push_back(std::move(s));
  }
  return out;
}

EvalReport cross_validate(std::span<const FeatureSample> data, const CvConfig& cfg) {
  const auto splits = stratified_splits(data, cfg.folds, cfg.train_size, cfg.test_size, cfg.model.seed);
  ClassifierConfig mcfg = cfg.model;
  if (cfg.infer != InferMode::Classical) mcfg.mode = TrainMode::Hybrid;

  std::vector<FoldResult> results(splits.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t f = next++; f < splits.size(); f = next++) {
      const auto t0 = std::chrono::steady_clock::now();
      std::vector<FeatureSample> train_set;
      for (auto i : splits[f].train) train_set.push_back(data[i]);
      const auto model = train(train_set, mcfg);
      FoldResult r;
      for (std::size_t j = 0; j < splits[f].test.size(); ++j) {
        const auto& s = data[splits[f].test[j]];
        Rng rng(derive_seed(derive_seed(cfg.model.seed, 0xFA11 + f), j));
        const auto p = infer(model, s, cfg.infer, cfg.shots, &rng);
        r.truth.push_back(s.label);
        r.predicted.push_back(p.label);
        r.scores.push_back(p.score);
        r.max_std_error = std::max(r.max_std_error, p.max_std_error);
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      results[f] = std::move(r);
    }
  };
  const unsigned n_workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(splits.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  EvalReport rep;
  rep.mode = cfg.infer;
  std::vector<int> truth;
  std::vector<double> scores;
  for (const auto& r : results) {
    const auto c = confusion_matrix(r.truth, r.predicted, kClasses);
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) rep.confusion[a][b] += c[a][b];
    }
    rep.fold_f1.push_back(weighted_f1(c));
    rep.fold_seconds.push_back(r.seconds);
    rep.max_std_error = std::max(rep.max_std_error, r.max_std_error);
    truth.insert(truth.end(), r.truth.begin(), r.truth.end());
    scores.insert(scores.end(), r.scores.begin(), r.scores.end());
  }
  rep.f1_mean = mean(rep.fold_f1);
  rep.f1_std = stddev(rep.fold_f1);
  rep.auc = roc_auc(scores, truth, kClasses[0]);
  rep.n_test = truth.size();
  return rep;
}

std::vector<SweepRow> dimensionality_sweep(std::span<const FeatureSample> data, std::span<const hdc::Index> dims,
                                           std::uint64_t seed, std::size_t train_size, std::size_t test_size) {
  const auto split = stratified_splits(data, 5, train_size, test_size, seed).front();
  std::vector<FeatureSample> train_set, test_set;
  for (auto i : split.train) train_set.push_back(data[i]);
  for (auto i : split.test) test_set.push_back(data[i]);

  std::vector<SweepRow> rows;
  for (auto d : dims) {
    ClassifierConfig cfg;
    cfg.dim = d;
    cfg.seed = seed;
    cfg.mode = TrainMode::Hybrid;
    const auto model = train(train_set, cfg);
    std::vector<int> truth, pred;
    for (const auto& s : test_set) {
      truth.push_back(s.label);
      pred.push_back(infer(model, s, InferMode::QuantumExact).label);
    }
    const auto query = ops::prepare_state(ops::rms_phase_encode(encode_sample(test_set.front(), model.levels)));
    const auto report =
        synth::resources(ops::hadamard_test_circuit(query, ops::prepare_state(model.rms_oracles.front())));
    rows.push_back({d, weighted_f1(confusion_matrix(truth, pred, kClasses)), report.depth, report.cnot_count});
  }
  return rows;
}

}  // namespace qhdc::tasks
