#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "qhdc/error.hpp"
#include "qhdc/io.hpp"
#include "qhdc/ops.hpp"
#include "qhdc/sim/statevector.hpp"
#include "qhdc/tasks/classifier.hpp"
#include "qhdc/tasks/dataset.hpp"
#include "qhdc/tasks/metrics.hpp"
#include "qhdc/tasks/reasoning.hpp"
#include "qhdc/tasks/resources.hpp"

using namespace qhdc;
using namespace qhdc::tasks;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("qhdc_test_" + std::to_string(::getpid()) + "_" + name);
}

FeatureSample sample_of(std::uint16_t mask, int label) {
  FeatureSample s{{}, label};
  for (std::size_t p = 0; p < 16; ++p) s.bits[p] = (mask >> p) & 1;
  return s;
}

std::vector<FeatureSample> noiseless_features(std::size_t per_class) {
  return preprocess(synthetic_dataset(3, per_class, 0.0), Downscale::Center);
}

}  // namespace

// ---- dataset

TEST(Dataset, IdxRoundTrip) {
  auto ds = synthetic_dataset(1, 5, 0.3);
  const auto img = temp_path("img"), lbl = temp_path("lbl");
  write_idx_images(img, ds.images);
  write_idx_labels(lbl, ds.images);
  const auto back = load_mnist(img, lbl);
  ASSERT_EQ(back.images.size(), 10U);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(back.images[i].label, ds.images[i].label);
    EXPECT_EQ(back.images[i].pixels.rows(), 28);
    EXPECT_LT((back.images[i].pixels - ds.images[i].pixels).cwiseAbs().maxCoeff(), 0.5 / 255.0 + 1e-12);
  }
  fs::remove(img);
  fs::remove(lbl);
}

TEST(Dataset, TruncatedFileNamesLengths) {
  auto ds = synthetic_dataset(1, 2, 0.0);
  const auto img = temp_path("trunc_img"), lbl = temp_path("trunc_lbl");
  write_idx_images(img, ds.images);
  write_idx_labels(lbl, ds.images);
  fs::resize_file(img, 16 + 784 * 3 + 10);
  try {
    load_mnist(img, lbl);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find(std::to_string(16 + 784 * 4)), std::string::npos) << msg;
    EXPECT_NE(msg.find(std::to_string(16 + 784 * 3 + 10)), std::string::npos) << msg;
  }
  fs::remove(img);
  fs::remove(lbl);
}

TEST(Dataset, CountMismatch) {
  auto ds = synthetic_dataset(1, 2, 0.0);
  const auto img = temp_path("mm_img"), lbl = temp_path("mm_lbl");
  write_idx_images(img, ds.images);
  ds.images.pop_back();
  write_idx_labels(lbl, ds.images);
  EXPECT_THROW(load_mnist(img, lbl), FormatError);
  EXPECT_THROW(load_mnist(temp_path("missing"), lbl), IoError);
  fs::remove(img);
  fs::remove(lbl);
}

TEST(Dataset, SyntheticDeterministicAndSized) {
  const auto a = synthetic_dataset(9, 50, 0.2), b = synthetic_dataset(9, 50, 0.2);
  ASSERT_EQ(a.images.size(), 100U);
  for (std::size_t i = 0; i < a.images.size(); ++i) {
    EXPECT_EQ(a.images[i].label, b.images[i].label);
    EXPECT_EQ(a.images[i].pixels, b.images[i].pixels);
  }
}

TEST(Preprocess, UniformImages) {
  for (auto method : {Downscale::Center, Downscale::Mean}) {
    const auto ones = preprocess(Image{Eigen::MatrixXd::Ones(28, 28), 3}, method);
    const auto zeros = preprocess(Image{Eigen::MatrixXd::Zero(28, 28), 3}, method);
    for (std::size_t p = 0; p < 16; ++p) {
      EXPECT_EQ(ones.bits[p], 1);
      EXPECT_EQ(zeros.bits[p], 0);
    }
  }
}

TEST(Preprocess, SingleBlockLightsOneFeature) {
  for (auto method : {Downscale::Center, Downscale::Mean}) {
    Eigen::MatrixXd px = Eigen::MatrixXd::Zero(28, 28);
    px.block<7, 7>(14, 7).setOnes();  // block row 2, column 1
    const auto s = preprocess(Image{px, 6}, method);
    int on = 0;
    for (auto b : s.bits) on += b;
    EXPECT_EQ(on, 1);
    EXPECT_EQ(s.bits[9], 1);
  }
}

TEST(Preprocess, ThresholdInclusive) {
  const auto s = preprocess(Image{Eigen::MatrixXd::Constant(28, 28, 0.5), 3}, Downscale::Mean);
  EXPECT_EQ(s.bits[0], 1);
}

// ---- metrics

TEST(Metrics, WeightedF1HandComputed) {
  // truth 3: 8 samples (6 right), truth 6: 4 samples (3 right)
  Confusion c{{{6, 2}, {1, 3}}};
  const double f1_3 = 2.0 * 6 / (8 + 7), f1_6 = 2.0 * 3 / (4 + 5);
  EXPECT_NEAR(weighted_f1(c), (8 * f1_3 + 4 * f1_6) / 12.0, 1e-15);
  EXPECT_DOUBLE_EQ(weighted_f1(Confusion{{{5, 0}, {0, 5}}}), 1.0);
}

TEST(Metrics, ConfusionOrder) {
  const std::vector<int> t{3, 3, 6, 6, 6}, p{3, 6, 6, 3, 6};
  const auto c = confusion_matrix(t, p, kClasses);
  EXPECT_EQ(c[0][0], 1U);
  EXPECT_EQ(c[0][1], 1U);
  EXPECT_EQ(c[1][0], 1U);
  EXPECT_EQ(c[1][1], 2U);
}

TEST(Metrics, AucMatchesPairwise) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> s;
    std::vector<int> y;
    for (int i = 0; i < 40; ++i) {
      s.push_back(std::round(rng.uniform() * 10) / 10);  // plenty of ties
      y.push_back(rng.coin() ? 3 : 6);
    }
    y[0] = 3;
    y[1] = 6;
    EXPECT_NEAR(roc_auc(s, y, 3), roc_auc_bruteforce(s, y, 3), 1e-12);
  }
}

TEST(Metrics, MeanStd) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(mean(v), 2.5);
  EXPECT_NEAR(stddev(v), std::sqrt(5.0 / 3.0), 1e-15);
}

// ---- encoding and training

TEST(Encode, AllZeroFeatures) {
  const auto levels = level_codebook(5, 64);
  const auto enc = encode_sample(sample_of(0, 3), levels);
  hdc::BundleVector want = hdc::BundleVector::Zero(64);
  for (int p = 0; p < 16; ++p) want += hdc::permute(levels.at("level0").components(), p);
  EXPECT_EQ(enc, want);
}

TEST(Encode, OnePixelDifference) {
  const auto levels = level_codebook(5, 64);
  const auto a = encode_sample(sample_of(0x00F0, 3), levels);
  const auto b = encode_sample(sample_of(0x01F0, 3), levels);  // pixel 8 flipped on
  const hdc::BundleVector diff =
      hdc::permute(levels.at("level1").components(), 8) - hdc::permute(levels.at("level0").components(), 8);
  EXPECT_EQ(hdc::BundleVector(b - a), diff);
}

TEST(Encode, FeatureCircuitsDecodeToShiftedLevels) {
  const auto levels = level_codebook(8, 16);
  for (int bit : {0, 1}) {
    for (int p = 0; p < 16; ++p) {
      const auto psi = ops::prepared_state(feature_circuit(levels, bit, p));
      const auto want = hdc::permute(levels.at(bit ? "level1" : "level0"), p);
      EXPECT_EQ(decode_feature_state(psi), want) << bit << " " << p;
    }
  }
  const HybridEncoder enc(levels);
  const auto s = sample_of(0xA5C3, 6);
  EXPECT_EQ(enc.encode(s), encode_sample(s, levels));
}

TEST(Train, OneSamplePerClass) {
  const std::vector<FeatureSample> data{sample_of(0x00FF, 3), sample_of(0xFF00, 6)};
  ClassifierConfig cfg;
  cfg.dim = 256;
  cfg.retrain_epochs = 0;
  const auto m = train(data, cfg);
  EXPECT_EQ(m.prototypes[0], encode_sample(data[0], m.levels));
  EXPECT_EQ(m.prototypes[1], encode_sample(data[1], m.levels));
}

TEST(Train, SeparableToyNeedsNoCorrection) {
  std::vector<FeatureSample> data;
  for (int k = 0; k < 5; ++k) {
    data.push_back(sample_of(0x00FF, 3));
    data.push_back(sample_of(0xFF00, 6));
  }
  ClassifierConfig cfg;
  cfg.dim = 1024;
  cfg.retrain_epochs = 2;
  const auto m = train(data, cfg);
  ASSERT_FALSE(m.retrain_errors.empty());
  EXPECT_EQ(m.retrain_errors.front(), 0U);
}

TEST(Train, HybridAttachesRmsOracles) {
  const auto data = noiseless_features(10);
  ClassifierConfig cfg;
  cfg.dim = 128;
  cfg.mode = TrainMode::Hybrid;
  const auto m = train(data, cfg);
  ASSERT_EQ(m.rms_oracles.size(), 2U);
  EXPECT_EQ(m.rms_oracles[0].dim(), 128);
  EXPECT_EQ(m.retrain_epochs, 0);
}

TEST(Train, Errors) {
  const std::vector<FeatureSample> one_class{sample_of(1, 3), sample_of(2, 3)};
  EXPECT_THROW(train(one_class, ClassifierConfig{}), InvalidArgument);
}

TEST(Infer, PrototypeQueryAndTieBreak) {
  const std::vector<FeatureSample> data{sample_of(0x00FF, 3), sample_of(0xFF00, 6)};
  ClassifierConfig cfg;
  cfg.dim = 512;
  cfg.retrain_epochs = 0;
  auto m = train(data, cfg);
  const auto p3 = infer(m, data[0], InferMode::Classical);
  EXPECT_EQ(p3.label, 3);
  EXPECT_GT(p3.score, 0);
  const auto p6 = infer(m, data[1], InferMode::Classical);
  EXPECT_EQ(p6.label, 6);
  EXPECT_LT(p6.score, 0);

  m.prototypes[1] = m.prototypes[0];
  const auto tie = infer(m, data[1], InferMode::Classical);
  EXPECT_EQ(tie.score, 0.0);
  EXPECT_EQ(tie.label, 3);
}

TEST(Infer, QuantumExactEqualsRmsCosineOracle) {
  const auto data = preprocess(synthetic_dataset(4, 20, 0.3), Downscale::Center);
  ClassifierConfig cfg;
  cfg.dim = 64;
  cfg.mode = TrainMode::Hybrid;
  const auto m = train(data, cfg);
  for (std::size_t i = 0; i < 10; ++i) {
    // oracle: Re<rms(q)|rms(proto)> = mean of cos(pi (q_i/rms_q - p_i/rms_p))
    const Eigen::VectorXd q = encode_sample(data[i], m.levels).cast<double>();
    auto rel = [&](const hdc::BundleVector& proto) {
      const Eigen::VectorXd p = proto.cast<double>();
      const double rq = std::sqrt(q.squaredNorm() / 64.0), rp = std::sqrt(p.squaredNorm() / 64.0);
      double acc = 0;
      for (int j = 0; j < 64; ++j) acc += std::cos(std::numbers::pi * (p[j] / rp - q[j] / rq));
      return acc / 64.0;
    };
    const auto pred = infer(m, data[i], InferMode::QuantumExact);
    EXPECT_NEAR(pred.score, rel(m.prototypes[0]) - rel(m.prototypes[1]), 1e-10);
  }
}

TEST(Infer, SampledAgreesWhenGapIsLarge) {
  const auto data = preprocess(synthetic_dataset(5, 30, 0.3), Downscale::Center);
  ClassifierConfig cfg;
  cfg.dim = 64;
  cfg.mode = TrainMode::Hybrid;
  const auto m = train(data, cfg);
  int compared = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto exact = infer(m, data[i], InferMode::QuantumExact);
    Rng rng(derive_seed(99, i));
    const auto sampled = infer(m, data[i], InferMode::QuantumSampled, 10000, &rng);
    EXPECT_LE(sampled.max_std_error, 0.005 + 1e-12);
    if (std::abs(exact.score) > 4 * 0.005) {
      ++compared;
      EXPECT_EQ(exact.label, sampled.label) << i;
    }
  }
  EXPECT_GT(compared, 20);
}

// ---- cross validation

TEST(Folds, StratifiedAndDisjoint) {
  const auto data = noiseless_features(150);
  const auto folds = fold_assignment(data, 5, 7);
  for (int f = 0; f < 5; ++f) {
    std::size_t c3 = 0, c6 = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (folds[i] != f) continue;
      (data[i].label == 3 ? c3 : c6)++;
    }
    EXPECT_EQ(c3, 30U);
    EXPECT_EQ(c6, 30U);
  }
  const auto splits = stratified_splits(data, 5, 100, 50, 7);
  for (std::size_t f = 0; f < splits.size(); ++f) {
    EXPECT_EQ(splits[f].train.size(), 100U);
    EXPECT_EQ(splits[f].test.size(), 50U);
    for (auto i : splits[f].test) EXPECT_EQ(folds[i], static_cast<int>(f));
    for (auto i : splits[f].train) EXPECT_NE(folds[i], static_cast<int>(f));
    std::size_t t3 = 0;
    for (auto i : splits[f].test) t3 += data[i].label == 3;
    EXPECT_EQ(t3, 25U);
  }
}

TEST(CrossValidate, NoiselessSyntheticIsPerfect) {
  CvConfig cfg;
  cfg.model.dim = 10000;
  const auto rep = cross_validate(noiseless_features(150), cfg);
  EXPECT_DOUBLE_EQ(rep.f1_mean, 1.0);
  EXPECT_EQ(rep.n_test, 250U);
  EXPECT_EQ(rep.fold_f1.size(), 5U);
}

TEST(CrossValidate, WorkerCountDoesNotChangeResult) {
  const auto data = preprocess(synthetic_dataset(6, 150, 0.35), Downscale::Center);
  CvConfig cfg;
  cfg.model.dim = 64;
  cfg.infer = InferMode::QuantumSampled;
  cfg.shots = 2000;
  cfg.workers = 1;
  const auto a = cross_validate(data, cfg);
  cfg.workers = 4;
  const auto b = cross_validate(data, cfg);
  EXPECT_EQ(a.fold_f1, b.fold_f1);
  EXPECT_EQ(a.auc, b.auc);
  EXPECT_EQ(a.confusion, b.confusion);
}

TEST(Sweep, DepthIncreasesAndF1Bounded) {
  const auto data = preprocess(synthetic_dataset(6, 150, 0.35), Downscale::Center);
  const std::vector<hdc::Index> dims{16, 32, 64};
  const auto rows = dimensionality_sweep(data, dims, 7);
  ASSERT_EQ(rows.size(), 3U);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_GE(rows[i].f1, 0.0);
    EXPECT_LE(rows[i].f1, 1.0);
    if (i) EXPECT_GT(rows[i].hadamard_depth, rows[i - 1].hadamard_depth);
  }
}

// ---- reasoning

TEST(Reasoning, ClassicalFindsPeso) {
  const auto res = reasoning_query_classical(reasoning_codebook(10000, 3));
  EXPECT_EQ(res.argmax, "Peso");
  ASSERT_EQ(res.table.size(), 6U);
}

TEST(Reasoning, RawQueryIsSumOfCrossTerms) {
  const auto book = reasoning_codebook(256, 4);
  const auto terms = reasoning_cross_terms(book);
  ASSERT_EQ(terms.size(), 9U);
  // direct construction of the query from the records
  auto b = [&](const std::string& x, const std::string& y) { return hdc::bind(book.at(x), book.at(y)); };
  const std::vector<hdc::BipolarHypervector> usa{b("country", "USA"), b("currency", "Dollar"), b("capital", "WashingtonDC")};
  const std::vector<hdc::BipolarHypervector> mex{b("country", "Mexico"), b("currency", "Peso"), b("capital", "MexicoCity")};
  const Eigen::VectorXi want = book.at("Dollar").components().cwiseProduct(hdc::bundle(usa)).cwiseProduct(hdc::bundle(mex));
  EXPECT_EQ(reasoning_query(book, BundleMode::Raw), want);
  EXPECT_EQ(hdc::bundle(terms), want);
}

TEST(Reasoning, DegenerateDollarEqualsPeso) {
  auto book = reasoning_codebook(512, 5);
  book.set("Peso", book.at("Dollar"));
  const auto res = reasoning_query_classical(book);
  EXPECT_DOUBLE_EQ(res.table[1].similarity, res.table[4].similarity);
}

TEST(Reasoning, QuantumExactEqualsClassicalRaw) {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const auto book = reasoning_codebook(16, seed);
    const auto c = reasoning_query_classical(book, BundleMode::Raw);
    const auto q = reasoning_query_quantum(book);
    EXPECT_EQ(c.argmax, q.argmax);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(c.table[i].similarity, q.table[i].similarity, 1e-10);
    EXPECT_EQ(q.ancillas, 4);
  }
}

TEST(Reasoning, BundledStateProportionalToRawQuery) {
  const auto book = reasoning_codebook(16, 8);
  std::vector<ops::StatePrep> preps;
  for (const auto& t : reasoning_cross_terms(book)) preps.push_back(ops::prepare_state(ops::oracle_from_bipolar(t)));
  const auto res = ops::bundle_states(preps);
  const Eigen::VectorXd q = reasoning_query(book, BundleMode::Raw).cast<double>();
  const Eigen::VectorXcd want = q.normalized().cast<std::complex<double>>();
  EXPECT_NEAR(std::norm(want.dot(res.system_state)), 1.0, 1e-9);
}

TEST(Reasoning, SampledWithinShotBound) {
  const auto book = reasoning_codebook(64, 2);
  const auto exact = reasoning_query_quantum(book);
  const auto sampled = reasoning_query_quantum(book, 10000, 17);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_NEAR(sampled.table[i].similarity, exact.table[i].similarity, 4 * 2 * 0.005) << i;
    EXPECT_GT(sampled.table[i].std_error, 0.0);
  }
}

// ---- resources

TEST(Resources, FlatGrowsAndProbabilisticIsCheap) {
  ResourceConfig cfg;
  cfg.samples = 3;
  const auto f4 = prototype_resources(4, ResourceMode::Flat, cfg);
  const auto f5 = prototype_resources(5, ResourceMode::Flat, cfg);
  EXPECT_GT(f5.report.depth, f4.report.depth);
  EXPECT_EQ(f4.report.n_ancilla, 6);  // 48 feature circuits
  const auto p4 = prototype_resources(4, ResourceMode::Probabilistic, cfg);
  EXPECT_EQ(p4.rounds, 15);
  EXPECT_EQ(p4.report.n_ancilla, 1);
  EXPECT_LT(p4.report.depth, f4.report.depth);
}

TEST(Resources, ProbabilisticRoundsLinear) {
  ResourceConfig one, fifteen;
  one.rounds = 1;
  fifteen.rounds = 15;
  const double r = static_cast<double>(prototype_resources(5, ResourceMode::Probabilistic, fifteen).report.depth) /
                   static_cast<double>(prototype_resources(5, ResourceMode::Probabilistic, one).report.depth);
  EXPECT_NEAR(r, 15.0, 1.5);
}

// ---- persistence

TEST(Io, ModelRoundTrip) {
  const auto data = preprocess(synthetic_dataset(4, 20, 0.3), Downscale::Center);
  ClassifierConfig cfg;
  cfg.dim = 64;
  cfg.mode = TrainMode::Hybrid;
  const auto m = train(data, cfg);
  const auto path = temp_path("model.json");
  io::save_model(path, m);
  const auto back = io::load_model(path);
  EXPECT_EQ(back.dim, m.dim);
  EXPECT_EQ(back.seed, m.seed);
  EXPECT_EQ(back.prototypes[0], m.prototypes[0]);
  EXPECT_EQ(back.prototypes[1], m.prototypes[1]);
  EXPECT_EQ(back.levels.at("level1"), m.levels.at("level1"));
  ASSERT_EQ(back.rms_oracles.size(), 2U);
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(infer(back, data[i], InferMode::QuantumExact).score, infer(m, data[i], InferMode::QuantumExact).score);
  }
  fs::remove(path);
}

TEST(Io, RejectsBadModel) {
  EXPECT_THROW(io::model_from_json(io::Json{{"format_version", 99}}), FormatError);
  EXPECT_THROW(io::model_from_json(io::Json::array()), FormatError);
}

TEST(Io, DecimalRoundTrips) {
  for (double x : {0.1, 1.0 / 3.0, 85.93, -2.5e-300}) EXPECT_EQ(std::stod(io::decimal(x)), x);
}
