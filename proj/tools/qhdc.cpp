// qhdc command-line driver: reason, classify, sweep, resources, selftest.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "qhdc/error.hpp"
#include "qhdc/io.hpp"
#include "qhdc/tasks/classifier.hpp"
#include "qhdc/tasks/dataset.hpp"
#include "qhdc/tasks/reasoning.hpp"
#include "qhdc/tasks/resources.hpp"
#include "selftest.hpp"

#ifndef QHDC_DATA_DIR
#define QHDC_DATA_DIR "data"
#endif

namespace {

using namespace qhdc;
using io::Json;

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kIo = 3, kData = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool is_pow2(long long d) { return d >= 2 && (d & (d - 1)) == 0; }

Json envelope(const std::string& command, Json config, Json result) {
  return {{"format_version", io::kReportFormatVersion},
          {"command", command},
          {"config", std::move(config)},
          {"result", std::move(result)}};
}

void emit_json(const Json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
  } else {
    io::write_text(path, j.dump(2) + "\n");
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// ---- data resolution shared by classify and sweep

struct DataOptions {
  std::string source = "mnist";
  std::string images, labels;
  std::string downscale = "center";
  std::size_t per_class = 500;
  double noise = 0.1;
  std::uint64_t seed = 7;
};

void add_data_options(CLI::App* app, DataOptions& d) {
  app->add_option("--data", d.source, "mnist or synthetic")->check(CLI::IsMember({"mnist", "synthetic"}));
  app->add_option("--images", d.images, "IDX image file (default: QHDC_MNIST_DIR or bundled subset)");
  app->add_option("--labels", d.labels, "IDX label file");
  app->add_option("--downscale", d.downscale, "center or mean")->check(CLI::IsMember({"center", "mean"}));
  app->add_option("--per-class", d.per_class, "synthetic samples per class");
  app->add_option("--noise", d.noise, "synthetic pixel noise probability");
}

void resolve_paths(DataOptions& d) {
  if (d.source != "mnist" || (!d.images.empty() && !d.labels.empty())) return;
  const char* env = std::getenv("QHDC_MNIST_DIR");
  const std::filesystem::path dir = env ? env : QHDC_DATA_DIR;
  if (d.images.empty()) d.images = (dir / "mnist36-images-idx3-ubyte").string();
  if (d.labels.empty()) d.labels = (dir / "mnist36-labels-idx1-ubyte").string();
}

std::vector<tasks::FeatureSample> load_features(DataOptions& d) {
  resolve_paths(d);
  tasks::Dataset ds = d.source == "synthetic" ? tasks::synthetic_dataset(d.seed, d.per_class, d.noise)
                                              : tasks::filter_classes(tasks::load_mnist(d.images, d.labels));
  return tasks::preprocess(ds, tasks::parse_downscale(d.downscale));
}

Json data_config(const DataOptions& d) {
  Json j{{"data", d.source}, {"downscale", d.downscale}};
  if (d.source == "mnist") {
    j["images"] = d.images;
    j["labels"] = d.labels;
  } else {
    j["per_class"] = d.per_class;
    j["noise"] = d.noise;
  }
  return j;
}

// ---- reason

struct ReasonOptions {
  long long dim = 10000;
  std::uint64_t seed = 1;
  std::string mode = "classical";
  std::string bundle = "raw";
  std::uint64_t shots = 0;
  std::string out = "table";
};

int cmd_reason(const ReasonOptions& o) {
  if (o.mode == "quantum" && !is_pow2(o.dim)) throw UsageError("--dim must be a power of two in quantum mode");
  if (o.mode == "quantum" && o.bundle != "raw") throw UsageError("quantum mode bundles raw sums only");
  if (o.dim < 2) throw UsageError("--dim must be at least 2");
  const auto book = tasks::reasoning_codebook(o.dim, o.seed);
  const auto res = o.mode == "quantum"
                       ? tasks::reasoning_query_quantum(book, o.shots, derive_seed(o.seed, 0x5407))
                       : tasks::reasoning_query_classical(book, o.bundle == "raw" ? tasks::BundleMode::Raw
                                                                                 : tasks::BundleMode::Sign);
  const Json cfg{{"dim", o.dim}, {"seed", o.seed}, {"mode", o.mode}, {"bundle", o.bundle}, {"shots", o.shots}};
  if (o.out == "json") {
    emit_json(envelope("reason", cfg, io::to_json(res)), "");
  } else if (o.out == "csv") {
    std::cout << io::reasoning_csv(res);
  } else {
    std::cout << "query: Dollar of Mexico (D=" << o.dim << ", seed=" << o.seed << ", " << o.mode << ")\n";
    for (const auto& row : res.table) {
      std::cout << "  " << std::left << std::setw(14) << row.entity << std::right << std::fixed << std::setprecision(4)
                << std::setw(9) << row.similarity;
      if (res.quantum && res.shots > 0) std::cout << "  +- " << row.std_error;
      std::cout << (row.entity == res.argmax ? "  <- argmax" : "") << "\n";
    }
    if (res.quantum) {
      std::cout << "  alpha=" << res.alpha << " rounds=" << res.rounds << " success=" << res.success_probability
                << " ancillas=" << res.ancillas << "\n";
    }
  }
  return res.argmax == "Peso" ? kOk : kFail;
}

// ---- classify

struct ClassifyOptions {
  DataOptions data;
  long long dim = 10000;
  std::string mode = "classical";
  std::uint64_t shots = 10000;
  int folds = 5;
  std::size_t train_size = 100, test_size = 50;
  int retrain_epochs = -1;
  unsigned workers = 1;
  std::string save_model, out;
};

int cmd_classify(ClassifyOptions o) {
  const auto infer = tasks::parse_infer_mode(o.mode);
  if (infer != tasks::InferMode::Classical && !is_pow2(o.dim)) {
    throw UsageError("--dim must be a power of two in quantum modes");
  }
  if (o.dim < 2) throw UsageError("--dim must be at least 2");
  if (infer == tasks::InferMode::QuantumSampled && o.shots == 0) throw UsageError("--shots must be positive when sampling");
  const auto features = load_features(o.data);

  tasks::CvConfig cv;
  cv.model.dim = o.dim;
  cv.model.seed = o.data.seed;
  cv.model.retrain_epochs = o.retrain_epochs;
  cv.model.mode = infer == tasks::InferMode::Classical ? tasks::TrainMode::Classical : tasks::TrainMode::Hybrid;
  cv.infer = infer;
  cv.shots = o.shots;
  cv.folds = o.folds;
  cv.train_size = o.train_size;
  cv.test_size = o.test_size;
  cv.workers = o.workers;
  const auto rep = tasks::cross_validate(features, cv);

  Json cfg = data_config(o.data);
  cfg.update(Json{{"dim", o.dim},
                  {"mode", o.mode},
                  {"shots", infer == tasks::InferMode::QuantumSampled ? o.shots : 0},
                  {"folds", o.folds},
                  {"train_size", o.train_size},
                  {"test_size", o.test_size},
                  {"retrain_epochs", cv.model.resolved_epochs()},
                  {"seed", o.data.seed}});
  const Json report = envelope("classify", cfg, io::to_json(rep));
  if (!o.out.empty()) emit_json(report, o.out);

  std::cout << "mode " << o.mode << "  D=" << o.dim << "  folds=" << o.folds << "  n_test=" << rep.n_test << "\n"
            << std::fixed << std::setprecision(4) << "weighted F1 " << rep.f1_mean << " +- " << rep.f1_std
            << "   AUC " << rep.auc << "\n"
            << "confusion (rows true 3,6; cols predicted 3,6): [" << rep.confusion[0][0] << " " << rep.confusion[0][1]
            << "; " << rep.confusion[1][0] << " " << rep.confusion[1][1] << "]\n";
  if (infer == tasks::InferMode::QuantumSampled) std::cout << "max std_error " << rep.max_std_error << "\n";

  if (!o.save_model.empty()) {
    const auto split = tasks::stratified_splits(features, o.folds, o.train_size, o.test_size, o.data.seed).front();
    std::vector<tasks::FeatureSample> train_set;
    for (auto i : split.train) train_set.push_back(features[i]);
    io::save_model(o.save_model, tasks::train(train_set, cv.model));
  }
  return kOk;
}

// ---- sweep

struct SweepOptions {
  DataOptions data;
  std::vector<long long> dims{16, 32, 64, 128, 256};
  std::size_t train_size = 100, test_size = 50;
  std::string out;
};

int cmd_sweep(SweepOptions o) {
  for (auto d : o.dims) {
    if (!is_pow2(d)) throw UsageError("--dims entries must be powers of two");
  }
  const auto features = load_features(o.data);
  const std::vector<hdc::Index> dims(o.dims.begin(), o.dims.end());
  const auto rows = tasks::dimensionality_sweep(features, dims, o.data.seed, o.train_size, o.test_size);
  if (ends_with(o.out, ".csv")) {
    io::write_text(o.out, io::sweep_csv(rows));
  } else if (!o.out.empty()) {
    Json cfg = data_config(o.data);
    cfg.update(Json{{"dims", o.dims}, {"train_size", o.train_size}, {"test_size", o.test_size}, {"seed", o.data.seed}});
    Json res = Json::array();
    for (const auto& r : rows) res.push_back(io::to_json(r));
    emit_json(envelope("sweep", cfg, Json{{"rows", res}}), o.out);
  }
  std::cout << io::sweep_csv(rows);
  return kOk;
}

// ---- resources

struct ResourceOptions {
  std::string qubits = "4..7";
  std::string mode = "both";
  tasks::ResourceConfig cfg;
  std::string out;
};

std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw UsageError("--qubits expects N or A..B");
  }
}

int cmd_resources(const ResourceOptions& o) {
  const auto [lo, hi] = parse_range(o.qubits);
  if (lo < 1 || hi < lo || hi > 12) throw UsageError("--qubits range must lie within 1..12");
  std::vector<tasks::ScalingRow> rows;
  for (int n = lo; n <= hi; ++n) {
    if (o.mode != "probabilistic") rows.push_back(tasks::prototype_resources(n, tasks::ResourceMode::Flat, o.cfg));
    if (o.mode != "flat") rows.push_back(tasks::prototype_resources(n, tasks::ResourceMode::Probabilistic, o.cfg));
  }
  if (ends_with(o.out, ".csv")) {
    io::write_text(o.out, io::scaling_csv(rows));
  } else if (!o.out.empty()) {
    const Json cfg{{"qubits", o.qubits},          {"mode", o.mode},         {"samples", o.cfg.samples},
                   {"features", o.cfg.features},  {"rounds", o.cfg.rounds}, {"seed", o.cfg.seed},
                   {"infeasible_depth", o.cfg.infeasible_depth}};
    Json res = Json::array();
    for (const auto& r : rows) res.push_back(io::to_json(r));
    emit_json(envelope("resources", cfg, Json{{"rows", res}}), o.out);
  }
  std::cout << io::scaling_csv(rows);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum hyperdimensional computing toolkit"};
  app.require_subcommand(1);

  ReasonOptions ro;
  auto* reason = app.add_subcommand("reason", "analogical query: what is the Dollar of Mexico");
  reason->add_option("--dim", ro.dim, "hypervector dimension");
  reason->add_option("--seed", ro.seed, "codebook seed");
  reason->add_option("--mode", ro.mode)->check(CLI::IsMember({"classical", "quantum"}));
  reason->add_option("--bundle", ro.bundle)->check(CLI::IsMember({"raw", "sign"}));
  reason->add_option("--shots", ro.shots, "0 for exact similarities");
  reason->add_option("--out", ro.out, "table, json or csv")->check(CLI::IsMember({"table", "json", "csv"}));

  ClassifyOptions co;
  auto* classify = app.add_subcommand("classify", "3-vs-6 classification with k-fold cross-validation");
  add_data_options(classify, co.data);
  classify->add_option("--dim", co.dim);
  classify->add_option("--mode", co.mode)->check(CLI::IsMember({"classical", "quantum-exact", "quantum-sampled"}));
  classify->add_option("--shots", co.shots);
  classify->add_option("--folds", co.folds)->check(CLI::Range(2, 100));
  classify->add_option("--train-size", co.train_size);
  classify->add_option("--test-size", co.test_size);
  classify->add_option("--retrain-epochs", co.retrain_epochs, "-1 picks the mode default");
  classify->add_option("--seed", co.data.seed);
  classify->add_option("--workers", co.workers)->check(CLI::Range(1u, 256u));
  classify->add_option("--save-model", co.save_model, "write the fold-0 model as JSON");
  classify->add_option("--out", co.out, "JSON report path ('-' for stdout)");

  SweepOptions so;
  auto* sweep = app.add_subcommand("sweep", "F1 and Hadamard-test depth across dimensions on one split");
  add_data_options(sweep, so.data);
  sweep->add_option("--dims", so.dims)->delimiter(',');
  sweep->add_option("--train-size", so.train_size);
  sweep->add_option("--test-size", so.test_size);
  sweep->add_option("--seed", so.data.seed);
  sweep->add_option("--out", so.out, "CSV (.csv) or JSON report path");

  ResourceOptions rso;
  auto* resources = app.add_subcommand("resources", "class-prototype circuit depth and CNOT scaling");
  resources->add_option("--qubits", rso.qubits, "N or A..B");
  resources->add_option("--mode", rso.mode)->check(CLI::IsMember({"flat", "probabilistic", "both"}));
  resources->add_option("--samples", rso.cfg.samples);
  resources->add_option("--features", rso.cfg.features)->check(CLI::Range(1, 16));
  resources->add_option("--rounds", rso.cfg.rounds)->check(CLI::Range(1, 100000));
  resources->add_option("--seed", rso.cfg.seed);
  resources->add_option("--infeasible-depth", rso.cfg.infeasible_depth);
  resources->add_option("--out", rso.out, "CSV (.csv) or JSON report path");

  std::string fault;
  auto* selftest = app.add_subcommand("selftest", "fast invariant suite");
  selftest->add_option("--inject-fault", fault, "deliberate fault for mutation testing")->check(CLI::IsMember({"s0-sign"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*reason) return cmd_reason(ro);
    if (*classify) return cmd_classify(co);
    if (*sweep) return cmd_sweep(so);
    if (*resources) return cmd_resources(rso);
    if (*selftest) return qhdc::cli::run_selftest(fault, std::cout) == 0 ? kOk : kFail;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const qhdc::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIo;
  } catch (const qhdc::FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return kIo;
  } catch (const qhdc::DegenerateVector& e) {
    std::cerr << "degenerate data: " << e.what() << "\n";
    return kData;
  } catch (const qhdc::ResourceLimit& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kUsage;
  } catch (const qhdc::InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kUsage;
  }
  return kOk;
}
