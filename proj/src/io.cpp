#include "qhdc/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qhdc/error.hpp"

namespace qhdc::io {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Json complex_list(const Eigen::VectorXcd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

Json gate_to_json(const sim::Gate& g) {
  Json j;
  j["kind"] = sim::gate_name(g);
  std::visit(Overloaded{
                 [&](const sim::PhaseShift& x) { j["qubits"] = {x.qubit}, j["angle"] = x.angle; },
                 [&](const sim::Rz& x) { j["qubits"] = {x.qubit}, j["angle"] = x.angle; },
                 [&](const sim::Ry& x) { j["qubits"] = {x.qubit}, j["angle"] = x.angle; },
                 [&](const sim::Rx& x) { j["qubits"] = {x.qubit}, j["angle"] = x.angle; },
                 [&](const sim::Cnot& x) { j["qubits"] = {x.control, x.target}; },
                 [&](const sim::Diagonal& x) {
                   j["qubits"] = x.qubits;
                   j["phases"] = complex_list(x.phases);
                 },
                 [&](const sim::Qft& x) { j["qubits"] = x.qubits; },
                 [&](const sim::UnitaryMatrix& x) {
                   j["qubits"] = x.qubits;
                   Json rows = Json::array();
                   for (Eigen::Index r = 0; r < x.matrix.rows(); ++r) rows.push_back(complex_list(x.matrix.row(r).transpose()));
                   j["matrix"] = rows;
                 },
                 [&](const sim::Controlled& x) {
                   j["controls"] = x.controls;
                   j["values"] = x.values;
                   Json body = Json::array();
                   for (const auto& inner : x.body->gates()) body.push_back(gate_to_json(inner));
                   j["body"] = body;
                 },
                 [&](const auto&) { j["qubits"] = sim::gate_qubits(g); },
             },
             g);
  return j;
}

std::vector<int> int_array(const Json& j, const char* what) {
  if (!j.is_array()) throw FormatError(std::string("model: '") + what + "' is not an array");
  std::vector<int> v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw FormatError(std::string("model: '") + what + "' holds a non-integer");
    v.push_back(x.get<int>());
  }
  return v;
}

Eigen::VectorXi to_eigen(const std::vector<int>& v) {
  return Eigen::Map<const Eigen::VectorXi>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string decimal(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json circuit_to_json(const sim::Circuit& c) {
  Json j;
  j["n_qubits"] = c.n_qubits();
  Json roles = Json::array();
  for (auto r : c.roles()) roles.push_back(r == sim::QubitRole::Ancilla ? "ancilla" : "system");
  j["roles"] = roles;
  Json gates = Json::array();
  for (const auto& g : c.gates()) gates.push_back(gate_to_json(g));
  j["gates"] = gates;
  return j;
}

Json model_to_json(const tasks::ClassifierModel& m) {
  Json j;
  j["format_version"] = kModelFormatVersion;
  j["D"] = m.dim;
  j["seed"] = m.seed;
  j["mode"] = tasks::to_string(m.mode);
  j["retrain_epochs"] = m.retrain_epochs;
  Json book;
  book["names"] = m.levels.names();
  Json vectors = Json::array();
  for (const auto& e : m.levels.entries()) vectors.push_back(std::vector<int>(e.components().begin(), e.components().end()));
  book["vectors"] = vectors;
  j["level_codebook"] = book;
  Json protos;
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& p = m.prototypes[k];
    protos[std::to_string(tasks::kClasses[k])] = std::vector<int>(p.begin(), p.end());
  }
  j["prototypes"] = protos;
  j["rms"] = !m.rms_oracles.empty();
  return j;
}

tasks::ClassifierModel model_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw FormatError("model: document is not an object");
    if (j.value("format_version", -1) != kModelFormatVersion) {
      throw FormatError("model: unsupported format_version (expected " + std::to_string(kModelFormatVersion) + ")");
    }
    const auto dim = j.at("D").get<hdc::Index>();
    const auto seed = j.at("seed").get<std::uint64_t>();
    const auto& book = j.at("level_codebook");
    auto names = book.at("names").get<std::vector<std::string>>();
    std::vector<hdc::BipolarHypervector> entries;
    for (const auto& v : book.at("vectors")) {
      const auto comp = int_array(v, "level_codebook.vectors");
      if (static_cast<hdc::Index>(comp.size()) != dim) throw FormatError("model: level vector length differs from D");
      entries.emplace_back(to_eigen(comp));
    }
    tasks::ClassifierModel m{dim,
                             0,
                             hdc::Codebook(seed, dim, std::move(names), std::move(entries)),
                             {},
                             {},
                             j.value("retrain_epochs", 0),
                             {},
                             seed,
                             j.value("mode", std::string("classical")) == "hybrid" ? tasks::TrainMode::Hybrid
                                                                                   : tasks::TrainMode::Classical};
    if (dim >= 2 && (dim & (dim - 1)) == 0) {
      while ((hdc::Index{1} << m.n_qubits) < dim) ++m.n_qubits;
    }
    for (std::size_t k = 0; k < 2; ++k) {
      const auto comp = int_array(j.at("prototypes").at(std::to_string(tasks::kClasses[k])), "prototypes");
      if (static_cast<hdc::Index>(comp.size()) != dim) throw FormatError("model: prototype length differs from D");
      m.prototypes[k] = to_eigen(comp);
    }
    if (j.value("rms", false)) tasks::attach_rms_oracles(m);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("model: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(std::string("model: ") + e.what());
  }
}

void save_model(const std::filesystem::path& p, const tasks::ClassifierModel& m) {
  write_text(p, model_to_json(m).dump() + "\n");
}

tasks::ClassifierModel load_model(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(p.string() + ": " + e.what());
  }
  return model_from_json(j);
}

Json to_json(const tasks::ReasoningResult& r) {
  Json j;
  Json table = Json::array();
  for (const auto& row : r.table) {
    Json e{{"entity", row.entity}, {"similarity", row.similarity}};
    if (r.quantum && r.shots > 0) e["std_error"] = row.std_error;
    table.push_back(e);
  }
  j["table"] = table;
  j["argmax"] = r.argmax;
  if (r.quantum) {
    j["diagnostics"] = {{"alpha", r.alpha},
                        {"rounds", r.rounds},
                        {"success_probability", r.success_probability},
                        {"ancillas", r.ancillas},
                        {"shots", r.shots}};
  }
  return j;
}

Json to_json(const tasks::EvalReport& r) {
  Json j;
  j["mode"] = tasks::to_string(r.mode);
  j["classes"] = tasks::kClasses;
  j["confusion"] = {{r.confusion[0][0], r.confusion[0][1]}, {r.confusion[1][0], r.confusion[1][1]}};
  j["f1_mean"] = r.f1_mean;
  j["f1_std"] = r.f1_std;
  j["fold_f1"] = r.fold_f1;
  j["auc"] = r.auc;
  j["fold_seconds"] = r.fold_seconds;
  j["n_test"] = r.n_test;
  if (r.mode == tasks::InferMode::QuantumSampled) j["max_std_error"] = r.max_std_error;
  return j;
}

Json to_json(const synth::ResourceReport& r) {
  return {{"depth", r.depth},
          {"cnot_count", r.cnot_count},
          {"total_gates", r.total_gates},
          {"n_system", r.n_system},
          {"n_ancilla", r.n_ancilla}};
}

Json to_json(const tasks::ScalingRow& r) {
  return {{"n_qubits", r.n_qubits},         {"mode", tasks::to_string(r.mode)}, {"rounds", r.rounds},
          {"depth", r.report.depth},        {"cnot_count", r.report.cnot_count}, {"total_gates", r.report.total_gates},
          {"n_ancilla", r.report.n_ancilla}, {"infeasible", r.infeasible}};
}

Json to_json(const tasks::SweepRow& r) {
  return {{"D", r.dim}, {"f1", r.f1}, {"hadamard_depth", r.hadamard_depth}, {"hadamard_cnots", r.hadamard_cnots}};
}

std::string reasoning_csv(const tasks::ReasoningResult& r) {
  std::ostringstream out;
  out << "entity,similarity" << (r.quantum && r.shots > 0 ? ",std_error" : "") << "\n";
  for (const auto& row : r.table) {
    out << csv_field(row.entity) << "," << decimal(row.similarity);
    if (r.quantum && r.shots > 0) out << "," << decimal(row.std_error);
    out << "\n";
  }
  return out.str();
}

std::string scaling_csv(const std::vector<tasks::ScalingRow>& rows) {
  std::ostringstream out;
  out << "n_qubits,mode,rounds,depth,cnot_count,total_gates,infeasible\n";
  for (const auto& r : rows) {
    out << r.n_qubits << "," << tasks::to_string(r.mode) << "," << r.rounds << "," << r.report.depth << ","
        << r.report.cnot_count << "," << r.report.total_gates << "," << (r.infeasible ? "true" : "false") << "\n";
  }
  return out.str();
}

std::string sweep_csv(const std::vector<tasks::SweepRow>& rows) {
  std::ostringstream out;
  out << "D,f1,hadamard_depth,hadamard_cnots\n";
  for (const auto& r : rows) out << r.dim << "," << decimal(r.f1) << "," << r.hadamard_depth << "," << r.hadamard_cnots << "\n";
  return out.str();
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("write failed for " + p.string());
}

}  // namespace qhdc::io
