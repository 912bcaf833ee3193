#pragma once

// JSON / CSV emission and model persistence.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "qhdc/sim/circuit.hpp"
#include "qhdc/synth.hpp"
#include "qhdc/tasks/classifier.hpp"
#include "qhdc/tasks/reasoning.hpp"
#include "qhdc/tasks/resources.hpp"

namespace qhdc::io {

using Json = nlohmann::ordered_json;

inline constexpr int kModelFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;

/// Gate list with parameters; nested controlled bodies are inlined.
Json circuit_to_json(const sim::Circuit& c);

Json model_to_json(const tasks::ClassifierModel& m);
/// Throws FormatError on a malformed or unsupported document.
tasks::ClassifierModel model_from_json(const Json& j);

void save_model(const std::filesystem::path& p, const tasks::ClassifierModel& m);
tasks::ClassifierModel load_model(const std::filesystem::path& p);

Json to_json(const tasks::ReasoningResult& r);
Json to_json(const tasks::EvalReport& r);
Json to_json(const synth::ResourceReport& r);
Json to_json(const tasks::ScalingRow& r);
Json to_json(const tasks::SweepRow& r);

std::string reasoning_csv(const tasks::ReasoningResult& r);
std::string scaling_csv(const std::vector<tasks::ScalingRow>& rows);
std::string sweep_csv(const std::vector<tasks::SweepRow>& rows);

/// Shortest round-trip decimal form.
std::string decimal(double x);

void write_text(const std::filesystem::path& p, const std::string& text);

}  // namespace qhdc::io
