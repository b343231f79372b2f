#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "slm/experiment.hpp"
#include "slm/models.hpp"
#include "slm/vanderpol.hpp"

namespace slm {

/// Doubles in CSV output round-trip exactly (printf %.17g); JSON relies on
/// the serializer's shortest-round-trip formatting. Objects keep sorted
/// keys, so equal values always produce equal bytes.
std::string format_double(double v);
double parse_double(const std::string& s);

// Distributions: tagged objects, {"type":"normal","mean":..,"variance":..},
// {"type":"uniform","lo":..,"hi":..}, {"type":"exponential","rate":..}.
nlohmann::json dist_to_json(const CenterDist& d);
nlohmann::json dist_to_json(const WidthDist& d);
CenterDist center_dist_from_json(const nlohmann::json& j);
WidthDist width_dist_from_json(const nlohmann::json& j);

/// Either model kind, as loaded from a model file.
struct LoadedModel {
    std::optional<SlmParamsd> slm;
    std::optional<ElmParamsd> elm;

    Index dim_in() const;
    Index dim_out() const;
    std::function<Vecd(const Vecd&)> evaluator() const;
};

// When `spec` is given the file also records how the hidden layer was drawn
// (distributions and seed) so a run can be reproduced from the model file.
nlohmann::json model_to_json(const SlmParamsd& p, const RandomSpec* spec = nullptr);
nlohmann::json model_to_json(const ElmParamsd& p, const RandomSpec* spec = nullptr);
LoadedModel model_from_json(const nlohmann::json& j);

// Experiment configuration; parsing rejects unknown keys at every level so
// typos fail loudly instead of silently running defaults.
nlohmann::json experiment_config_to_json(const ExperimentConfig& cfg);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json vdp_config_to_json(const VdpConfig& cfg);
VdpConfig vdp_config_from_json(const nlohmann::json& j);

// Phase data CSV: one `# config {json}` line, then a header and one row per
// transition: phase,trajectory,t,x1,x2,x1_next,x2_next. Reading rebuilds the
// trajectories and validates chain consistency, so write/read round-trips.
void write_phase_csv(std::ostream& os, const PhaseData& data);
PhaseData read_phase_csv(std::istream& is);
void write_phase_csv_file(const std::string& path, const PhaseData& data);
PhaseData read_phase_csv_file(const std::string& path);

// Experiment results.
nlohmann::json report_to_json(const ExperimentReport& report);
void write_records_csv(std::ostream& os, const ExperimentReport& report);
std::string format_summary_table(const ExperimentReport& report);

// File helpers.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace slm
