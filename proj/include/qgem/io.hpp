#pragma once

// Config files, run manifests, and result tables.  Files hold SI-unit
// scalars only; convenience suffixes (um, ms, Hz, ...) are accepted on the
// command line and normalized before anything is written.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qgem/sweep.hpp"

namespace qgem {

inline constexpr const char* kToolVersion = "0.1.0";

// Ordered key/value pairs for CSV "# key = value" header lines and manifest
// option maps.
using HeaderBlock = std::vector<std::pair<std::string, std::string>>;

// "250um" -> 2.5e-4, "2.5s" -> 2.5, "0.05Hz" -> 0.05; bare numbers pass
// through unchanged.  Throws std::invalid_argument on malformed numbers or
// unrecognized suffixes.
double parse_quantity(const std::string& text);

// Shortest decimal form that parses back to the same double; NaN cells
// print as "nan".
std::string format_double(double value);

std::string current_timestamp_utc();

std::string setup_name(Setup setup);
std::string witness_kind_name(WitnessKind kind);
std::string sample_mode_name(SampleMode mode);
Setup parse_setup(const std::string& name);
WitnessKind parse_witness_kind(const std::string& name);
SampleMode parse_sample_mode(const std::string& name);

// Flat JSON object of SI scalars.  An optional "setup" string applies a
// named preset before the explicit keys override it.  Unknown keys, wrong
// types, and invariant violations raise ConfigError naming the offending
// key.
ExperimentConfig config_from_json_text(const std::string& text);
std::string config_to_json_text(const ExperimentConfig& config);

ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);

// Everything needed to reproduce one tool invocation.  Re-running a
// manifest rewrites byte-identical CSV bodies; only the timestamp header
// line may differ.
struct RunManifest {
  std::string subcommand;
  ExperimentConfig config;
  std::uint64_t seed = 0;
  HeaderBlock options;  // subcommand knobs, stringified
  std::vector<std::string> outputs;
  std::string tool_version = kToolVersion;
  std::string timestamp;  // informational; ignored on replay
};

std::string manifest_to_json_text(const RunManifest& manifest);
RunManifest manifest_from_json_text(const std::string& text);
void write_manifest(const RunManifest& manifest, const std::string& path);
RunManifest load_manifest(const std::string& path);

// Config snapshot in emission order, for CSV headers.
HeaderBlock config_header(const ExperimentConfig& config);

// "# key = value" lines, one column-name row, then the data rows.
void write_table_csv(const SweepTable& table, const HeaderBlock& header,
                     std::ostream& out);
void write_table_csv(const SweepTable& table, const HeaderBlock& header,
                     const std::string& path);

// Budget-curve summary, one row per budget point:
// M, mean_confidence, std_confidence, W_mean, s_W_mean, mode, D, gamma,
// tau, seed.
void write_confidence_csv(const std::vector<CurvePoint>& curve,
                          const ExperimentConfig& config,
                          const TrialSettings& settings,
                          const HeaderBlock& header, std::ostream& out);
void write_confidence_csv(const std::vector<CurvePoint>& curve,
                          const ExperimentConfig& config,
                          const TrialSettings& settings,
                          const HeaderBlock& header, const std::string& path);

// Term list (i, j, c), and the measurement groups as member-index lists
// when `groups` is non-null.
std::string decomposition_to_json_text(const WitnessDecomposition& decomp,
                                       const std::vector<MeasurementGroup>*
                                           groups);

// Per-repetition reports plus the aggregate summary of one trial.
std::string trial_to_json_text(const TrialResult& trial,
                               const ExperimentConfig& config,
                               const TrialSettings& settings);

}  // namespace qgem
