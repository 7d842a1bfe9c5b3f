#include "qgem/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qgem {

namespace {

using Json = nlohmann::ordered_json;

std::ifstream open_for_read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  return in;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in = open_for_read(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

double parse_quantity(const std::string& text) {
  const std::size_t begin = text.find_first_not_of(" \t");
  if (begin == std::string::npos)
    throw std::invalid_argument("empty quantity");
  const std::size_t end = text.find_last_not_of(" \t");
  const std::string body = text.substr(begin, end - begin + 1);

  errno = 0;
  char* tail = nullptr;
  const double value = std::strtod(body.c_str(), &tail);
  if (tail == body.c_str() || errno == ERANGE)
    throw std::invalid_argument("not a number: '" + text + "'");

  const std::string suffix(tail);
  if (suffix.empty()) return value;

  struct Unit {
    const char* name;
    double scale;
  };
  static constexpr Unit kUnits[] = {
      {"nm", 1e-9},  {"um", 1e-6}, {"mm", 1e-3}, {"m", 1.0},
      {"ns", 1e-9},  {"us", 1e-6}, {"ms", 1e-3}, {"s", 1.0},
      {"mHz", 1e-3}, {"Hz", 1.0},  {"kHz", 1e3}, {"ug", 1e-9},
      {"mg", 1e-6},  {"g", 1e-3},  {"kg", 1.0},  {"rad", 1.0},
  };
  for (const Unit& unit : kUnits)
    if (suffix == unit.name) return value * unit.scale;
  throw std::invalid_argument("unrecognized unit suffix '" + suffix + "'");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buffer, sizeof buffer, "%.*g", precision, value);
    if (std::strtod(buffer, nullptr) == value) break;
  }
  return buffer;
}

std::string current_timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

std::string setup_name(Setup setup) {
  switch (setup) {
    case Setup::parallel: return "parallel";
    case Setup::linear: return "linear";
    case Setup::custom: return "custom";
  }
  return "custom";
}

std::string witness_kind_name(WitnessKind kind) {
  return kind == WitnessKind::ppt ? "ppt" : "vicinity";
}

std::string sample_mode_name(SampleMode mode) {
  return mode == SampleMode::per_term ? "per-term" : "grouped";
}

Setup parse_setup(const std::string& name) {
  if (name == "parallel") return Setup::parallel;
  if (name == "linear") return Setup::linear;
  if (name == "custom") return Setup::custom;
  throw ConfigError("setup", "unknown setup '" + name + "'");
}

WitnessKind parse_witness_kind(const std::string& name) {
  if (name == "ppt") return WitnessKind::ppt;
  if (name == "vicinity") return WitnessKind::vicinity;
  throw ConfigError("witness", "unknown witness kind '" + name + "'");
}

SampleMode parse_sample_mode(const std::string& name) {
  if (name == "per-term") return SampleMode::per_term;
  if (name == "grouped") return SampleMode::grouped;
  throw ConfigError("mode", "unknown sample mode '" + name + "'");
}

namespace {

double number_field(const Json& value, const std::string& key) {
  if (!value.is_number())
    throw ConfigError(key, "expected a number");
  return value.get<double>();
}

ExperimentConfig config_from_json(const Json& object) {
  if (!object.is_object())
    throw ConfigError("config", "expected a JSON object");

  ExperimentConfig config;
  if (object.contains("setup")) {
    const Json& value = object.at("setup");
    if (!value.is_string())
      throw ConfigError("setup", "expected a string");
    config = ExperimentConfig::preset(parse_setup(value.get<std::string>()));
  }

  for (const auto& [key, value] : object.items()) {
    if (key == "setup") {
      continue;
    } else if (key == "dimension") {
      if (!value.is_number_integer())
        throw ConfigError(key, "expected an integer");
      config.dimension = value.get<int>();
    } else if (key == "superposition_width") {
      config.superposition_width = number_field(value, key);
    } else if (key == "min_distance") {
      config.min_distance = number_field(value, key);
    } else if (key == "mass_1") {
      config.mass_1 = number_field(value, key);
    } else if (key == "mass_2") {
      config.mass_2 = number_field(value, key);
    } else if (key == "hold_time") {
      config.hold_time = number_field(value, key);
    } else if (key == "decoherence_rate") {
      config.decoherence_rate = number_field(value, key);
    } else if (key == "theta_1") {
      config.theta_1 = number_field(value, key);
    } else if (key == "theta_2") {
      config.theta_2 = number_field(value, key);
    } else if (key == "gravitational_constant") {
      config.gravitational_constant = number_field(value, key);
    } else if (key == "reduced_planck") {
      config.reduced_planck = number_field(value, key);
    } else {
      throw ConfigError(key, "unknown key");
    }
  }

  config.validate();
  return config;
}

Json config_to_json(const ExperimentConfig& config) {
  Json object;
  object["dimension"] = config.dimension;
  object["superposition_width"] = config.superposition_width;
  object["min_distance"] = config.min_distance;
  object["mass_1"] = config.mass_1;
  object["mass_2"] = config.mass_2;
  object["hold_time"] = config.hold_time;
  object["decoherence_rate"] = config.decoherence_rate;
  object["theta_1"] = config.theta_1;
  object["theta_2"] = config.theta_2;
  object["gravitational_constant"] = config.gravitational_constant;
  object["reduced_planck"] = config.reduced_planck;
  return object;
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  Json object;
  try {
    object = Json::parse(text);
  } catch (const Json::parse_error& err) {
    throw ConfigError("config", std::string("invalid JSON: ") + err.what());
  }
  return config_from_json(object);
}

std::string config_to_json_text(const ExperimentConfig& config) {
  return config_to_json(config).dump(2) + "\n";
}

ExperimentConfig load_config(const std::string& path) {
  return config_from_json_text(slurp(path));
}

void save_config(const ExperimentConfig& config, const std::string& path) {
  open_for_write(path) << config_to_json_text(config);
}

std::string manifest_to_json_text(const RunManifest& manifest) {
  Json root;
  root["subcommand"] = manifest.subcommand;
  root["tool_version"] = manifest.tool_version;
  root["timestamp"] = manifest.timestamp;
  root["seed"] = manifest.seed;
  root["config"] = config_to_json(manifest.config);
  Json options = Json::object();
  for (const auto& [key, value] : manifest.options) options[key] = value;
  root["options"] = options;
  root["outputs"] = manifest.outputs;
  return root.dump(2) + "\n";
}

RunManifest manifest_from_json_text(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& err) {
    throw ConfigError("manifest", std::string("invalid JSON: ") + err.what());
  }
  if (!root.is_object())
    throw ConfigError("manifest", "expected a JSON object");

  RunManifest manifest;
  try {
    manifest.subcommand = root.at("subcommand").get<std::string>();
    manifest.tool_version = root.value("tool_version", std::string());
    manifest.timestamp = root.value("timestamp", std::string());
    manifest.seed = root.value("seed", std::uint64_t{0});
    manifest.config = config_from_json(root.at("config"));
    if (root.contains("options"))
      for (const auto& [key, value] : root.at("options").items())
        manifest.options.emplace_back(key, value.get<std::string>());
    if (root.contains("outputs"))
      manifest.outputs = root.at("outputs").get<std::vector<std::string>>();
  } catch (const Json::exception& err) {
    throw ConfigError("manifest", err.what());
  }
  return manifest;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  open_for_write(path) << manifest_to_json_text(manifest);
}

RunManifest load_manifest(const std::string& path) {
  return manifest_from_json_text(slurp(path));
}

HeaderBlock config_header(const ExperimentConfig& config) {
  HeaderBlock header;
  const Json object = config_to_json(config);
  for (const auto& [key, value] : object.items())
    header.emplace_back(key, value.is_number_integer()
                                 ? std::to_string(value.get<long long>())
                                 : format_double(value.get<double>()));
  return header;
}

namespace {

void write_header_block(const HeaderBlock& header, std::ostream& out) {
  for (const auto& [key, value] : header)
    out << "# " << key << " = " << value << "\n";
}

void write_row(const std::vector<std::string>& cells, std::ostream& out) {
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out << ",";
    out << cells[k];
  }
  out << "\n";
}

}  // namespace

void write_table_csv(const SweepTable& table, const HeaderBlock& header,
                     std::ostream& out) {
  write_header_block(header, out);
  write_row(table.columns, out);
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::logic_error("table row width does not match column count");
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (double value : row) cells.push_back(format_double(value));
    write_row(cells, out);
  }
}

void write_table_csv(const SweepTable& table, const HeaderBlock& header,
                     const std::string& path) {
  std::ofstream out = open_for_write(path);
  write_table_csv(table, header, out);
}

void write_confidence_csv(const std::vector<CurvePoint>& curve,
                          const ExperimentConfig& config,
                          const TrialSettings& settings,
                          const HeaderBlock& header, std::ostream& out) {
  write_header_block(header, out);
  write_row({"M", "mean_confidence", "std_confidence", "W_mean", "s_W_mean",
             "mode", "D", "gamma", "tau", "seed"},
            out);
  for (const CurvePoint& point : curve)
    write_row({std::to_string(point.shots),
               format_double(point.mean_confidence),
               format_double(point.std_confidence),
               format_double(point.mean_estimate),
               format_double(point.mean_std_error),
               sample_mode_name(settings.mode),
               std::to_string(config.dimension),
               format_double(config.decoherence_rate),
               format_double(config.hold_time),
               std::to_string(settings.seed)},
              out);
}

void write_confidence_csv(const std::vector<CurvePoint>& curve,
                          const ExperimentConfig& config,
                          const TrialSettings& settings,
                          const HeaderBlock& header, const std::string& path) {
  std::ofstream out = open_for_write(path);
  write_confidence_csv(curve, config, settings, header, out);
}

std::string decomposition_to_json_text(
    const WitnessDecomposition& decomp,
    const std::vector<MeasurementGroup>* groups) {
  Json root;
  root["dimension"] = decomp.dimension;
  root["epsilon_abs"] = decomp.epsilon_abs;
  root["total_weight"] = decomp.total_weight;
  Json terms = Json::array();
  for (const WitnessTerm& term : decomp.terms)
    terms.push_back(Json{{"i", term.i},
                         {"j", term.j},
                         {"c", term.coefficient}});
  root["terms"] = std::move(terms);
  if (groups) {
    Json list = Json::array();
    for (const MeasurementGroup& group : *groups)
      list.push_back(Json{{"members", group.members},
                          {"weight", group.weight}});
    root["groups"] = std::move(list);
  }
  return root.dump(2) + "\n";
}

std::string trial_to_json_text(const TrialResult& trial,
                               const ExperimentConfig& config,
                               const TrialSettings& settings) {
  Json root;
  root["shots"] = trial.shots;
  root["mode"] = sample_mode_name(trial.mode);
  root["witness"] = witness_kind_name(settings.kind);
  root["dimension"] = config.dimension;
  root["gamma"] = config.decoherence_rate;
  root["tau"] = config.hold_time;
  root["seed"] = settings.seed;
  root["repetitions"] = static_cast<int>(trial.reports.size());
  root["mean_confidence"] = trial.mean_confidence;
  root["std_confidence"] = trial.std_confidence;
  root["mean_estimate"] = trial.mean_estimate;
  root["mean_std_error"] = trial.mean_std_error;
  Json reports = Json::array();
  for (const ConfidenceReport& report : trial.reports)
    reports.push_back(Json{{"estimate", report.estimate},
                           {"variance", report.variance},
                           {"std_error", report.std_error},
                           {"avg_shots", report.avg_shots},
                           {"t_value", report.t_value},
                           {"confidence", report.confidence},
                           {"ci_level", report.ci_level},
                           {"ci_low", report.ci_low},
                           {"ci_high", report.ci_high}});
  root["reports"] = std::move(reports);
  return root.dump(2) + "\n";
}

}  // namespace qgem
