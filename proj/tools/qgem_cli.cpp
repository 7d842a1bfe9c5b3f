// Command-line front end.  Every subcommand resolves one ExperimentConfig
// (preset -> config file -> flag overrides), runs a single library
// operation, writes CSV/JSON results plus a replayable run manifest, and
// exits 0 on success, 2 on configuration errors, 3 on numerical failures.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qgem/basis.hpp"
#include "qgem/io.hpp"
#include "qgem/sweep.hpp"

namespace fs = std::filesystem;
using namespace qgem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

// Scalar flags are kept as raw strings so unit suffixes ("250um", "2.5s")
// pass through parse_quantity with the flag name attached to any error.
struct ConfigFlags {
  std::string setup = "parallel";
  int dimension = 2;
  std::string tau, gamma, delta_x, distance, mass, theta1, theta2;
  std::string config_path;
};

double parse_field(const std::string& text, const char* field) {
  try {
    return parse_quantity(text);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(field, err.what());
  }
}

ExperimentConfig resolve_config(const CLI::App* sub, const ConfigFlags& flags) {
  ExperimentConfig config;
  const bool have_file = !flags.config_path.empty();
  if (have_file) {
    config = load_config(flags.config_path);
    if (sub->count("--setup")) {
      const ExperimentConfig preset =
          ExperimentConfig::preset(parse_setup(flags.setup));
      config.theta_1 = preset.theta_1;
      config.theta_2 = preset.theta_2;
    }
  } else {
    config = ExperimentConfig::preset(parse_setup(flags.setup));
  }
  if (sub->count("--dimension")) config.dimension = flags.dimension;
  if (!flags.tau.empty()) config.hold_time = parse_field(flags.tau, "tau");
  if (!flags.gamma.empty())
    config.decoherence_rate = parse_field(flags.gamma, "gamma");
  if (!flags.delta_x.empty())
    config.superposition_width = parse_field(flags.delta_x, "delta-x");
  if (!flags.distance.empty())
    config.min_distance = parse_field(flags.distance, "distance");
  if (!flags.mass.empty())
    config.mass_1 = config.mass_2 = parse_field(flags.mass, "mass");
  if (!flags.theta1.empty()) config.theta_1 = parse_field(flags.theta1, "theta1");
  if (!flags.theta2.empty()) config.theta_2 = parse_field(flags.theta2, "theta2");
  config.validate();
  return config;
}

// Fully resolved subcommand parameters; the manifest stores these verbatim
// so a replay needs no defaulting logic.
struct Knobs {
  std::vector<int> dims;
  double grid_min = 0.0;
  double grid_max = 0.0;
  int grid_points = 0;
  bool log_grid = false;
  int heatmap_points = 101;
  bool scaled = false;
  double scale_factor = 1.0;
  std::vector<double> tau_values;
  WitnessKind witness = WitnessKind::ppt;
  bool grouped = false;
  double epsilon = 1e-8;
  long long shots = 0;
  long long budget_min = 0;
  long long budget_max = 0;
  int points_per_decade = 25;
  int reps = 100;
  std::uint64_t seed = 0;
};

std::string join_csv(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += ",";
    out += parts[k];
  }
  return out;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t end = text.find(',', begin);
    if (end == std::string::npos) {
      parts.push_back(text.substr(begin));
      break;
    }
    parts.push_back(text.substr(begin, end - begin));
    begin = end + 1;
  }
  return parts;
}

HeaderBlock knobs_to_options(const std::string& sub, const Knobs& knobs) {
  HeaderBlock options;
  const auto put = [&options](const char* key, const std::string& value) {
    options.emplace_back(key, value);
  };
  const bool has_grid = sub == "entropy" || sub == "deco-sweep" ||
                        sub == "width-sweep" || sub == "tradeoff";
  const bool has_dims = has_grid;
  const bool has_witness = sub == "witness" || sub == "deco-sweep" ||
                           sub == "tradeoff" || sub == "decompose" ||
                           sub == "group" || sub == "simulate";
  if (has_dims) {
    std::vector<std::string> dims;
    for (int dim : knobs.dims) dims.push_back(std::to_string(dim));
    put("dims", join_csv(dims));
  }
  if (has_grid) {
    put("grid_min", format_double(knobs.grid_min));
    put("grid_max", format_double(knobs.grid_max));
    put("grid_points", std::to_string(knobs.grid_points));
    put("log_grid", knobs.log_grid ? "1" : "0");
  }
  if (sub == "heatmap") put("heatmap_points", std::to_string(knobs.heatmap_points));
  if (sub == "width-sweep") {
    put("scaled", knobs.scaled ? "1" : "0");
    put("scale_factor", format_double(knobs.scale_factor));
  }
  if (sub == "tradeoff") {
    std::vector<std::string> taus;
    for (double tau : knobs.tau_values) taus.push_back(format_double(tau));
    put("tau_values", join_csv(taus));
  }
  if (has_witness) put("witness", witness_kind_name(knobs.witness));
  if (sub == "decompose" || sub == "group" || sub == "simulate")
    put("epsilon", format_double(knobs.epsilon));
  if (sub == "simulate") {
    put("grouped", knobs.grouped ? "1" : "0");
    put("shots", std::to_string(knobs.shots));
    put("budget_min", std::to_string(knobs.budget_min));
    put("budget_max", std::to_string(knobs.budget_max));
    put("points_per_decade", std::to_string(knobs.points_per_decade));
    put("reps", std::to_string(knobs.reps));
  }
  return options;
}

Knobs knobs_from_options(const HeaderBlock& options) {
  Knobs knobs;
  for (const auto& [key, value] : options) {
    if (key == "dims") {
      knobs.dims.clear();
      for (const std::string& part : split_csv(value))
        knobs.dims.push_back(std::stoi(part));
    } else if (key == "grid_min") {
      knobs.grid_min = std::stod(value);
    } else if (key == "grid_max") {
      knobs.grid_max = std::stod(value);
    } else if (key == "grid_points") {
      knobs.grid_points = std::stoi(value);
    } else if (key == "log_grid") {
      knobs.log_grid = value == "1";
    } else if (key == "heatmap_points") {
      knobs.heatmap_points = std::stoi(value);
    } else if (key == "scaled") {
      knobs.scaled = value == "1";
    } else if (key == "scale_factor") {
      knobs.scale_factor = std::stod(value);
    } else if (key == "tau_values") {
      knobs.tau_values.clear();
      for (const std::string& part : split_csv(value))
        knobs.tau_values.push_back(std::stod(part));
    } else if (key == "witness") {
      knobs.witness = parse_witness_kind(value);
    } else if (key == "grouped") {
      knobs.grouped = value == "1";
    } else if (key == "epsilon") {
      knobs.epsilon = std::stod(value);
    } else if (key == "shots") {
      knobs.shots = std::stoll(value);
    } else if (key == "budget_min") {
      knobs.budget_min = std::stoll(value);
    } else if (key == "budget_max") {
      knobs.budget_max = std::stoll(value);
    } else if (key == "points_per_decade") {
      knobs.points_per_decade = std::stoi(value);
    } else if (key == "reps") {
      knobs.reps = std::stoi(value);
    } else {
      throw ConfigError(key, "unknown manifest option");
    }
  }
  return knobs;
}

HeaderBlock csv_header(const RunManifest& manifest) {
  HeaderBlock header;
  header.emplace_back("tool_version", manifest.tool_version);
  header.emplace_back("subcommand", manifest.subcommand);
  header.emplace_back("timestamp", manifest.timestamp);
  header.emplace_back("seed", std::to_string(manifest.seed));
  for (const auto& entry : config_header(manifest.config)) header.push_back(entry);
  for (const auto& entry : manifest.options) header.push_back(entry);
  return header;
}

SweepSpec make_spec(const ExperimentConfig& config, const Knobs& knobs) {
  SweepSpec spec;
  spec.config = config;
  spec.dimensions = knobs.dims;
  spec.grid = {knobs.grid_min, knobs.grid_max, knobs.grid_points,
               knobs.log_grid};
  spec.witness = knobs.witness;
  return spec;
}

const Witness& require_witness(const std::optional<Witness>& witness) {
  if (!witness)
    throw std::domain_error(
        "the configured state has a positive partial transpose; no witness "
        "can be built (try tau > 0 and a nonzero superposition width)");
  return *witness;
}

// Runs one resolved subcommand, writing outputs into out_dir; returns the
// output file names for the manifest.
std::vector<std::string> execute(const std::string& sub,
                                 const ExperimentConfig& config,
                                 const Knobs& knobs, const fs::path& out_dir,
                                 const HeaderBlock& header) {
  if (sub == "entropy") {
    SweepSpec spec = make_spec(config, knobs);
    spec.metric = Metric::entropy;
    const SweepTable table = time_sweep(spec);
    write_table_csv(table, header, (out_dir / "entropy.csv").string());
    for (int dim : spec.dims_or_default()) {
      ExperimentConfig at = config;
      at.dimension = dim;
      std::printf("S(D=%d, tau=%gs) = %.4f bits\n", dim, config.hold_time,
                  entanglement_entropy(make_density(at)));
    }
    return {"entropy.csv"};
  }

  if (sub == "witness") {
    const auto witness = make_witness(config, knobs.witness);
    const Witness& w = require_witness(witness);
    const double value = witness_expectation(w, make_density(config));
    SweepTable table;
    table.columns = {"tau_s", "gamma_hz", "D", "expectation",
                     "negative_eigenvalue", "schmidt_max"};
    table.rows.push_back({config.hold_time, config.decoherence_rate,
                          double(config.dimension), value,
                          w.negative_eigenvalue, w.schmidt_max});
    write_table_csv(table, header, (out_dir / "witness.csv").string());
    std::printf("<W> = %.6f (%s, D=%d, gamma=%g, tau=%gs)\n", value,
                witness_kind_name(knobs.witness).c_str(), config.dimension,
                config.decoherence_rate, config.hold_time);
    return {"witness.csv"};
  }

  if (sub == "deco-sweep") {
    SweepSpec spec = make_spec(config, knobs);
    spec.metric = Metric::witness_expectation;
    const SweepTable table = decoherence_sweep(spec);
    write_table_csv(table, header, (out_dir / "deco_sweep.csv").string());
    std::printf("deco_sweep.csv: %zu rows\n", table.rows.size());
    return {"deco_sweep.csv"};
  }

  if (sub == "heatmap") {
    const HeatmapResult result = angle_heatmap(config, knobs.heatmap_points);
    const SweepTable table = result.to_table();
    write_table_csv(table, header, (out_dir / "heatmap.csv").string());
    std::printf("heatmap.csv: %zu cells (%lld valid)\n", table.rows.size(),
                static_cast<long long>(result.valid.cast<int>().sum()));
    return {"heatmap.csv"};
  }

  if (sub == "width-sweep") {
    SweepSpec spec = make_spec(config, knobs);
    spec.metric = Metric::entropy;
    const SweepTable table = width_sweep(spec, knobs.scaled, knobs.scale_factor);
    write_table_csv(table, header, (out_dir / "width_sweep.csv").string());
    std::printf("width_sweep.csv: %zu rows (%s)\n", table.rows.size(),
                knobs.scaled ? "scaled" : "unscaled");
    return {"width_sweep.csv"};
  }

  if (sub == "tradeoff") {
    SweepSpec spec = make_spec(config, knobs);
    spec.metric = Metric::witness_expectation;
    const SweepTable table = runtime_tradeoff(spec, knobs.tau_values);
    write_table_csv(table, header, (out_dir / "tradeoff.csv").string());
    std::printf("tradeoff.csv: %zu rows\n", table.rows.size());
    return {"tradeoff.csv"};
  }

  if (sub == "decompose" || sub == "group") {
    const auto witness = make_witness(config, knobs.witness);
    const auto decomp = decompose_witness(require_witness(witness), knobs.epsilon);
    const auto basis = gell_mann_basis(config.dimension);
    std::string text;
    if (sub == "group") {
      const auto graph = commutation_graph(decomp, basis);
      const auto groups = group_terms_ldfc(graph, decomp, basis);
      text = decomposition_to_json_text(decomp, &groups);
      std::printf("%zu terms -> %zu groups (D=%d, %s)\n", decomp.terms.size(),
                  groups.size(), config.dimension,
                  witness_kind_name(knobs.witness).c_str());
    } else {
      text = decomposition_to_json_text(decomp, nullptr);
      std::printf("%zu terms (D=%d, %s)\n", decomp.terms.size(),
                  config.dimension, witness_kind_name(knobs.witness).c_str());
    }
    std::ofstream out((out_dir / "witness_terms.json").string());
    if (!out)
      throw std::runtime_error("cannot write '" +
                               (out_dir / "witness_terms.json").string() + "'");
    out << text;
    return {"witness_terms.json"};
  }

  if (sub == "simulate") {
    TrialSettings settings;
    settings.kind = knobs.witness;
    settings.mode = knobs.grouped ? SampleMode::grouped : SampleMode::per_term;
    settings.shots = knobs.shots;
    settings.repetitions = knobs.reps;
    settings.seed = knobs.seed;
    settings.epsilon_rel = knobs.epsilon;

    std::vector<std::string> outputs;
    std::vector<CurvePoint> curve;
    if (knobs.budget_max > 0) {
      curve = measurement_curve(config, settings, knobs.budget_min,
                                knobs.budget_max, knobs.points_per_decade);
    } else {
      const TrialResult trial = run_trial(config, settings);
      curve.push_back({trial.shots, trial.mean_confidence,
                       trial.std_confidence, trial.mean_estimate,
                       trial.mean_std_error});
      std::ofstream out((out_dir / "trial.json").string());
      if (!out)
        throw std::runtime_error("cannot write '" +
                                 (out_dir / "trial.json").string() + "'");
      out << trial_to_json_text(trial, config, settings);
      outputs.push_back("trial.json");
    }
    write_confidence_csv(curve, config, settings, header,
                         (out_dir / "confidence.csv").string());
    outputs.insert(outputs.begin(), "confidence.csv");
    for (const CurvePoint& point : curve)
      std::printf("M=%lld: confidence %.4f +- %.4f (W %.5f +- %.5f)\n",
                  point.shots, point.mean_confidence, point.std_confidence,
                  point.mean_estimate, point.mean_std_error);
    return outputs;
  }

  throw std::logic_error("unhandled subcommand '" + sub + "'");
}

fs::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("QGEM_OUT_DIR"); env && *env) return env;
  return ".";
}

int run_resolved(const std::string& sub, const ExperimentConfig& config,
                 const Knobs& knobs, const fs::path& out_dir) {
  fs::create_directories(out_dir);

  RunManifest manifest;
  manifest.subcommand = sub;
  manifest.config = config;
  manifest.seed = knobs.seed;
  manifest.options = knobs_to_options(sub, knobs);
  manifest.timestamp = current_timestamp_utc();

  manifest.outputs = execute(sub, config, knobs, out_dir, csv_header(manifest));

  std::string manifest_name = sub + "_manifest.json";
  for (char& c : manifest_name)
    if (c == '-') c = '_';
  write_manifest(manifest, (out_dir / manifest_name).string());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-qudit gravitational entanglement simulator"};
  app.require_subcommand(1);

  ConfigFlags flags;
  Knobs knobs;
  std::string out_flag;
  std::string manifest_path;

  // raw flag storage; resolved into `knobs` after parsing
  std::string grid_min_text, grid_max_text;
  std::vector<std::string> tau_values_text;
  std::string witness_text = "ppt";

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--setup", flags.setup,
                    "named geometry: parallel, linear, or custom");
    sub->add_option("--dimension", flags.dimension,
                    "superposition instances per mass (>= 2)");
    sub->add_option("--tau", flags.tau, "hold time, e.g. 2.5 or 2500ms");
    sub->add_option("--gamma", flags.gamma, "dephasing rate, e.g. 0.05Hz");
    sub->add_option("--delta-x", flags.delta_x,
                    "superposition width, e.g. 250um");
    sub->add_option("--distance", flags.distance,
                    "closest approach d, e.g. 200um");
    sub->add_option("--mass", flags.mass, "both masses, e.g. 1e-14kg");
    sub->add_option("--theta1", flags.theta1, "arm angle of mass 1 [rad]");
    sub->add_option("--theta2", flags.theta2, "arm angle of mass 2 [rad]");
    sub->add_option("--config", flags.config_path,
                    "JSON config file (flags override file values)");
    sub->add_option("--out", out_flag,
                    "output directory (default: $QGEM_OUT_DIR or .)");
    return sub;
  };
  const auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--dims", knobs.dims, "dimensions to sweep, e.g. 2,3,6")
        ->delimiter(',');
    sub->add_option("--grid-min", grid_min_text, "sweep grid lower edge");
    sub->add_option("--grid-max", grid_max_text, "sweep grid upper edge");
    sub->add_option("--grid-points", knobs.grid_points, "sweep grid size");
    sub->add_flag("--log-grid", knobs.log_grid, "log-spaced sweep grid");
  };
  const auto add_witness_kind = [&](CLI::App* sub) {
    sub->add_option("--witness", witness_text, "witness kind: ppt or vicinity");
  };

  CLI::App* entropy = add_common(
      app.add_subcommand("entropy", "entanglement entropy vs hold time"));
  add_grid(entropy);

  CLI::App* witness = add_common(app.add_subcommand(
      "witness", "witness expectation at one configuration"));
  add_witness_kind(witness);

  CLI::App* deco = add_common(app.add_subcommand(
      "deco-sweep", "witness expectation vs dephasing rate"));
  add_grid(deco);
  add_witness_kind(deco);

  CLI::App* heatmap = add_common(app.add_subcommand(
      "heatmap", "entropy over both arm angles with validity mask"));
  heatmap->add_option("--points", knobs.heatmap_points,
                      "grid points per angle axis");

  CLI::App* width = add_common(app.add_subcommand(
      "width-sweep", "entropy vs superposition width"));
  add_grid(width);
  width->add_flag("--scaled", knobs.scaled,
                  "scale width by (D-1) and sweep hold time instead");
  width->add_option("--scale-factor", knobs.scale_factor,
                    "width multiplier in scaled mode");

  CLI::App* tradeoff = add_common(app.add_subcommand(
      "tradeoff", "witness expectation vs dephasing rate per hold time"));
  add_grid(tradeoff);
  add_witness_kind(tradeoff);
  tradeoff->add_option("--tau-values", tau_values_text,
                       "hold times to compare, e.g. 1.5,2.5,3.5")
      ->delimiter(',');

  CLI::App* decompose = add_common(app.add_subcommand(
      "decompose", "witness expansion over the Hermitian operator basis"));
  add_witness_kind(decompose);
  decompose->add_option("--epsilon", knobs.epsilon,
                        "relative coefficient drop threshold");

  CLI::App* group = add_common(app.add_subcommand(
      "group", "partition witness terms into commuting groups"));
  add_witness_kind(group);
  group->add_option("--epsilon", knobs.epsilon,
                    "relative coefficient drop threshold");

  CLI::App* simulate = add_common(app.add_subcommand(
      "simulate", "finite-shot measurement campaign"));
  add_witness_kind(simulate);
  simulate->add_option("--epsilon", knobs.epsilon,
                       "relative coefficient drop threshold");
  simulate->add_flag("--grouped", knobs.grouped,
                     "measure commuting groups instead of single terms");
  const auto add_budget = [&](const char* flag, long long& target,
                              const char* help) {
    // accepts 500, 2000000, or 2e6
    simulate->add_option_function<double>(
        flag,
        [&target, flag](double value) {
          if (!(value >= 0) || value > 9.2e18)
            throw CLI::ValidationError(flag, "budget out of range");
          target = std::llround(value);
        },
        help);
  };
  add_budget("--shots", knobs.shots, "total measurement budget M");
  add_budget("--budget-min", knobs.budget_min,
             "sweep budgets from here instead of a single M");
  add_budget("--budget-max", knobs.budget_max, "sweep budgets up to here");
  simulate->add_option("--points-per-decade", knobs.points_per_decade,
                       "budget sweep resolution");
  simulate->add_option("--reps", knobs.reps, "independent campaign repetitions");
  simulate->add_option("--seed", knobs.seed, "RNG seed (required)")
      ->required();

  CLI::App* replay = app.add_subcommand(
      "replay", "re-run a previously written manifest");
  replay->add_option("--manifest", manifest_path, "manifest JSON path")
      ->required();
  replay->add_option("--out", out_flag,
                     "output directory (default: $QGEM_OUT_DIR or .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  try {
    if (name == "replay") {
      const RunManifest manifest = load_manifest(manifest_path);
      if (manifest.subcommand == "replay")
        throw ConfigError("manifest", "cannot replay a replay");
      Knobs replayed = knobs_from_options(manifest.options);
      replayed.seed = manifest.seed;
      return run_resolved(manifest.subcommand, manifest.config, replayed,
                          resolve_out_dir(out_flag));
    }

    ExperimentConfig config = resolve_config(sub, flags);
    knobs.witness = parse_witness_kind(witness_text);
    if (knobs.dims.empty()) knobs.dims = {config.dimension};

    // grid defaults per subcommand; explicit flags win
    double grid_min = 0.0, grid_max = 0.0;
    int default_points = 0;
    if (name == "entropy") {
      grid_max = config.hold_time;
      default_points = 26;
    } else if (name == "deco-sweep") {
      grid_max = 0.15;
      default_points = 31;
    } else if (name == "width-sweep") {
      if (knobs.scaled) {
        grid_max = config.hold_time;
        default_points = 26;
      } else {
        grid_min = 50e-6;
        grid_max = 500e-6;
        default_points = 46;
      }
    } else if (name == "tradeoff") {
      grid_max = 0.3;
      default_points = 61;
    }
    knobs.grid_min = grid_min_text.empty()
                         ? grid_min
                         : parse_field(grid_min_text, "grid-min");
    knobs.grid_max = grid_max_text.empty()
                         ? grid_max
                         : parse_field(grid_max_text, "grid-max");
    if (knobs.grid_points <= 0) knobs.grid_points = default_points;

    if (name == "tradeoff") {
      if (tau_values_text.empty()) {
        knobs.tau_values = {1.5, 2.5, 3.5};
      } else {
        knobs.tau_values.clear();
        for (const std::string& text : tau_values_text)
          knobs.tau_values.push_back(parse_field(text, "tau-values"));
      }
    }

    if (name == "simulate" && knobs.budget_max <= 0 && knobs.shots <= 0)
      throw ConfigError("shots",
                        "simulate needs --shots or --budget-min/--budget-max");

    return run_resolved(name, config, knobs, resolve_out_dir(out_flag));
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitNumerical;
  }
}
