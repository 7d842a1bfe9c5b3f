#include "qgem/sweep.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qgem {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::vector<double> GridSpec::values() const {
  if (points < 1) throw std::invalid_argument("grid: points must be >= 1");
  if (points == 1) return {min};
  if (log_scale && !(min > 0.0))
    throw std::invalid_argument("grid: log scale needs min > 0");
  std::vector<double> out(points);
  for (int k = 0; k < points; ++k) {
    const double f = double(k) / double(points - 1);
    out[k] = log_scale ? min * std::pow(max / min, f)
                       : min + f * (max - min);
  }
  return out;
}

std::vector<int> SweepSpec::dims_or_default() const {
  return dimensions.empty() ? std::vector<int>{config.dimension} : dimensions;
}

namespace {

double witness_value_at(const ExperimentConfig& config, WitnessKind kind) {
  const auto witness = make_witness(config, kind);
  if (!witness) return kNaN;
  return witness_expectation(*witness, make_density(config));
}

}  // namespace

SweepTable time_sweep(const SweepSpec& spec) {
  if (spec.metric == Metric::entropy && spec.config.decoherence_rate > 0.0)
    throw std::invalid_argument(
        "time_sweep: entropy is defined for the dephasing-free state only");
  SweepTable table;
  table.columns = {"tau_s", "D",
                   spec.metric == Metric::entropy ? "entropy_bits"
                                                  : "expectation"};
  for (double tau : spec.grid.values()) {
    for (int dim : spec.dims_or_default()) {
      ExperimentConfig config = spec.config;
      config.dimension = dim;
      config.hold_time = tau;
      double value;
      if (spec.metric == Metric::entropy) {
        value = entanglement_entropy(make_density(config));
      } else {
        value = witness_value_at(config, spec.witness);
      }
      table.rows.push_back({tau, double(dim), value});
    }
  }
  return table;
}

SweepTable decoherence_sweep(const SweepSpec& spec) {
  SweepTable table;
  table.columns = {"gamma_hz", "D", "expectation"};
  for (int dim : spec.dims_or_default()) {
    ExperimentConfig config = spec.config;
    config.dimension = dim;
    config.decoherence_rate = 0.0;
    const auto witness = make_witness(config, spec.witness);
    const DensityMatrix pure = make_density(config);
    for (double gamma : spec.grid.values()) {
      double value = kNaN;
      if (witness) {
        const DensityMatrix rho =
            apply_decoherence(pure, gamma, config.hold_time);
        value = witness_expectation(*witness, rho);
      }
      table.rows.push_back({gamma, double(dim), value});
    }
  }
  return table;
}

HeatmapResult angle_heatmap(const ExperimentConfig& config, int points) {
  if (points < 2) throw std::invalid_argument("angle_heatmap: points >= 2");
  HeatmapResult result;
  result.theta_1.resize(points);
  result.theta_2.resize(points);
  for (int k = 0; k < points; ++k) {
    // inclusive span of [0, 2*pi]; the final column wraps onto 0
    result.theta_1(k) = 2.0 * kPi * double(k) / double(points - 1);
    result.theta_2(k) = result.theta_1(k);
  }
  result.entropy.setConstant(points, points, kNaN);
  result.valid.setZero(points, points);

  for (int a = 0; a < points; ++a) {
    for (int b = 0; b < points; ++b) {
      ExperimentConfig cell = config;
      cell.decoherence_rate = 0.0;
      cell.theta_1 = std::fmod(result.theta_1(a), 2.0 * kPi);
      cell.theta_2 = std::fmod(result.theta_2(b), 2.0 * kPi);
      const DistanceMatrix distances = distance_matrix(cell);
      if (!validate_geometry(distances, cell).ok) continue;
      result.valid(a, b) = 1;
      result.entropy(a, b) = entanglement_entropy(
          density_matrix(superposed_state(phase_matrix(distances, cell))));
    }
  }
  return result;
}

SweepTable HeatmapResult::to_table() const {
  SweepTable table;
  table.columns = {"theta1_rad", "theta2_rad", "entropy_bits", "valid"};
  for (int a = 0; a < theta_1.size(); ++a)
    for (int b = 0; b < theta_2.size(); ++b)
      table.rows.push_back(
          {theta_1(a), theta_2(b), entropy(a, b), double(valid(a, b))});
  return table;
}

SweepTable width_sweep(const SweepSpec& spec, bool scaled,
                       double scale_factor) {
  if (!(scale_factor > 0.0))
    throw std::invalid_argument("width_sweep: scale factor must be > 0");
  SweepTable table;
  if (!scaled) {
    table.columns = {"delta_x_m", "D", "entropy_bits"};
    for (double width : spec.grid.values()) {
      for (int dim : spec.dims_or_default()) {
        ExperimentConfig config = spec.config;
        config.dimension = dim;
        config.decoherence_rate = 0.0;
        config.superposition_width = width;
        table.rows.push_back(
            {width, double(dim), entanglement_entropy(make_density(config))});
      }
    }
    return table;
  }
  table.columns = {"tau_s", "D", "entropy_bits"};
  for (double tau : spec.grid.values()) {
    for (int dim : spec.dims_or_default()) {
      ExperimentConfig config = spec.config;
      config.dimension = dim;
      config.decoherence_rate = 0.0;
      config.hold_time = tau;
      config.superposition_width =
          scale_factor * (dim - 1) * spec.config.superposition_width;
      table.rows.push_back(
          {tau, double(dim), entanglement_entropy(make_density(config))});
    }
  }
  return table;
}

SweepTable runtime_tradeoff(const SweepSpec& spec,
                            const std::vector<double>& tau_values) {
  SweepTable table;
  table.columns = {"tau_s", "gamma_hz", "D", "expectation"};
  for (double tau : tau_values) {
    for (int dim : spec.dims_or_default()) {
      ExperimentConfig config = spec.config;
      config.dimension = dim;
      config.hold_time = tau;
      config.decoherence_rate = 0.0;
      const auto witness = make_witness(config, spec.witness);
      const DensityMatrix pure = make_density(config);
      for (double gamma : spec.grid.values()) {
        double value = kNaN;
        if (witness)
          value = witness_expectation(
              *witness, apply_decoherence(pure, gamma, tau));
        table.rows.push_back({tau, gamma, double(dim), value});
      }
    }
  }
  return table;
}

std::vector<long long> budget_grid(long long budget_min, long long budget_max,
                                   int points_per_decade) {
  if (budget_min < 1 || budget_max < budget_min || points_per_decade < 1)
    throw std::invalid_argument("budget_grid: bad range");
  std::vector<long long> grid;
  const double step = std::pow(10.0, 1.0 / points_per_decade);
  for (double m = double(budget_min); m <= double(budget_max) * (1 + 1e-12);
       m *= step) {
    const long long shots = llround(m);
    if (grid.empty() || shots > grid.back()) grid.push_back(shots);
  }
  if (grid.empty() || grid.back() < budget_max) grid.push_back(budget_max);
  return grid;
}

std::vector<CurvePoint> measurement_curve(const ExperimentConfig& config,
                                          const TrialSettings& settings,
                                          long long budget_min,
                                          long long budget_max,
                                          int points_per_decade) {
  const auto witness = make_witness(config, settings.kind);
  if (!witness)
    throw std::domain_error(
        "measurement_curve: configuration admits no witness");
  const auto basis = gell_mann_basis(config.dimension);
  const auto decomp = decompose_witness(*witness, settings.epsilon_rel);
  const DensityMatrix rho = make_density(config);
  Campaign campaign;
  if (settings.mode == SampleMode::per_term) {
    campaign = prepare_term_campaign(decomp, basis, rho);
  } else {
    const auto graph = commutation_graph(decomp, basis);
    campaign = prepare_group_campaign(
        decomp, basis, group_terms_ldfc(graph, decomp, basis), rho);
  }

  const long long floor_budget =
      2 * static_cast<long long>(campaign.units.size());
  std::vector<CurvePoint> curve;
  for (long long shots :
       budget_grid(std::max(budget_min, floor_budget), budget_max,
                   points_per_decade)) {
    const TrialResult trial = run_campaign_trial(
        campaign, shots, settings.repetitions, settings.seed,
        settings.ci_level);
    curve.push_back({shots, trial.mean_confidence, trial.std_confidence,
                     trial.mean_estimate, trial.mean_std_error});
  }
  return curve;
}

}  // namespace qgem
