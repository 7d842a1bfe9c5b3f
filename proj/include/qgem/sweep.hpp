#pragma once

// Parameter sweeps over the single-point pipeline.  Every cell is an
// independent evaluation keyed by its grid coordinates; a cell at a special
// point equals the corresponding direct module call.

#include <cstdint>
#include <string>
#include <vector>

#include "qgem/shots.hpp"

namespace qgem {

struct GridSpec {
  double min = 0.0;
  double max = 1.0;
  int points = 51;
  bool log_scale = false;

  std::vector<double> values() const;
};

enum class Metric { entropy, witness_expectation };

struct SweepSpec {
  ExperimentConfig config;          // base; dimension overridden per entry
  std::vector<int> dimensions;      // defaults to {config.dimension}
  GridSpec grid;
  Metric metric = Metric::entropy;
  WitnessKind witness = WitnessKind::ppt;

  std::vector<int> dims_or_default() const;
};

struct SweepTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// (tau_s, D, value); entropy mode requires decoherence_rate = 0, witness
// mode evaluates the tau-matched witness against the decohered state.
// Cells without a witness (e.g. tau = 0) hold NaN.
SweepTable time_sweep(const SweepSpec& spec);

// (gamma_hz, D, expectation) at fixed config.hold_time.
SweepTable decoherence_sweep(const SweepSpec& spec);

// Entanglement entropy over both arm angles; configurations where any
// instance pair comes closer than min_distance are masked (NaN, valid = 0).
// The default 101-point axes span [0, 2*pi] inclusive so the named setups
// lie exactly on grid cells.
struct HeatmapResult {
  Eigen::VectorXd theta_1;  // grid values [rad]
  Eigen::VectorXd theta_2;
  Eigen::MatrixXd entropy;        // rows: theta_1, cols: theta_2; NaN masked
  Eigen::Matrix<char, Eigen::Dynamic, Eigen::Dynamic> valid;

  SweepTable to_table() const;  // (theta1_rad, theta2_rad, entropy_bits, valid)
};

HeatmapResult angle_heatmap(const ExperimentConfig& config, int points = 101);

// Unscaled: (delta_x_m, D, entropy_bits) over a width grid at fixed tau.
// Scaled: (tau_s, D, entropy_bits) with the width enlarged per dimension,
// delta_x(D) = scale_factor * (D - 1) * config.superposition_width, keeping
// the spacing between adjacent instances constant.
SweepTable width_sweep(const SweepSpec& spec, bool scaled,
                       double scale_factor = 1.0);

// (tau_s, gamma_hz, D, expectation): witness rebuilt at every tau, then
// evaluated under each dephasing rate.
SweepTable runtime_tradeoff(const SweepSpec& spec,
                            const std::vector<double>& tau_values);

struct CurvePoint {
  long long shots = 0;
  double mean_confidence = 0.0;
  double std_confidence = 0.0;
  double mean_estimate = 0.0;
  double mean_std_error = 0.0;
};

// Mean detection confidence versus total measurement budget on a
// log-spaced grid (default resolution 25 points per decade).  The campaign
// is prepared once and re-run per budget.
std::vector<CurvePoint> measurement_curve(const ExperimentConfig& config,
                                          const TrialSettings& settings,
                                          long long budget_min,
                                          long long budget_max,
                                          int points_per_decade = 25);

std::vector<long long> budget_grid(long long budget_min, long long budget_max,
                                   int points_per_decade);

}  // namespace qgem
