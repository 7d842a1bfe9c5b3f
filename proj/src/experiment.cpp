#include "qgem/experiment.hpp"

#include <algorithm>
#include <cmath>

namespace qgem {

void ExperimentConfig::validate() const {
  const auto reject = [](const char* field, const std::string& why) {
    throw ConfigError(field, why);
  };
  if (dimension < 2) reject("dimension", "must be an integer >= 2");
  if (!(superposition_width >= 0.0) || !std::isfinite(superposition_width))
    reject("superposition_width", "must be a finite length >= 0");
  if (!(min_distance > 0.0) || !std::isfinite(min_distance))
    reject("min_distance", "must be a finite length > 0");
  if (!(mass_1 > 0.0) || !std::isfinite(mass_1))
    reject("mass_1", "must be a finite mass > 0");
  if (!(mass_2 > 0.0) || !std::isfinite(mass_2))
    reject("mass_2", "must be a finite mass > 0");
  if (!(hold_time >= 0.0) || !std::isfinite(hold_time))
    reject("hold_time", "must be a finite time >= 0");
  if (!(decoherence_rate >= 0.0) || !std::isfinite(decoherence_rate))
    reject("decoherence_rate", "must be a finite rate >= 0");
  if (!std::isfinite(theta_1) || theta_1 < 0.0 || theta_1 >= 2.0 * kPi)
    reject("theta_1", "must lie in [0, 2*pi)");
  if (!std::isfinite(theta_2) || theta_2 < 0.0 || theta_2 >= 2.0 * kPi)
    reject("theta_2", "must lie in [0, 2*pi)");
  if (!(gravitational_constant > 0.0))
    reject("gravitational_constant", "must be > 0");
  if (!(reduced_planck > 0.0)) reject("reduced_planck", "must be > 0");
}

ExperimentConfig ExperimentConfig::preset(Setup setup, int dimension) {
  ExperimentConfig config;
  config.dimension = dimension;
  switch (setup) {
    case Setup::parallel:
      config.theta_1 = 3.0 * kPi / 2.0;
      config.theta_2 = kPi / 2.0;
      break;
    case Setup::linear:
      config.theta_1 = 0.0;
      config.theta_2 = 0.0;
      break;
    case Setup::custom:
      break;
  }
  return config;
}

DistanceMatrix distance_matrix(const ExperimentConfig& config) {
  config.validate();
  const int d_count = config.dimension;
  const double d = config.min_distance;
  const double spacing = config.superposition_width / (d_count - 1);

  DistanceMatrix out;
  out.entries.resize(d_count, d_count);
  out.arm_1.resize(d_count);
  out.arm_2.resize(d_count);
  out.opening.resize(d_count);

  for (int p = 0; p < d_count; ++p)
    out.arm_1[p] = (d_count - 1 - p) * spacing;

  const double cos2 = std::cos(config.theta_2);
  const double sin2 = std::sin(config.theta_2);
  for (int q = 0; q < d_count; ++q) {
    const double t = q * spacing;
    // law of cosines against the reference point; the angle at the second
    // mass's innermost instance is pi - theta_2
    const double b_sq = d * d + t * t + 2.0 * d * t * cos2;
    const double b = std::sqrt(std::max(b_sq, 0.0));
    out.arm_2[q] = b;

    double bend = 0.0;  // angle of the line to instance q above the base line
    if (b > 0.0) {
      const double arg = t * sin2 / b;
      if (std::abs(arg) > 1.0 + 1e-12)
        throw std::domain_error(
            "distance_matrix: inconsistent geometry (|sin| argument " +
            std::to_string(arg) + " exceeds 1)");
      bend = std::asin(std::clamp(arg, -1.0, 1.0));
      // asin covers the near half-plane; instances that cross to the far
      // side of the reference point need the supplementary angle
      if (d + t * cos2 < 0.0) bend = (bend >= 0.0 ? kPi - bend : -kPi - bend);
    }
    const double opening = kPi - config.theta_1 + bend;
    out.opening[q] = opening;

    const double cos3 = std::cos(opening);
    for (int p = 0; p < d_count; ++p) {
      const double a = out.arm_1[p];
      const double c_sq = a * a + b * b - 2.0 * a * b * cos3;
      out.entries(p, q) = std::sqrt(std::max(c_sq, 0.0));
    }
  }
  return out;
}

GeometryReport validate_geometry(const DistanceMatrix& distances,
                                 const ExperimentConfig& config) {
  constexpr double kTolerance = 1e-12;  // meters
  GeometryReport report;
  report.ok = true;
  const int d_count = distances.dimension();
  for (int p = 0; p < d_count; ++p) {
    for (int q = 0; q < d_count; ++q) {
      if (distances.entries(p, q) < config.min_distance - kTolerance) {
        report.ok = false;
        report.offending.emplace_back(p, q);
      }
    }
  }
  return report;
}

}  // namespace qgem
