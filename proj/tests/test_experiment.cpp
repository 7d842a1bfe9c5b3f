#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "qgem/experiment.hpp"

using namespace qgem;

namespace {

// Independent geometry oracle: place every instance explicitly in the plane
// and take Euclidean distances.  Instance p = D-1 of mass 1 sits at the
// origin; instance q = 0 of mass 2 sits at (d, 0); arm 1 extends from the
// origin along theta_1 - pi, arm 2 from (d, 0) along theta_2.
Eigen::MatrixXd planar_distances(const ExperimentConfig& config) {
  const int dim = config.dimension;
  const double spacing = config.superposition_width / (dim - 1);
  Eigen::MatrixXd out(dim, dim);
  for (int p = 0; p < dim; ++p) {
    const double a = (dim - 1 - p) * spacing;
    const double y1 = a * std::cos(config.theta_1 - kPi);
    const double y2 = a * std::sin(config.theta_1 - kPi);
    for (int q = 0; q < dim; ++q) {
      const double t = q * spacing;
      const double x1 = config.min_distance + t * std::cos(config.theta_2);
      const double x2 = t * std::sin(config.theta_2);
      out(p, q) = std::hypot(y1 - x1, y2 - x2);
    }
  }
  return out;
}

void check_against_oracle(const ExperimentConfig& config, double rel_tol) {
  const DistanceMatrix computed = distance_matrix(config);
  const Eigen::MatrixXd expected = planar_distances(config);
  for (int p = 0; p < config.dimension; ++p)
    for (int q = 0; q < config.dimension; ++q) {
      const double scale = std::max(expected(p, q), config.min_distance);
      CHECK(std::abs(computed.entries(p, q) - expected(p, q)) <=
            rel_tol * scale);
    }
}

}  // namespace

TEST_CASE("defaults validate and describe the parallel set-up") {
  const ExperimentConfig config;
  CHECK_NOTHROW(config.validate());
  CHECK(config.dimension == 2);
  CHECK(config.superposition_width == doctest::Approx(250e-6));
  CHECK(config.min_distance == doctest::Approx(200e-6));
  CHECK(config.hold_time == doctest::Approx(2.5));
  CHECK(config.theta_1 == doctest::Approx(3.0 * kPi / 2.0));
  CHECK(config.theta_2 == doctest::Approx(kPi / 2.0));
}

TEST_CASE("presets fix the arm angles") {
  const auto parallel = ExperimentConfig::preset(Setup::parallel, 4);
  CHECK(parallel.dimension == 4);
  CHECK(parallel.theta_1 == doctest::Approx(3.0 * kPi / 2.0));

  const auto linear = ExperimentConfig::preset(Setup::linear);
  CHECK(linear.theta_1 == 0.0);
  CHECK(linear.theta_2 == 0.0);

  const auto custom = ExperimentConfig::preset(Setup::custom, 3);
  CHECK(custom.dimension == 3);
  CHECK(custom.theta_1 == doctest::Approx(3.0 * kPi / 2.0));
}

TEST_CASE("validate names the first offending field") {
  ExperimentConfig config;

  config.dimension = 1;
  CHECK_THROWS_AS(config.validate(), ConfigError);
  try {
    config.validate();
  } catch (const ConfigError& error) {
    CHECK(error.field() == "dimension");
  }

  config = ExperimentConfig{};
  config.mass_2 = 0.0;
  try {
    config.validate();
    FAIL("expected rejection");
  } catch (const ConfigError& error) {
    CHECK(error.field() == "mass_2");
  }

  config = ExperimentConfig{};
  config.theta_1 = 2.0 * kPi;  // half-open interval
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = ExperimentConfig{};
  config.hold_time = -1.0;
  CHECK_THROWS_AS(config.validate(), ConfigError);

  config = ExperimentConfig{};
  config.superposition_width = 0.0;  // collapsed superposition is allowed
  CHECK_NOTHROW(config.validate());
}

TEST_CASE("parallel qubit distances match the frozen values") {
  const DistanceMatrix distances =
      distance_matrix(ExperimentConfig::preset(Setup::parallel));
  const double diagonal = std::hypot(200e-6, 250e-6);  // 320.156e-6
  CHECK(distances.entries(0, 0) == doctest::Approx(diagonal).epsilon(1e-12));
  CHECK(distances.entries(1, 1) == doctest::Approx(diagonal).epsilon(1e-12));
  CHECK(distances.entries(0, 1) == doctest::Approx(200e-6).epsilon(1e-12));
  CHECK(distances.entries(1, 0) == doctest::Approx(200e-6).epsilon(1e-12));
  CHECK(distances.dimension() == 2);
}

TEST_CASE("linear qubit distances match the frozen values") {
  const DistanceMatrix distances =
      distance_matrix(ExperimentConfig::preset(Setup::linear));
  CHECK(distances.entries(0, 0) == doctest::Approx(450e-6).epsilon(1e-12));
  CHECK(distances.entries(0, 1) == doctest::Approx(700e-6).epsilon(1e-12));
  CHECK(distances.entries(1, 0) == doctest::Approx(200e-6).epsilon(1e-12));
  CHECK(distances.entries(1, 1) == doctest::Approx(450e-6).epsilon(1e-12));
}

TEST_CASE("closed-form distances match explicit planar coordinates") {
  for (int dim = 2; dim <= 6; ++dim) {
    check_against_oracle(ExperimentConfig::preset(Setup::parallel, dim), 1e-12);
    check_against_oracle(ExperimentConfig::preset(Setup::linear, dim), 1e-12);
  }

  std::mt19937_64 rng(20240817u);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi - 1e-9);
  std::uniform_int_distribution<int> dims(2, 6);
  for (int trial = 0; trial < 100; ++trial) {
    ExperimentConfig config = ExperimentConfig::preset(Setup::custom, dims(rng));
    config.theta_1 = angle(rng);
    config.theta_2 = angle(rng);
    check_against_oracle(config, 1e-12);
  }
}

TEST_CASE("collapsed superposition puts every pair at the base distance") {
  ExperimentConfig config = ExperimentConfig::preset(Setup::parallel, 5);
  config.superposition_width = 0.0;
  const DistanceMatrix distances = distance_matrix(config);
  for (int p = 0; p < 5; ++p)
    for (int q = 0; q < 5; ++q)
      CHECK(distances.entries(p, q) ==
            doctest::Approx(config.min_distance).epsilon(1e-12));
  CHECK(validate_geometry(distances, config).ok);
}

TEST_CASE("innermost pair sits at exactly the minimum distance") {
  for (int dim = 2; dim <= 6; ++dim) {
    const ExperimentConfig config = ExperimentConfig::preset(Setup::parallel, dim);
    const DistanceMatrix distances = distance_matrix(config);
    CHECK(distances.entries(dim - 1, 0) ==
          doctest::Approx(config.min_distance).epsilon(1e-14));
    CHECK(distances.entries.minCoeff() >= config.min_distance - 1e-12);
  }
}

TEST_CASE("arms folded onto each other violate the distance floor") {
  ExperimentConfig config = ExperimentConfig::preset(Setup::custom);
  config.theta_1 = kPi;
  config.theta_2 = kPi;
  const DistanceMatrix distances = distance_matrix(config);
  const GeometryReport report = validate_geometry(distances, config);
  CHECK_FALSE(report.ok);
  CHECK_FALSE(report.offending.empty());
  // outermost instance of mass 1 almost touches the base of mass 2
  CHECK(distances.entries(0, 0) < config.min_distance);
}

TEST_CASE("perpendicular arms pointing away stay valid") {
  ExperimentConfig config = ExperimentConfig::preset(Setup::custom);
  config.theta_1 = kPi / 2.0;
  config.theta_2 = kPi / 2.0;
  const GeometryReport report =
      validate_geometry(distance_matrix(config), config);
  CHECK(report.ok);
  CHECK(report.offending.empty());
}

TEST_CASE("offending pairs are reported in row-major order") {
  ExperimentConfig config = ExperimentConfig::preset(Setup::custom, 3);
  config.theta_1 = kPi;
  config.theta_2 = kPi;
  const GeometryReport report =
      validate_geometry(distance_matrix(config), config);
  REQUIRE_FALSE(report.offending.empty());
  for (std::size_t k = 1; k < report.offending.size(); ++k) {
    const auto [p0, q0] = report.offending[k - 1];
    const auto [p1, q1] = report.offending[k];
    CHECK(p0 * 3 + q0 < p1 * 3 + q1);
  }
}
