#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "qgem/witness.hpp"

using namespace qgem;

namespace {

// Brute-force partial trace over explicit branch indices.
Eigen::MatrixXcd traced_oracle(const Eigen::MatrixXcd& rho, int dim,
                               int traced_out) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int k = 0; k < dim; ++k) {
        if (traced_out == 2)
          out(a, b) += rho(a * dim + k, b * dim + k);
        else
          out(a, b) += rho(k * dim + a, k * dim + b);
      }
  return out;
}

Eigen::MatrixXcd pauli(char which) {
  Eigen::MatrixXcd m(2, 2);
  const Cx i(0.0, 1.0);
  switch (which) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    default:  m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

// Random mixture of product states, normalized; separable by construction.
DensityMatrix random_separable(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int mixtures = dim + 1;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim * dim, dim * dim);
  double total = 0.0;
  std::uniform_real_distribution<double> uniform(0.1, 1.0);
  for (int k = 0; k < mixtures; ++k) {
    Eigen::VectorXcd a(dim), b(dim);
    for (int n = 0; n < dim; ++n) {
      a(n) = Cx(gauss(rng), gauss(rng));
      b(n) = Cx(gauss(rng), gauss(rng));
    }
    a.normalize();
    b.normalize();
    Eigen::VectorXcd product(dim * dim);
    for (int p = 0; p < dim; ++p)
      for (int q = 0; q < dim; ++q) product(p * dim + q) = a(p) * b(q);
    const double weight = uniform(rng);
    rho += weight * (product * product.adjoint());
    total += weight;
  }
  DensityMatrix out;
  out.rho = rho / total;
  return out;
}

double analytic_qubit_expectation(double gamma, double tau, double delta) {
  const double damp = std::exp(-gamma * tau);
  return 0.25 * (1.0 - damp * damp - 2.0 * std::sin(delta) * damp);
}

}  // namespace

TEST_CASE("partial trace matches the index-sum oracle on mixed states") {
  ExperimentConfig config = ExperimentConfig::preset(Setup::parallel, 3);
  config.decoherence_rate = 0.08;
  const DensityMatrix rho = make_density(config);
  for (const int traced : {1, 2}) {
    const Eigen::MatrixXcd reduced = partial_trace(rho, traced);
    const Eigen::MatrixXcd expected = traced_oracle(rho.rho, 3, traced);
    CHECK((reduced - expected).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(reduced.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(partial_trace(rho, 3), std::invalid_argument);
}

TEST_CASE("partial transpose swaps the second-qudit indices") {
  const DensityMatrix rho =
      make_density(ExperimentConfig::preset(Setup::linear, 3));
  const Eigen::MatrixXcd pt = partial_transpose(rho);
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q)
      for (int pp = 0; pp < 3; ++pp)
        for (int qq = 0; qq < 3; ++qq)
          CHECK(std::abs(pt(p * 3 + q, pp * 3 + qq) -
                         rho.rho(p * 3 + qq, pp * 3 + q)) < 1e-15);
  // involution and hermiticity
  CHECK((partial_transpose_raw(pt, 3) - rho.rho).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK((pt - pt.adjoint()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("default qubit entropy reproduces the reference value") {
  const double entropy = entanglement_entropy(make_density(ExperimentConfig{}));
  CHECK(entropy == doctest::Approx(0.152).epsilon(0.02));
  CHECK(entropy == doctest::Approx(0.15181).epsilon(1e-3));
}

TEST_CASE("linear qubit entropy is lower than parallel") {
  const double linear = entanglement_entropy(
      make_density(ExperimentConfig::preset(Setup::linear)));
  CHECK(linear == doctest::Approx(0.0540).epsilon(0.02));
}

TEST_CASE("entropy is symmetric under swapping the two arm angles") {
  std::mt19937_64 rng(7u);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi - 1e-9);
  int checked = 0;
  while (checked < 10) {
    ExperimentConfig config = ExperimentConfig::preset(Setup::custom, 3);
    config.theta_1 = angle(rng);
    config.theta_2 = angle(rng);
    if (!validate_geometry(distance_matrix(config), config).ok) continue;
    ExperimentConfig swapped = config;
    std::swap(swapped.theta_1, swapped.theta_2);
    const double a = entanglement_entropy(make_density(config));
    const double b = entanglement_entropy(make_density(swapped));
    CHECK(a == doctest::Approx(b).epsilon(1e-10));
    ++checked;
  }
}

TEST_CASE("entropy rejects mixed states") {
  ExperimentConfig config;
  config.decoherence_rate = 0.05;
  CHECK_THROWS_AS(entanglement_entropy(make_density(config)),
                  std::domain_error);
}

TEST_CASE("qubit witness equals the Pauli closed form") {
  const auto witness = make_witness(ExperimentConfig{}, WitnessKind::ppt);
  REQUIRE(witness.has_value());
  const Eigen::MatrixXcd expected =
      0.25 * (kron(pauli('I'), pauli('I')) - kron(pauli('X'), pauli('X')) -
              kron(pauli('Z'), pauli('Y')) - kron(pauli('Y'), pauli('Z')));
  CHECK((witness->matrix - expected).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(witness->dimension == 2);
  CHECK(witness->kind == WitnessKind::ppt);
}

TEST_CASE("witness expectation on the generating state is the negative eigenvalue") {
  for (int dim : {2, 3, 4}) {
    const ExperimentConfig config = ExperimentConfig::preset(Setup::parallel, dim);
    const auto witness = make_witness(config, WitnessKind::ppt);
    REQUIRE(witness.has_value());
    const double value = witness_expectation(*witness, make_density(config));
    CHECK(value == doctest::Approx(witness->negative_eigenvalue).epsilon(1e-10));
    CHECK(value < 0.0);
  }
}

TEST_CASE("default qubit witness expectation reproduces the reference value") {
  const auto witness = make_witness(ExperimentConfig{}, WitnessKind::ppt);
  REQUIRE(witness.has_value());
  const double value =
      witness_expectation(*witness, make_density(ExperimentConfig{}));
  CHECK(value == doctest::Approx(-0.146277).epsilon(1e-4));
  CHECK(std::abs(value - (-0.148)) < 0.004);
}

TEST_CASE("no witness exists without accumulated phase") {
  ExperimentConfig config;
  config.hold_time = 0.0;
  CHECK_FALSE(make_witness(config, WitnessKind::ppt).has_value());
}

TEST_CASE("vicinity witness expectation equals schmidt_max^2 - 1 on its state") {
  const ExperimentConfig config;
  const auto witness = make_witness(config, WitnessKind::vicinity);
  REQUIRE(witness.has_value());
  const double value = witness_expectation(*witness, make_density(config));
  const double lm2 = witness->schmidt_max * witness->schmidt_max;
  CHECK(value == doctest::Approx(lm2 - 1.0).epsilon(1e-10));
  CHECK(value == doctest::Approx(-0.021875).epsilon(1e-3));
}

TEST_CASE("witnesses are non-negative on random separable states") {
  std::mt19937_64 rng(99u);
  for (int dim : {2, 3}) {
    const ExperimentConfig config = ExperimentConfig::preset(Setup::parallel, dim);
    for (const WitnessKind kind : {WitnessKind::ppt, WitnessKind::vicinity}) {
      const auto witness = make_witness(config, kind);
      REQUIRE(witness.has_value());
      for (int trial = 0; trial < 200; ++trial) {
        const DensityMatrix sigma = random_separable(dim, rng);
        CHECK(witness_expectation(*witness, sigma) >= -1e-10);
      }
    }
  }
}

TEST_CASE("decohered qubit expectation follows the two-phase closed form") {
  const ExperimentConfig config;
  const Eigen::MatrixXd phases =
      phase_matrix(distance_matrix(config), config);
  const double delta = phases(0, 1) - phases(0, 0);
  const auto witness = make_witness(config, WitnessKind::ppt);
  REQUIRE(witness.has_value());
  const DensityMatrix pure = make_density(config);
  for (double gamma = 0.0; gamma <= 0.15 + 1e-12; gamma += 0.0125) {
    const DensityMatrix mixed =
        apply_decoherence(pure, gamma, config.hold_time);
    const double value = witness_expectation(*witness, mixed);
    CHECK(value == doctest::Approx(analytic_qubit_expectation(
                                       gamma, config.hold_time, delta))
                       .epsilon(1e-10));
  }
}

TEST_CASE("qubit witness zero crossing sits near 0.1156 per the closed form") {
  const ExperimentConfig config;
  const Eigen::MatrixXd phases =
      phase_matrix(distance_matrix(config), config);
  const double delta = phases(0, 1) - phases(0, 0);
  // solve 1 - x^2 - 2 sin(delta) x = 0 for x = exp(-gamma tau)
  const double sd = std::sin(delta);
  const double root = -sd + std::sqrt(sd * sd + 1.0);
  const double closed_form = -std::log(root) / config.hold_time;

  const auto witness = make_witness(config, WitnessKind::ppt);
  REQUIRE(witness.has_value());
  const DensityMatrix pure = make_density(config);
  double lo = 0.0, hi = 0.3;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double value = witness_expectation(
        *witness, apply_decoherence(pure, mid, config.hold_time));
    (value < 0.0 ? lo : hi) = mid;
  }
  CHECK(0.5 * (lo + hi) == doctest::Approx(closed_form).epsilon(1e-9));
  CHECK(closed_form > 0.110);
  CHECK(closed_form < 0.125);
}

TEST_CASE("expectation rejects a state of the wrong dimension") {
  const auto witness = make_witness(ExperimentConfig{}, WitnessKind::ppt);
  REQUIRE(witness.has_value());
  const DensityMatrix big =
      make_density(ExperimentConfig::preset(Setup::parallel, 3));
  CHECK_THROWS_AS(witness_expectation(*witness, big), std::invalid_argument);
}
