#include "qgem/state.hpp"

#include <cmath>
#include <stdexcept>

namespace qgem {

Eigen::MatrixXd phase_matrix(const DistanceMatrix& distances,
                             const ExperimentConfig& config) {
  config.validate();
  const double scale = config.gravitational_constant * config.mass_1 *
                       config.mass_2 * config.hold_time /
                       config.reduced_planck;
  const int d_count = distances.dimension();
  Eigen::MatrixXd phases(d_count, d_count);
  for (int p = 0; p < d_count; ++p) {
    for (int q = 0; q < d_count; ++q) {
      const double c = distances.entries(p, q);
      if (!(c > 0.0))
        throw std::domain_error("phase_matrix: nonpositive instance distance");
      phases(p, q) = scale / c;
    }
  }
  return phases;
}

JointPureState superposed_state(const Eigen::MatrixXd& phases) {
  const int d_count = static_cast<int>(phases.rows());
  if (phases.cols() != d_count || d_count < 2)
    throw std::invalid_argument("superposed_state: phase matrix must be DxD");
  JointPureState state;
  state.amplitudes.resize(d_count, d_count);
  const double amp = 1.0 / d_count;
  for (int p = 0; p < d_count; ++p)
    for (int q = 0; q < d_count; ++q)
      state.amplitudes(p, q) = amp * std::polar(1.0, phases(p, q));
  return state;
}

int DensityMatrix::qudit_dimension() const {
  const int n = joint_dimension();
  const int d = static_cast<int>(std::lround(std::sqrt(double(n))));
  if (d * d != n)
    throw std::logic_error("density matrix is not a two-qudit operator");
  return d;
}

DensityMatrix density_matrix(const JointPureState& state) {
  const double norm = state.norm();
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument(
        "density_matrix: state norm deviates from 1 by more than 1e-9");
  const int d_count = state.dimension();
  const int n = d_count * d_count;
  Eigen::VectorXcd vec(n);
  for (int p = 0; p < d_count; ++p)
    for (int q = 0; q < d_count; ++q)
      vec(joint_index(p, q, d_count)) = state.amplitudes(p, q);

  DensityMatrix out;
  out.rho = vec * vec.adjoint();
  out.is_pure = true;
  return out;
}

DensityMatrix apply_decoherence(const DensityMatrix& input, double gamma,
                                double tau) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("apply_decoherence: gamma must be >= 0");
  if (!(tau >= 0.0) || !std::isfinite(tau))
    throw std::invalid_argument("apply_decoherence: tau must be >= 0");
  const int d_count = input.qudit_dimension();
  const double damp = std::exp(-gamma * tau);

  DensityMatrix out = input;
  if (gamma * tau == 0.0) return out;
  out.is_pure = false;
  out.gamma_applied = gamma;
  out.tau_applied = tau;
  const int n = input.joint_dimension();
  for (int row = 0; row < n; ++row) {
    const int p = row / d_count, q = row % d_count;
    for (int col = 0; col < n; ++col) {
      const int pp = col / d_count, qq = col % d_count;
      double factor = 1.0;
      if (p != pp) factor *= damp;
      if (q != qq) factor *= damp;
      out.rho(row, col) = input.rho(row, col) * factor;
    }
  }
  return out;
}

JointPureState make_state(const ExperimentConfig& config) {
  const DistanceMatrix distances = distance_matrix(config);
  return superposed_state(phase_matrix(distances, config));
}

DensityMatrix make_density(const ExperimentConfig& config) {
  DensityMatrix rho = density_matrix(make_state(config));
  if (config.decoherence_rate > 0.0)
    rho = apply_decoherence(rho, config.decoherence_rate, config.hold_time);
  return rho;
}

}  // namespace qgem
