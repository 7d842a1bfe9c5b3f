#pragma once

// Joint two-qudit state preparation and open-system evolution.  Each branch
// pair (p,q) accumulates the gravitational phase G*m1*m2*tau/(hbar*C(p,q));
// the joint state is the equal-weight superposition over all D^2 branches.

#include <Eigen/Dense>

#include "qgem/experiment.hpp"

namespace qgem {

using Cx = std::complex<double>;

// Branch phases phi(p,q) in radians.
Eigen::MatrixXd phase_matrix(const DistanceMatrix& distances,
                             const ExperimentConfig& config);

// Amplitudes psi(p,q) of the joint pure state, stored as a D x D matrix.
struct JointPureState {
  Eigen::MatrixXcd amplitudes;

  int dimension() const { return static_cast<int>(amplitudes.rows()); }
  double norm() const { return amplitudes.norm(); }
};

// psi(p,q) = exp(i*phi(p,q)) / D
JointPureState superposed_state(const Eigen::MatrixXd& phases);

// Joint density operator on the D^2-dimensional space, row-major branch
// index I = p*D + q.  `gamma_applied`/`tau_applied` record the dephasing
// already folded in.
struct DensityMatrix {
  Eigen::MatrixXcd rho;
  bool is_pure = false;
  double gamma_applied = 0.0;
  double tau_applied = 0.0;

  int joint_dimension() const { return static_cast<int>(rho.rows()); }
  int qudit_dimension() const;
};

inline int joint_index(int p, int q, int dimension) {
  return p * dimension + q;
}

// |psi><psi|; rejects states whose norm deviates from 1 by more than 1e-9.
DensityMatrix density_matrix(const JointPureState& state);

// Independent uniform dephasing of both qudits: element ((p,q),(p',q'))
// is damped by exp(-gamma*tau) once per qudit whose branch index differs.
// Positivity, trace and Hermiticity are preserved.
DensityMatrix apply_decoherence(const DensityMatrix& input, double gamma,
                                double tau);

// Convenience pipeline: geometry -> phases -> state (gamma ignored).
JointPureState make_state(const ExperimentConfig& config);
// As above, then the density operator with config.decoherence_rate applied.
DensityMatrix make_density(const ExperimentConfig& config);

}  // namespace qgem
