#pragma once

// Entanglement quantification and witness construction: partial trace and
// transpose, entanglement entropy for pure states, and two witness families
// (negative-partial-transpose projector, and the projective vicinity bound
// lambda_max^2 * I - |psi><psi|).

#include <Eigen/Dense>

#include <optional>

#include "qgem/state.hpp"

namespace qgem {

// Reduced state with qudit `traced_out` (1 or 2) removed.
Eigen::MatrixXcd partial_trace(const DensityMatrix& rho, int traced_out);

// Transpose of the second qudit's indices; Hermitian but not necessarily
// positive.  A negative eigenvalue certifies entanglement.
Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho);
Eigen::MatrixXcd partial_transpose_raw(const Eigen::MatrixXcd& m,
                                       int qudit_dimension);

// Von Neumann entropy (base-2) of the reduced state; defined here only for
// pure joint states, rejects mixed input.  Eigenvalues within 1e-12 of zero
// contribute nothing.
double entanglement_entropy(const DensityMatrix& rho);

enum class WitnessKind { ppt, vicinity };

struct Witness {
  Eigen::MatrixXcd matrix;  // Hermitian, D^2 x D^2
  WitnessKind kind = WitnessKind::ppt;
  int dimension = 0;
  // most negative eigenvalue of the generator's partial transpose (ppt kind)
  double negative_eigenvalue = 0.0;
  // largest Schmidt coefficient of the generator (vicinity kind)
  double schmidt_max = 0.0;
  double built_tau = 0.0;  // hold time of the generating state (gamma = 0)
};

// Built from the dephasing-free state: project onto the most negative
// eigenvector of its partial transpose, then transpose back.  Returns
// nullopt when the state has a positive partial transpose (nothing to
// witness, e.g. tau = 0).  Tr(W sigma) >= 0 for every separable sigma and
// Tr(W rho) = negative_eigenvalue on the generating state.
std::optional<Witness> build_ppt_witness(const DensityMatrix& pure_state);

// lambda_max^2 * I - |psi><psi| with lambda_max the largest singular value
// of the amplitude matrix; witnesses states in the vicinity of |psi>.
Witness build_vicinity_witness(const JointPureState& state);

// Tr(W rho); the imaginary residue must stay below 1e-8 and is discarded.
double witness_expectation(const Witness& witness, const DensityMatrix& rho);

// Pipeline helper: witness for the configured setup, built at
// (config.hold_time, gamma = 0).
std::optional<Witness> make_witness(const ExperimentConfig& config,
                                    WitnessKind kind);

}  // namespace qgem
