#include "qgem/witness.hpp"

#include <cmath>
#include <stdexcept>

namespace qgem {

Eigen::MatrixXcd partial_trace(const DensityMatrix& rho, int traced_out) {
  if (traced_out != 1 && traced_out != 2)
    throw std::invalid_argument("partial_trace: subsystem must be 1 or 2");
  const int d = rho.qudit_dimension();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  if (traced_out == 2) {
    for (int p = 0; p < d; ++p)
      for (int pp = 0; pp < d; ++pp)
        for (int q = 0; q < d; ++q)
          out(p, pp) += rho.rho(joint_index(p, q, d), joint_index(pp, q, d));
  } else {
    for (int q = 0; q < d; ++q)
      for (int qq = 0; qq < d; ++qq)
        for (int p = 0; p < d; ++p)
          out(q, qq) += rho.rho(joint_index(p, q, d), joint_index(p, qq, d));
  }
  return out;
}

Eigen::MatrixXcd partial_transpose_raw(const Eigen::MatrixXcd& m,
                                       int qudit_dimension) {
  const int d = qudit_dimension;
  Eigen::MatrixXcd out(m.rows(), m.cols());
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q)
      for (int pp = 0; pp < d; ++pp)
        for (int qq = 0; qq < d; ++qq)
          out(joint_index(p, q, d), joint_index(pp, qq, d)) =
              m(joint_index(p, qq, d), joint_index(pp, q, d));
  return out;
}

Eigen::MatrixXcd partial_transpose(const DensityMatrix& rho) {
  return partial_transpose_raw(rho.rho, rho.qudit_dimension());
}

double entanglement_entropy(const DensityMatrix& rho) {
  if (!rho.is_pure)
    throw std::domain_error(
        "entanglement_entropy: defined only for pure joint states");
  const Eigen::MatrixXcd reduced = partial_trace(rho, 2);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(reduced);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("entanglement_entropy: eigensolver failed");
  double entropy = 0.0;
  for (int k = 0; k < solver.eigenvalues().size(); ++k) {
    const double lambda = solver.eigenvalues()(k);
    if (lambda > 1e-12) entropy -= lambda * std::log2(lambda);
  }
  return entropy;
}

std::optional<Witness> build_ppt_witness(const DensityMatrix& pure_state) {
  if (!pure_state.is_pure)
    throw std::invalid_argument(
        "build_ppt_witness: generator must be the dephasing-free pure state");
  const int d = pure_state.qudit_dimension();
  const Eigen::MatrixXcd transposed = partial_transpose(pure_state);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(transposed);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("build_ppt_witness: eigensolver failed");
  const double lowest = solver.eigenvalues()(0);  // ascending order
  if (lowest >= -1e-12) return std::nullopt;      // positive partial transpose

  Eigen::VectorXcd vec = solver.eigenvectors().col(0);
  // fix the arbitrary global phase for reproducibility
  for (int k = 0; k < vec.size(); ++k) {
    if (std::abs(vec(k)) > 1e-8) {
      vec *= std::conj(vec(k)) / std::abs(vec(k));
      break;
    }
  }
  Witness witness;
  witness.kind = WitnessKind::ppt;
  witness.dimension = d;
  witness.negative_eigenvalue = lowest;
  witness.matrix = partial_transpose_raw(vec * vec.adjoint(), d);
  return witness;
}

Witness build_vicinity_witness(const JointPureState& state) {
  if (std::abs(state.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("build_vicinity_witness: state not normalized");
  const int d = state.dimension();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(state.amplitudes);
  const double schmidt_max = svd.singularValues()(0);

  Witness witness;
  witness.kind = WitnessKind::vicinity;
  witness.dimension = d;
  witness.schmidt_max = schmidt_max;
  const DensityMatrix projector = density_matrix(state);
  witness.matrix =
      schmidt_max * schmidt_max *
          Eigen::MatrixXcd::Identity(d * d, d * d) -
      projector.rho;
  return witness;
}

double witness_expectation(const Witness& witness, const DensityMatrix& rho) {
  if (witness.matrix.rows() != rho.rho.rows())
    throw std::invalid_argument("witness_expectation: dimension mismatch");
  const Cx value = (witness.matrix * rho.rho).trace();
  if (std::abs(value.imag()) > 1e-8)
    throw std::runtime_error(
        "witness_expectation: imaginary residue exceeds 1e-8");
  return value.real();
}

std::optional<Witness> make_witness(const ExperimentConfig& config,
                                    WitnessKind kind) {
  ExperimentConfig clean = config;
  clean.decoherence_rate = 0.0;
  const JointPureState state = make_state(clean);
  std::optional<Witness> witness;
  if (kind == WitnessKind::ppt) {
    witness = build_ppt_witness(density_matrix(state));
  } else {
    witness = build_vicinity_witness(state);
  }
  if (witness) witness->built_tau = config.hold_time;
  return witness;
}

}  // namespace qgem
