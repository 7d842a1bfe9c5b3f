#pragma once

// Experiment description for two adjacent matter-wave interferometers, each
// holding one mesoscopic mass in a D-instance spatial superposition.  The
// two superposition axes are coplanar; instance-pair distances follow from
// the two arm orientation angles by plane trigonometry.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qgem {

inline constexpr double kGravitationalConstant = 6.674e-11;  // m^3 kg^-1 s^-2
inline constexpr double kReducedPlanck = 1.054571817e-34;    // J s
inline constexpr double kPi = 3.14159265358979323846;

enum class Setup { parallel, linear, custom };

// Raised when a configuration or config-file value is rejected; `field`
// names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  int dimension = 2;                   // instances per mass (D >= 2)
  double superposition_width = 250e-6; // outermost instance separation [m]
  double min_distance = 200e-6;        // closest allowed approach d [m]
  double mass_1 = 1e-14;               // [kg]
  double mass_2 = 1e-14;               // [kg]
  double hold_time = 2.5;              // interaction time tau [s]
  double decoherence_rate = 0.0;       // dephasing rate gamma [1/s]
  double theta_1 = 3.0 * kPi / 2.0;    // arm orientation, first mass [rad]
  double theta_2 = kPi / 2.0;          // arm orientation, second mass [rad]
  double gravitational_constant = kGravitationalConstant;
  double reduced_planck = kReducedPlanck;

  // Throws ConfigError naming the first offending field.
  void validate() const;

  static ExperimentConfig preset(Setup setup, int dimension = 2);
};

// Pairwise instance distances C(p,q) between instance p of mass 1 and
// instance q of mass 2, with the intermediate arm lengths kept for
// diagnostics.  Instance p = D-1 of mass 1 sits at the reference point;
// instance q = 0 of mass 2 sits at distance d from it.
struct DistanceMatrix {
  Eigen::MatrixXd entries;  // C(p,q) [m]
  Eigen::VectorXd arm_1;    // A(p): distance of instance p from the reference
  Eigen::VectorXd arm_2;    // B(q): distance of instance q from the reference
  Eigen::VectorXd opening;  // angle between arm 1 and the line to instance q

  int dimension() const { return static_cast<int>(entries.rows()); }
};

DistanceMatrix distance_matrix(const ExperimentConfig& config);

struct GeometryReport {
  bool ok = false;
  // (p, q) pairs closer than min_distance, in row-major order.
  std::vector<std::pair<int, int>> offending;
};

// A configuration is usable when no instance pair comes closer than d
// (tolerance 1e-12 m).  The innermost pair sits at exactly d by construction.
GeometryReport validate_geometry(const DistanceMatrix& distances,
                                 const ExperimentConfig& config);

}  // namespace qgem
