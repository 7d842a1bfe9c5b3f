#pragma once

// Finite-measurement simulation: proportional shot allocation over measured
// units (single terms, or commuting groups sharing one shot stream), outcome
// sampling from the exact Born distribution, and the one-sided t-test
// summary used to decide when the witness mean is significantly negative.

#include <cstdint>
#include <vector>

#include "qgem/basis.hpp"
#include "qgem/rng.hpp"

namespace qgem {

enum class SampleMode { per_term, grouped };

struct ShotPlan {
  SampleMode mode = SampleMode::per_term;
  long long total = 0;
  std::vector<long long> allocations;  // per unit, sums to total, each >= 2
};

// Proportional shares floored, remainder by largest fractional part, then
// every unit below 2 shots topped up at the expense of the largest
// allocations.  Throws when total < 2 * units.
std::vector<long long> allocate_shots(const std::vector<double>& weights,
                                      long long total);

struct UnitRecord {
  double mean = 0.0;
  double variance = 0.0;  // sample variance, (shots - 1) denominator
  long long shots = 0;
};

// One measured unit against a fixed state: outcome probabilities plus, for
// each member term, the outcome's eigenvalue.
struct PreparedUnit {
  std::vector<int> term_indices;  // into decomp.terms
  double weight = 0.0;
  Eigen::VectorXd probabilities;
  std::vector<Eigen::VectorXd> values;
};

struct Campaign {
  WitnessDecomposition decomp;
  SampleMode mode = SampleMode::per_term;
  double identity_coefficient = 0.0;  // exact, never measured
  std::vector<PreparedUnit> units;
};

Campaign prepare_term_campaign(const WitnessDecomposition& decomp,
                               const std::vector<BasisElement>& basis,
                               const DensityMatrix& rho);
Campaign prepare_group_campaign(const WitnessDecomposition& decomp,
                                const std::vector<BasisElement>& basis,
                                const std::vector<MeasurementGroup>& groups,
                                const DensityMatrix& rho);

// Multinomial outcome counts drawn by chained binomials; cost is independent
// of the shot count.
std::vector<long long> sample_counts(const Eigen::VectorXd& probabilities,
                                     long long shots, std::mt19937_64& rng);

UnitRecord record_from_counts(const std::vector<long long>& counts,
                              const Eigen::VectorXd& values);

// Repeated projective measurement of one tensor term.
UnitRecord sample_term(const WitnessTerm& term,
                       const std::vector<BasisElement>& basis,
                       const DensityMatrix& rho, long long shots,
                       std::mt19937_64& rng);

// One shot stream measured in the group's shared eigenbasis; every member
// term's record is read off the same outcomes.  A singleton group gives the
// same record as sample_term for the same rng state.
std::vector<UnitRecord> sample_group(const MeasurementGroup& group,
                                     const WitnessDecomposition& decomp,
                                     const std::vector<BasisElement>& basis,
                                     const DensityMatrix& rho, long long shots,
                                     std::mt19937_64& rng);

struct ConfidenceReport {
  double estimate = 0.0;     // weighted witness mean
  double variance = 0.0;     // sum |c|^2 * sample variance over terms
  double std_error = 0.0;    // sqrt(variance / avg_shots)
  double avg_shots = 0.0;    // shots per measured unit
  double t_value = 0.0;      // |estimate| / std_error
  double confidence = 0.0;   // P(witness mean < 0), in [0, 1)
  double ci_level = 0.95;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// records[u][s] pairs with campaign.units[u].term_indices[s].
ConfidenceReport witness_statistics(
    const Campaign& campaign,
    const std::vector<std::vector<UnitRecord>>& records,
    double ci_level = 0.95);

// One-sided Student-t confidence that the true mean is negative, with
// avg_shots - 1 degrees of freedom; capped at 1 - 1e-15, 0.5 at estimate 0.
double confidence_level(double estimate, double std_error, double avg_shots);
double confidence_level(const ConfidenceReport& report);

struct TrialSettings {
  WitnessKind kind = WitnessKind::ppt;
  SampleMode mode = SampleMode::per_term;
  long long shots = 0;
  int repetitions = 100;
  std::uint64_t seed = 0;
  double epsilon_rel = 1e-8;
  double ci_level = 0.95;
};

struct TrialResult {
  long long shots = 0;
  SampleMode mode = SampleMode::per_term;
  double mean_confidence = 0.0;
  double std_confidence = 0.0;
  double mean_estimate = 0.0;
  double mean_std_error = 0.0;
  std::vector<ConfidenceReport> reports;  // one per repetition
};

// Repetition r, unit u draws from the stream derive_stream(seed, r, u), so
// repetitions and units can be evaluated in any order.
TrialResult run_campaign_trial(const Campaign& campaign, long long shots,
                               int repetitions, std::uint64_t seed,
                               double ci_level = 0.95);

// Full pipeline: witness (gamma = 0) -> decomposition -> units against the
// decohered state -> repeated finite-shot campaigns.
TrialResult run_trial(const ExperimentConfig& config,
                      const TrialSettings& settings);

}  // namespace qgem
