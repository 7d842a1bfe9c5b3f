#include "qgem/shots.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qgem {

std::vector<long long> allocate_shots(const std::vector<double>& weights,
                                      long long total) {
  const int n = static_cast<int>(weights.size());
  if (n == 0) throw std::invalid_argument("allocate_shots: no units");
  if (total < 2ll * n)
    throw std::invalid_argument(
        "allocate_shots: budget below 2 shots per measured unit");
  double weight_sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("allocate_shots: bad weight");
    weight_sum += w;
  }

  std::vector<long long> alloc(n, 0);
  std::vector<std::pair<double, int>> fractional(n);
  long long assigned = 0;
  for (int k = 0; k < n; ++k) {
    const double share =
        weight_sum > 0.0 ? weights[k] / weight_sum * double(total)
                         : double(total) / n;
    alloc[k] = static_cast<long long>(std::floor(share));
    fractional[k] = {share - double(alloc[k]), k};
    assigned += alloc[k];
  }
  std::sort(fractional.begin(), fractional.end(), [](auto a, auto b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int k = 0; assigned < total; ++k, ++assigned)
    ++alloc[fractional[k % n].second];

  // top up starved units from the largest allocations
  for (int k = 0; k < n; ++k) {
    while (alloc[k] < 2) {
      int donor = -1;
      for (int m = 0; m < n; ++m)
        if (alloc[m] > 2 && (donor < 0 || alloc[m] > alloc[donor])) donor = m;
      if (donor < 0)
        throw std::logic_error("allocate_shots: no donor available");
      --alloc[donor];
      ++alloc[k];
    }
  }
  return alloc;
}

namespace {

void sanitize_probabilities(Eigen::VectorXd& p) {
  double sum = 0.0;
  for (int k = 0; k < p.size(); ++k) {
    if (p(k) < -1e-12)
      throw std::runtime_error(
          "measurement preparation: negative outcome probability");
    p(k) = std::max(p(k), 0.0);
    sum += p(k);
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::runtime_error(
        "measurement preparation: outcome probabilities do not sum to 1");
  p /= sum;
}

Eigen::VectorXd born_probabilities(const Eigen::MatrixXcd& vectors,
                                   const Eigen::MatrixXcd& rho) {
  const Eigen::MatrixXcd product = rho * vectors;
  Eigen::VectorXd p(vectors.cols());
  for (int k = 0; k < vectors.cols(); ++k)
    p(k) = vectors.col(k).dot(product.col(k)).real();
  sanitize_probabilities(p);
  return p;
}

struct FactorEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

FactorEigen factor_eigen(const BasisElement& element) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(element.matrix);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("shot preparation: eigensolver failed");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// Term outcomes factorize: eigenvectors x_a o y_b, values e_i(a) * e_j(b).
PreparedUnit prepare_term_unit(const WitnessTerm& term,
                               const std::vector<BasisElement>& basis,
                               const Eigen::MatrixXcd& rho,
                               std::map<int, FactorEigen>& cache,
                               int term_index) {
  const auto factor = [&](int idx) -> const FactorEigen& {
    auto it = cache.find(idx);
    if (it == cache.end())
      it = cache.emplace(idx, factor_eigen(basis[idx])).first;
    return it->second;
  };
  const FactorEigen& left = factor(term.i);
  const FactorEigen& right = factor(term.j);
  const int d = static_cast<int>(left.values.size());

  PreparedUnit unit;
  unit.term_indices = {term_index};
  unit.weight = std::abs(term.coefficient);
  Eigen::VectorXd values(d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      values(a * d + b) = left.values(a) * right.values(b);
  unit.values = {std::move(values)};
  unit.probabilities = born_probabilities(
      Eigen::kroneckerProduct(left.vectors, right.vectors), rho);
  return unit;
}

}  // namespace

Campaign prepare_term_campaign(const WitnessDecomposition& decomp,
                               const std::vector<BasisElement>& basis,
                               const DensityMatrix& rho) {
  Campaign campaign;
  campaign.decomp = decomp;
  campaign.mode = SampleMode::per_term;
  std::map<int, FactorEigen> cache;
  for (int t = 0; t < static_cast<int>(decomp.terms.size()); ++t) {
    const WitnessTerm& term = decomp.terms[t];
    if (term.i == 0 && term.j == 0) {
      campaign.identity_coefficient = term.coefficient;
      continue;
    }
    campaign.units.push_back(
        prepare_term_unit(term, basis, rho.rho, cache, t));
  }
  return campaign;
}

Campaign prepare_group_campaign(const WitnessDecomposition& decomp,
                                const std::vector<BasisElement>& basis,
                                const std::vector<MeasurementGroup>& groups,
                                const DensityMatrix& rho) {
  Campaign campaign;
  campaign.decomp = decomp;
  campaign.mode = SampleMode::grouped;
  for (const WitnessTerm& term : decomp.terms)
    if (term.i == 0 && term.j == 0)
      campaign.identity_coefficient = term.coefficient;

  std::map<int, FactorEigen> cache;
  for (const MeasurementGroup& group : groups) {
    if (group.members.size() == 1) {
      // keep singleton groups bit-compatible with per-term sampling
      const int t = group.members.front();
      campaign.units.push_back(
          prepare_term_unit(decomp.terms[t], basis, rho.rho, cache, t));
      continue;
    }
    PreparedUnit unit;
    unit.term_indices = group.members;
    unit.weight = group.weight;
    unit.probabilities = born_probabilities(group.eigenbasis, rho.rho);
    unit.values = group.member_values;
    campaign.units.push_back(std::move(unit));
  }
  return campaign;
}

std::vector<long long> sample_counts(const Eigen::VectorXd& probabilities,
                                     long long shots, std::mt19937_64& rng) {
  const int n_outcomes = static_cast<int>(probabilities.size());
  std::vector<long long> counts(n_outcomes, 0);
  long long remaining = shots;
  double mass = 1.0;
  for (int k = 0; k + 1 < n_outcomes && remaining > 0; ++k) {
    const double p = std::clamp(mass > 0.0 ? probabilities(k) / mass : 1.0,
                                0.0, 1.0);
    long long c;
    if (p >= 1.0) {
      c = remaining;
    } else if (p <= 0.0) {
      c = 0;
    } else {
      c = std::binomial_distribution<long long>(remaining, p)(rng);
    }
    counts[k] = c;
    remaining -= c;
    mass -= probabilities(k);
  }
  counts[n_outcomes - 1] += remaining;
  return counts;
}

UnitRecord record_from_counts(const std::vector<long long>& counts,
                              const Eigen::VectorXd& values) {
  UnitRecord record;
  for (size_t k = 0; k < counts.size(); ++k) record.shots += counts[k];
  if (record.shots == 0) return record;
  double sum = 0.0;
  for (size_t k = 0; k < counts.size(); ++k)
    sum += double(counts[k]) * values(static_cast<int>(k));
  record.mean = sum / double(record.shots);
  if (record.shots > 1) {
    double ss = 0.0;
    for (size_t k = 0; k < counts.size(); ++k) {
      const double dev = values(static_cast<int>(k)) - record.mean;
      ss += double(counts[k]) * dev * dev;
    }
    record.variance = ss / double(record.shots - 1);
  }
  return record;
}

UnitRecord sample_term(const WitnessTerm& term,
                       const std::vector<BasisElement>& basis,
                       const DensityMatrix& rho, long long shots,
                       std::mt19937_64& rng) {
  std::map<int, FactorEigen> cache;
  const PreparedUnit unit = prepare_term_unit(term, basis, rho.rho, cache, 0);
  return record_from_counts(sample_counts(unit.probabilities, shots, rng),
                            unit.values[0]);
}

std::vector<UnitRecord> sample_group(const MeasurementGroup& group,
                                     const WitnessDecomposition& decomp,
                                     const std::vector<BasisElement>& basis,
                                     const DensityMatrix& rho, long long shots,
                                     std::mt19937_64& rng) {
  std::vector<MeasurementGroup> one{group};
  const Campaign campaign =
      prepare_group_campaign(decomp, basis, one, rho);
  const PreparedUnit& unit = campaign.units.front();
  const auto counts = sample_counts(unit.probabilities, shots, rng);
  std::vector<UnitRecord> records;
  records.reserve(unit.values.size());
  for (const Eigen::VectorXd& values : unit.values)
    records.push_back(record_from_counts(counts, values));
  return records;
}

double confidence_level(double estimate, double std_error, double avg_shots) {
  if (std_error < 0.0 || !(avg_shots > 1.0))
    throw std::invalid_argument("confidence_level: invalid inputs");
  constexpr double kCap = 1.0 - 1e-15;
  if (std_error == 0.0) return estimate < 0.0 ? kCap : 0.5;
  const boost::math::students_t_distribution<double> dist(avg_shots - 1.0);
  const double t_signed = -estimate / std_error;
  return std::min(boost::math::cdf(dist, t_signed), kCap);
}

double confidence_level(const ConfidenceReport& report) {
  return confidence_level(report.estimate, report.std_error, report.avg_shots);
}

ConfidenceReport witness_statistics(
    const Campaign& campaign,
    const std::vector<std::vector<UnitRecord>>& records, double ci_level) {
  if (records.size() != campaign.units.size())
    throw std::invalid_argument("witness_statistics: record/unit mismatch");
  if (!(ci_level > 0.0 && ci_level < 1.0))
    throw std::invalid_argument("witness_statistics: ci_level in (0,1)");

  ConfidenceReport report;
  report.ci_level = ci_level;
  report.estimate = campaign.identity_coefficient;
  long long total = 0;
  for (size_t u = 0; u < campaign.units.size(); ++u) {
    const PreparedUnit& unit = campaign.units[u];
    if (records[u].size() != unit.term_indices.size())
      throw std::invalid_argument("witness_statistics: record/term mismatch");
    total += records[u].empty() ? 0 : records[u].front().shots;
    for (size_t s = 0; s < unit.term_indices.size(); ++s) {
      const double c = campaign.decomp.terms[unit.term_indices[s]].coefficient;
      report.estimate += c * records[u][s].mean;
      report.variance += c * c * records[u][s].variance;
    }
  }
  report.avg_shots = double(total) / double(campaign.units.size());
  report.std_error = std::sqrt(report.variance / report.avg_shots);
  report.t_value = report.std_error > 0.0
                       ? std::abs(report.estimate) / report.std_error
                       : (report.estimate == 0.0
                              ? 0.0
                              : std::numeric_limits<double>::infinity());
  report.confidence =
      confidence_level(report.estimate, report.std_error, report.avg_shots);
  double half_width = 0.0;
  if (report.std_error > 0.0) {
    const boost::math::students_t_distribution<double> dist(report.avg_shots -
                                                            1.0);
    half_width =
        boost::math::quantile(dist, 0.5 + ci_level / 2.0) * report.std_error;
  }
  report.ci_low = report.estimate - half_width;
  report.ci_high = report.estimate + half_width;
  return report;
}

TrialResult run_campaign_trial(const Campaign& campaign, long long shots,
                               int repetitions, std::uint64_t seed,
                               double ci_level) {
  if (repetitions < 1)
    throw std::invalid_argument("run_campaign_trial: repetitions >= 1");
  std::vector<double> weights;
  weights.reserve(campaign.units.size());
  for (const PreparedUnit& unit : campaign.units)
    weights.push_back(unit.weight);
  const auto allocations = allocate_shots(weights, shots);

  TrialResult result;
  result.shots = shots;
  result.mode = campaign.mode;
  result.reports.reserve(repetitions);
  for (int rep = 0; rep < repetitions; ++rep) {
    std::vector<std::vector<UnitRecord>> records(campaign.units.size());
    for (size_t u = 0; u < campaign.units.size(); ++u) {
      const PreparedUnit& unit = campaign.units[u];
      auto rng = make_rng(derive_stream(seed, rep, u));
      const auto counts =
          sample_counts(unit.probabilities, allocations[u], rng);
      records[u].reserve(unit.values.size());
      for (const Eigen::VectorXd& values : unit.values)
        records[u].push_back(record_from_counts(counts, values));
    }
    result.reports.push_back(witness_statistics(campaign, records, ci_level));
  }

  double conf_sum = 0.0, est_sum = 0.0, se_sum = 0.0;
  for (const ConfidenceReport& r : result.reports) {
    conf_sum += r.confidence;
    est_sum += r.estimate;
    se_sum += r.std_error;
  }
  const double n = double(repetitions);
  result.mean_confidence = conf_sum / n;
  result.mean_estimate = est_sum / n;
  result.mean_std_error = se_sum / n;
  if (repetitions > 1) {
    double ss = 0.0;
    for (const ConfidenceReport& r : result.reports) {
      const double dev = r.confidence - result.mean_confidence;
      ss += dev * dev;
    }
    result.std_confidence = std::sqrt(ss / (n - 1.0));
  }
  return result;
}

TrialResult run_trial(const ExperimentConfig& config,
                      const TrialSettings& settings) {
  const auto witness = make_witness(config, settings.kind);
  if (!witness)
    throw std::domain_error("run_trial: configuration admits no witness");
  const auto basis = gell_mann_basis(config.dimension);
  const auto decomp = decompose_witness(*witness, settings.epsilon_rel);
  const DensityMatrix rho = make_density(config);

  Campaign campaign;
  if (settings.mode == SampleMode::per_term) {
    campaign = prepare_term_campaign(decomp, basis, rho);
  } else {
    const auto graph = commutation_graph(decomp, basis);
    const auto groups = group_terms_ldfc(graph, decomp, basis);
    campaign = prepare_group_campaign(decomp, basis, groups, rho);
  }
  return run_campaign_trial(campaign, settings.shots, settings.repetitions,
                            settings.seed, settings.ci_level);
}

}  // namespace qgem
