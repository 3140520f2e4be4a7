#pragma once

// Reproducible Monte Carlo comparisons of simulated laws against the
// analytic ones. Samples are drawn in fixed blocks of kBlockSize; block b
// uses stream (seed, b) whichever worker runs it, and blocks are merged in
// order. A report therefore depends on (seed, n_samples) only, and a
// smaller run is a prefix of a larger one.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "yule/analytic.hpp"
#include "yule/processes.hpp"

namespace yule::montecarlo {

using analytic::Pmf;
using processes::ModelParams;

inline constexpr std::uint64_t kBlockSize = 4096;

enum class Target { TN, TFPP_MARGINAL, MPP_COUNT, YULE_EXAMPLE, BIRTH_TIMES, ML_WAITING, INVERSE_STABLE, CRITICAL_BD };

std::string target_name(Target target);
/// Accepts the enum spelling, case-insensitive, with '-' for '_'.
Target parse_target(const std::string& name);
bool is_discrete(Target target);

struct McConfig {
  ModelParams params;
  double t = 1.0;
  std::uint64_t n_samples = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  Target target = Target::TN;
  /// Largest outcome compared atom by atom; the rest is pooled into one tail bin.
  std::uint64_t support_ceiling = 40;

  void validate() const;
};

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

struct SampleMoments {
  double mean = 0.0;
  double variance = 0.0;
  double mean_se = 0.0;
  double variance_se = 0.0;
};

struct ComparisonReport {
  McConfig config;
  bool discrete = true;
  std::uint64_t n_values = 0;  // samples entering the comparison (birth times may differ from n_samples)

  // Discrete targets: both laws on the same support, the last bin pooled
  // (truncation_tail_bound holds the pooled mass).
  Pmf empirical;
  Pmf analytic;

  // Continuous targets: CDFs on a common grid.
  std::vector<double> grid;
  std::vector<double> empirical_cdf;
  std::vector<double> analytic_cdf;

  double tv_distance = 0.0;
  double ks_statistic = 0.0;
  ChiSquare chi_square;
  SampleMoments sample_moments;
  std::optional<double> analytic_mean;
  std::optional<double> analytic_variance;
};

ComparisonReport run_experiment(const McConfig& config);

/// 1/2 sum |p_k - q_k| over the union of supports, with each law's
/// truncation tail treated as one further atom.
double tv_distance(const Pmf& p, const Pmf& q);

/// sup |F_n - F| over the sample, evaluating cdf at every sample point.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Pearson statistic after merging adjacent bins until every expected count
/// is at least 5; dof = bins - 1.
ChiSquare chi_square(const std::vector<double>& observed, const std::vector<double>& expected);

/// Kolmogorov critical value at the 1% level, 1.628 / sqrt(n).
double ks_critical_1pct(std::uint64_t n);

struct SweepPoint {
  std::uint64_t n = 0;
  double tv_distance = 0.0;
};
std::vector<SweepPoint> convergence_sweep(const McConfig& config, const std::vector<std::uint64_t>& sample_sizes);
/// Least-squares slope of log tv against log n.
double sweep_slope(const std::vector<SweepPoint>& points);

nlohmann::json report_to_json(const ComparisonReport& report);
nlohmann::json params_to_json(const ModelParams& params);

}  // namespace yule::montecarlo
