#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "tfbench/direction.hpp"
#include "tfbench/metrics.hpp"

namespace tfbench::stats {

// ---- bootstrap ----------------------------------------------------------

struct BootstrapOptions {
  int resamples = 2000;
  double level = 0.95;
  std::uint64_t seed = 42;
  // 0 means std::thread::hardware_concurrency(). The result does not depend
  // on this value: resample i always draws from derive_seed(seed, i).
  unsigned threads = 1;
};

struct Interval {
  double low = 0;
  double high = 0;
  double estimate = 0;        // metric on the original items
  double bootstrap_mean = 0;  // mean of the resampled values
};

// Resampled corpus scores, one per resample, in resample order.
std::vector<double> bootstrap_distribution(const metrics::ItemStatistics& stats,
                                           const BootstrapOptions& opts);
// Percentile interval over the resampled scores. Throws Error("BAD_BOOTSTRAP")
// for an empty item set, resamples < 1 or level outside (0,1).
Interval bootstrap_ci(const metrics::ItemStatistics& stats, const BootstrapOptions& opts = {});

// Same procedure for an arbitrary corpus metric: every resample is
// materialized as a HypothesisSet and scored from scratch.
using SetMetric = std::function<double(const metrics::HypothesisSet&)>;
Interval bootstrap_ci(const metrics::HypothesisSet& set, const SetMetric& metric,
                      const BootstrapOptions& opts = {});

// Linear interpolation between closest ranks; `sorted` must be ascending.
double percentile(std::span<const double> sorted, double q);

// ---- paired tests -------------------------------------------------------

struct WilcoxonResult {
  std::size_t n = 0;      // non-zero differences
  double w_plus = 0;      // sum of ranks of positive differences
  double p_value = 1.0;   // two-sided
  bool exact = false;
};

inline constexpr std::size_t kWilcoxonExactMax = 12;

// Zero differences are dropped and tied magnitudes share the average rank.
// Exact null distribution for n <= 12, normal approximation with tie and
// continuity correction above. Throws Error("LENGTH_MISMATCH").
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

// Null distribution of twice the positive-rank sum for the given doubled
// ranks: entry s counts sign assignments whose doubled W+ equals s.
std::vector<std::uint64_t> wilcoxon_null_counts(std::span<const std::uint64_t> doubled_ranks);

struct TTestResult {
  double t = 0;  // +-inf when the differences have zero variance and nonzero mean
  double df = 0;
  double p_value = 1.0;  // two-sided
};

// Requires n >= 2 (Error("TOO_FEW_ITEMS")). Zero variance yields p = 0 for
// a nonzero mean difference and p = 1 otherwise.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

// ---- aggregation --------------------------------------------------------

struct RunAggregate {
  std::string metric_name;
  std::vector<double> per_seed_values;
  double mean = 0;
  std::optional<double> std;  // sample std; absent for a single value
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  double ci_level = 0.95;
};

// Throws Error("EMPTY_AGGREGATE") for no values.
RunAggregate aggregate_runs(std::string metric_name, std::span<const double> values);

nlohmann::json to_json(const RunAggregate& agg);

struct PairComparison {
  std::string model_a;
  std::string model_b;
  std::size_t items = 0;
  double mean_a = 0;
  double mean_b = 0;
  double wilcoxon_p = 1.0;
  double ttest_p = 1.0;
  double significant_at = 0.05;
  bool significant = false;  // both tests below the threshold
};

struct SignificanceReport {
  Direction direction = Direction::kTj2Fa;
  std::vector<PairComparison> pairs;
};

struct NamedScores {
  std::string model;
  std::vector<double> scores;  // paired by position across models
};

// All C(m,2) pairs in input order (a before b). Throws Error("LENGTH_MISMATCH").
SignificanceReport compare_models(Direction direction, const std::vector<NamedScores>& models,
                                  double alpha = 0.05);

nlohmann::json to_json(const SignificanceReport& report);
SignificanceReport significance_report_from_json(const nlohmann::json& j);

}  // namespace tfbench::stats
