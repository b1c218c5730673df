#include <cmath>

#include "tfbench/error.hpp"
#include "tfbench/stats.hpp"

namespace tfbench::stats {

RunAggregate aggregate_runs(std::string metric_name, std::span<const double> values) {
  if (values.empty()) throw Error("EMPTY_AGGREGATE", "no values to aggregate for " + metric_name);
  RunAggregate agg;
  agg.metric_name = std::move(metric_name);
  agg.per_seed_values.assign(values.begin(), values.end());
  double sum = 0;
  for (double v : values) sum += v;
  agg.mean = sum / static_cast<double>(values.size());
  if (values.size() >= 2) {
    double ss = 0;
    for (double v : values) ss += (v - agg.mean) * (v - agg.mean);
    agg.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return agg;
}

nlohmann::json to_json(const RunAggregate& agg) {
  const auto opt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
  return {{"metric", agg.metric_name}, {"per_seed_values", agg.per_seed_values},
          {"mean", agg.mean},          {"std", opt(agg.std)},
          {"ci_low", opt(agg.ci_low)}, {"ci_high", opt(agg.ci_high)},
          {"ci_level", agg.ci_level}};
}

}  // namespace tfbench::stats
