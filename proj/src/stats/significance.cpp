#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "tfbench/error.hpp"
#include "tfbench/stats.hpp"

namespace tfbench::stats {
namespace {

void check_lengths(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("LENGTH_MISMATCH", "paired samples differ in length (" + std::to_string(a.size()) +
                                       " vs " + std::to_string(b.size()) + ")");
  }
}

}  // namespace

std::vector<std::uint64_t> wilcoxon_null_counts(std::span<const std::uint64_t> doubled_ranks) {
  const std::uint64_t total = std::accumulate(doubled_ranks.begin(), doubled_ranks.end(), std::uint64_t{0});
  std::vector<std::uint64_t> counts(total + 1, 0);
  counts[0] = 1;
  std::uint64_t reach = 0;
  for (std::uint64_t r : doubled_ranks) {
    reach += r;
    for (std::uint64_t s = reach; s >= r; --s) {
      counts[s] += counts[s - r];
      if (s == r) break;
    }
  }
  return counts;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  std::vector<double> d;
  d.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  }
  WilcoxonResult res;
  res.n = d.size();
  if (d.empty()) {
    res.exact = true;
    return res;
  }

  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return std::abs(d[x]) < std::abs(d[y]); });

  std::vector<std::uint64_t> doubled(d.size());
  double tie_term = 0;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t e = k + 1;
    while (e < order.size() && std::abs(d[order[e]]) == std::abs(d[order[k]])) ++e;
    const std::uint64_t t = e - k;
    // positions k+1..e share rank (k+1+e)/2; doubled that is k+1+e
    for (std::size_t m = k; m < e; ++m) doubled[order[m]] = k + 1 + e;
    tie_term += static_cast<double>(t * t * t - t);
    k = e;
  }

  std::uint64_t w2 = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > 0) w2 += doubled[i];
  }
  res.w_plus = static_cast<double>(w2) / 2.0;

  const double n = static_cast<double>(d.size());
  if (d.size() <= kWilcoxonExactMax) {
    res.exact = true;
    const auto counts = wilcoxon_null_counts(doubled);
    std::uint64_t le = 0, ge = 0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
      if (s <= w2) le += counts[s];
      if (s >= w2) ge += counts[s];
    }
    const double total = std::ldexp(1.0, static_cast<int>(d.size()));
    res.p_value = std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / total);
    return res;
  }

  const double mean = n * (n + 1) / 4.0;
  const double var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term / 48.0;
  double diff = res.w_plus - mean;
  if (diff > 0) diff -= 0.5;
  else if (diff < 0) diff += 0.5;
  const double z = var > 0 ? diff / std::sqrt(var) : 0.0;
  res.p_value = std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
  return res;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  check_lengths(a, b);
  if (a.size() < 2) throw Error("TOO_FEW_ITEMS", "paired t-test needs at least 2 pairs");
  const double n = static_cast<double>(a.size());
  double mean = 0;
  for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
  mean /= n;
  double ss = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = (a[i] - b[i]) - mean;
    ss += e * e;
  }
  TTestResult res;
  res.df = n - 1;
  const double sd = std::sqrt(ss / (n - 1));
  if (sd == 0.0) {
    if (mean == 0.0) {
      res.t = 0;
      res.p_value = 1.0;
    } else {
      res.t = mean > 0 ? HUGE_VAL : -HUGE_VAL;
      res.p_value = 0.0;
    }
    return res;
  }
  res.t = mean / (sd / std::sqrt(n));
  const boost::math::students_t dist(res.df);
  res.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(res.t))));
  return res;
}

SignificanceReport compare_models(Direction direction, const std::vector<NamedScores>& models,
                                  double alpha) {
  SignificanceReport report;
  report.direction = direction;
  const auto mean_of = [](const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      const auto& a = models[i];
      const auto& b = models[j];
      PairComparison pc;
      pc.model_a = a.model;
      pc.model_b = b.model;
      pc.items = a.scores.size();
      pc.mean_a = mean_of(a.scores);
      pc.mean_b = mean_of(b.scores);
      pc.wilcoxon_p = wilcoxon_signed_rank(a.scores, b.scores).p_value;
      pc.ttest_p = paired_t_test(a.scores, b.scores).p_value;
      pc.significant_at = alpha;
      pc.significant = pc.wilcoxon_p < alpha && pc.ttest_p < alpha;
      report.pairs.push_back(std::move(pc));
    }
  }
  return report;
}

nlohmann::json to_json(const SignificanceReport& report) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"model_a", p.model_a},
                     {"model_b", p.model_b},
                     {"items", p.items},
                     {"mean_a", p.mean_a},
                     {"mean_b", p.mean_b},
                     {"wilcoxon_p", p.wilcoxon_p},
                     {"ttest_p", p.ttest_p},
                     {"significant_at", p.significant_at},
                     {"significant", p.significant}});
  }
  return {{"direction", to_string(report.direction)}, {"pairs", std::move(pairs)}};
}

SignificanceReport significance_report_from_json(const nlohmann::json& j) {
  try {
    SignificanceReport r;
    r.direction = parse_direction(j.at("direction").get<std::string>());
    for (const auto& p : j.at("pairs")) {
      PairComparison pc;
      pc.model_a = p.at("model_a").get<std::string>();
      pc.model_b = p.at("model_b").get<std::string>();
      pc.items = p.at("items").get<std::size_t>();
      pc.mean_a = p.at("mean_a").get<double>();
      pc.mean_b = p.at("mean_b").get<double>();
      pc.wilcoxon_p = p.at("wilcoxon_p").get<double>();
      pc.ttest_p = p.at("ttest_p").get<double>();
      pc.significant_at = p.at("significant_at").get<double>();
      pc.significant = p.at("significant").get<bool>();
      r.pairs.push_back(std::move(pc));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error("BAD_REPORT", std::string("malformed significance report: ") + e.what());
  }
}

}  // namespace tfbench::stats
