#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tfbench/error.hpp"
#include "tfbench/random.hpp"
#include "tfbench/stats.hpp"

namespace tfbench::stats {
namespace {

using metrics::HypothesisSet;

// Two-sided exact p by enumerating all 2^n sign patterns of the nonzero
// differences, ranks assigned independently of the library.
double enumerated_wilcoxon_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) d.push_back(a[i] - b[i]);
  }
  const std::size_t n = d.size();
  if (n == 0) return 1.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return std::abs(d[x]) < std::abs(d[y]); });
  std::vector<long> rank2(n);  // doubled average ranks
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && std::abs(d[order[j]]) == std::abs(d[order[i]])) ++j;
    for (std::size_t k = i; k < j; ++k) rank2[order[k]] = static_cast<long>(i + 1 + j);
    i = j;
  }
  long observed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0) observed += rank2[i];
  }
  std::uint64_t le = 0, ge = 0;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    long w = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) w += rank2[i];
    }
    if (w <= observed) ++le;
    if (w >= observed) ++ge;
  }
  return std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) / std::ldexp(1.0, static_cast<int>(n)));
}

// Student t two-sided tail by Simpson integration of the density.
double integrated_t_p(double t, double df) {
  const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
  const auto f = [&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
  const int steps = 200000;
  const double h = std::abs(t) / steps;
  double s = f(0) + f(std::abs(t));
  for (int i = 1; i < steps; ++i) s += f(i * h) * (i % 2 ? 4 : 2);
  return 1.0 - 2.0 * s * h / 3.0;
}

HypothesisSet noisy_set(std::size_t n, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  const std::vector<std::string> words{"салом", "дунё", "китоб", "хона", "об", "нон", "мардум", "шаҳр"};
  HypothesisSet s;
  for (std::size_t i = 0; i < n; ++i) {
    std::string ref, hyp;
    for (std::size_t k = 0; k < 2 + uniform_below(rng, 5); ++k) {
      const auto& w = words[uniform_below(rng, words.size())];
      ref += (k ? " " : "") + w;
      hyp += (k ? " " : "") + (uniform_below(rng, 3) == 0 ? words[uniform_below(rng, words.size())] : w);
    }
    s.items.push_back({hyp, ref, "words"});
  }
  return s;
}

// ---- bootstrap ----------------------------------------------------------

TEST(Percentile, LinearInterpolation) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(percentile(v, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(percentile(v, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(percentile(v, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(percentile(v, 0.25), 1.75);
  const std::vector<double> single{7};
  EXPECT_DOUBLE_EQ(percentile(single, 0.3), 7.0);
}

TEST(Bootstrap, IdenticalPairsGiveDegenerateInterval) {
  HypothesisSet s;
  for (int i = 0; i < 20; ++i) s.items.push_back({"китоб " + std::to_string(i), "китоб " + std::to_string(i), "w"});
  const auto ci = bootstrap_ci(metrics::chrf_statistics(s, {}), {.resamples = 200});
  EXPECT_EQ(ci.low, 100.0);
  EXPECT_EQ(ci.high, 100.0);
  EXPECT_EQ(ci.estimate, 100.0);
}

TEST(Bootstrap, DeterministicAndThreadIndependent) {
  const auto stats = metrics::chrf_statistics(noisy_set(80, 3), {});
  BootstrapOptions o{.resamples = 300, .level = 0.95, .seed = 7, .threads = 1};
  const auto d1 = bootstrap_distribution(stats, o);
  EXPECT_EQ(d1, bootstrap_distribution(stats, o));
  for (unsigned t : {2u, 4u, 0u}) {
    o.threads = t;
    EXPECT_EQ(d1, bootstrap_distribution(stats, o)) << t;
  }
  o.seed = 8;
  EXPECT_NE(d1, bootstrap_distribution(stats, o));
}

TEST(Bootstrap, IntervalWithinDistribution) {
  const auto stats = metrics::chrf_statistics(noisy_set(60, 5), {});
  const BootstrapOptions o{.resamples = 500};
  const auto dist = bootstrap_distribution(stats, o);
  const auto ci = bootstrap_ci(stats, o);
  EXPECT_LE(ci.low, ci.high);
  EXPECT_GE(ci.low, *std::min_element(dist.begin(), dist.end()));
  EXPECT_LE(ci.high, *std::max_element(dist.begin(), dist.end()));
  EXPECT_DOUBLE_EQ(ci.estimate, stats.corpus_score());
  EXPECT_NEAR(ci.bootstrap_mean, std::accumulate(dist.begin(), dist.end(), 0.0) / dist.size(), 1e-9);
  auto sorted = dist;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_DOUBLE_EQ(ci.low, percentile(sorted, 0.025));
  EXPECT_DOUBLE_EQ(ci.high, percentile(sorted, 0.975));
}

TEST(Bootstrap, GenericOverloadAgreesWithStatistics) {
  const auto set = noisy_set(40, 9);
  const BootstrapOptions o{.resamples = 100, .seed = 11};
  const auto a = bootstrap_ci(metrics::chrf_statistics(set, {}), o);
  const auto b = bootstrap_ci(set, [](const HypothesisSet& s) { return metrics::chrf_pp(s).corpus; }, o);
  EXPECT_NEAR(a.low, b.low, 1e-9);
  EXPECT_NEAR(a.high, b.high, 1e-9);
  EXPECT_NEAR(a.estimate, b.estimate, 1e-9);
}

TEST(Bootstrap, RejectsBadOptions) {
  const auto stats = metrics::chrf_statistics(noisy_set(5, 1), {});
  EXPECT_THROW(bootstrap_ci(stats, {.resamples = 0}), Error);
  EXPECT_THROW(bootstrap_ci(stats, {.level = 1.0}), Error);
  EXPECT_THROW(bootstrap_ci(metrics::chrf_statistics(HypothesisSet{}, {}), {}), Error);
}

// ---- Wilcoxon ---------------------------------------------------------

TEST(Wilcoxon, IdenticalSamples) {
  const std::vector<double> a{1, 2, 3, 4, 5};
  const auto r = wilcoxon_signed_rank(a, a);
  EXPECT_EQ(r.n, 0u);
  EXPECT_EQ(r.p_value, 1.0);
}

TEST(Wilcoxon, SixPositiveShifts) {
  const std::vector<double> a{1, 2, 3, 4, 5, 6};
  const std::vector<double> b{0, 0.5, 1, 1.5, 2, 2.5};
  const auto r = wilcoxon_signed_rank(a, b);
  EXPECT_TRUE(r.exact);
  EXPECT_EQ(r.n, 6u);
  EXPECT_EQ(r.w_plus, 21.0);
  EXPECT_EQ(r.p_value, 0.03125);
}

TEST(Wilcoxon, ExactMatchesEnumerationIncludingTies) {
  Xoshiro256 rng(21);
  for (std::size_t n = 1; n <= 10; ++n) {
    for (int rep = 0; rep < 40; ++rep) {
      std::vector<double> a(n), b(n);
      for (std::size_t i = 0; i < n; ++i) {
        a[i] = static_cast<double>(uniform_below(rng, 5));
        b[i] = static_cast<double>(uniform_below(rng, 5));
      }
      const auto r = wilcoxon_signed_rank(a, b);
      ASSERT_EQ(r.p_value, enumerated_wilcoxon_p(a, b)) << "n=" << n << " rep=" << rep;
    }
  }
}

TEST(Wilcoxon, NullCountsSumToAllPatterns) {
  for (std::size_t n = 1; n <= 12; ++n) {
    std::vector<std::uint64_t> r2(n);
    for (std::size_t i = 0; i < n; ++i) r2[i] = 2 * (i + 1);
    const auto counts = wilcoxon_null_counts(r2);
    EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}), 1ull << n);
    EXPECT_EQ(counts.size(), n * (n + 1) + 1);
    for (std::size_t s = 0; s < counts.size(); ++s) EXPECT_EQ(counts[s], counts[counts.size() - 1 - s]);
  }
  const std::vector<std::uint64_t> tied{3, 3};
  EXPECT_EQ(wilcoxon_null_counts(tied), (std::vector<std::uint64_t>{1, 0, 0, 2, 0, 0, 1}));
}

TEST(Wilcoxon, NormalApproximationCloseToExact) {
  Xoshiro256 rng(5);
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<double> a(20), b(20);
    for (std::size_t i = 0; i < 20; ++i) {
      a[i] = uniform_unit(rng) + 0.1 * rep;
      b[i] = uniform_unit(rng);
    }
    const auto r = wilcoxon_signed_rank(a, b);
    EXPECT_FALSE(r.exact);
    EXPECT_NEAR(r.p_value, enumerated_wilcoxon_p(a, b), 0.02);
  }
}

TEST(Wilcoxon, SymmetricUnderSwap) {
  Xoshiro256 rng(8);
  for (std::size_t n : {4u, 9u, 15u, 40u}) {
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(uniform_below(rng, 7));
      b[i] = static_cast<double>(uniform_below(rng, 7));
    }
    EXPECT_DOUBLE_EQ(wilcoxon_signed_rank(a, b).p_value, wilcoxon_signed_rank(b, a).p_value);
  }
  const std::vector<double> x{1, 2}, y{1};
  EXPECT_THROW(wilcoxon_signed_rank(x, y), Error);
}

// ---- t-test -----------------------------------------------------------

TEST(TTest, Degenerate) {
  const std::vector<double> a{1, 2, 3, 4};
  EXPECT_EQ(paired_t_test(a, a).p_value, 1.0);
  const std::vector<double> b{0, 1, 2, 3};
  EXPECT_EQ(paired_t_test(a, b).p_value, 0.0);
  const std::vector<double> one{1};
  EXPECT_THROW(paired_t_test(one, one), Error);
}

TEST(TTest, HandComputedExample) {
  const std::vector<double> a{1, 2, 3}, b{0, 0, 0};
  const auto r = paired_t_test(a, b);
  EXPECT_NEAR(r.t, 2 * std::sqrt(3.0), 1e-12);
  EXPECT_EQ(r.df, 2.0);
  // closed form for two degrees of freedom: p = 1 - t / sqrt(t^2 + 2)
  EXPECT_NEAR(r.p_value, 1 - r.t / std::sqrt(r.t * r.t + 2), 1e-12);
  EXPECT_NEAR(r.p_value, 0.0742, 1e-4);
}

TEST(TTest, MatchesIntegratedDensity) {
  Xoshiro256 rng(17);
  for (std::size_t n : {3u, 5u, 12u, 30u}) {
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = uniform_unit(rng) + 0.2;
      b[i] = uniform_unit(rng);
    }
    const auto r = paired_t_test(a, b);
    EXPECT_EQ(r.df, static_cast<double>(n - 1));
    EXPECT_NEAR(r.p_value, integrated_t_p(r.t, r.df), 1e-8) << n;
    EXPECT_DOUBLE_EQ(paired_t_test(b, a).p_value, r.p_value);
    EXPECT_DOUBLE_EQ(paired_t_test(b, a).t, -r.t);
  }
}

TEST(TTest, PValueFallsAsShiftGrows) {
  const std::vector<double> base{0.1, -0.2, 0.3, 0.05, -0.1, 0.2};
  double prev = 1.1;
  for (double shift = 0; shift <= 1.0; shift += 0.05) {
    std::vector<double> a(base.size()), zero(base.size(), 0.0);
    for (std::size_t i = 0; i < base.size(); ++i) a[i] = base[i] + shift;
    const double p = paired_t_test(a, zero).p_value;
    EXPECT_LT(p, prev);
    prev = p;
  }
}

// ---- aggregation --------------------------------------------------------

TEST(Aggregate, Examples) {
  const std::vector<double> same{87.4, 87.4, 87.4};
  const auto a = aggregate_runs("chrF++", same);
  EXPECT_DOUBLE_EQ(a.mean, 87.4);
  ASSERT_TRUE(a.std);
  EXPECT_NEAR(*a.std, 0.0, 1e-12);

  const std::vector<double> v{80.0, 80.2, 80.1};
  const auto b = aggregate_runs("chrF++", v);
  EXPECT_NEAR(b.mean, 80.1, 1e-12);
  EXPECT_NEAR(*b.std, 0.1, 1e-12);

  const std::vector<double> single{50};
  EXPECT_FALSE(aggregate_runs("BLEU", single).std);
  EXPECT_TRUE(to_json(aggregate_runs("BLEU", single)).at("std").is_null());
  EXPECT_THROW(aggregate_runs("BLEU", {}), Error);
}

TEST(CompareModels, AllPairsInOrder) {
  std::vector<NamedScores> models{{"a", {1, 2, 3, 4, 5, 6}}, {"b", {0, 0, 0, 0, 0, 0}}, {"c", {1, 2, 3, 4, 5, 6}}};
  const auto rep = compare_models(Direction::kFa2Tj, models, 0.05);
  ASSERT_EQ(rep.pairs.size(), 3u);
  EXPECT_EQ(rep.pairs[0].model_a, "a");
  EXPECT_EQ(rep.pairs[0].model_b, "b");
  EXPECT_EQ(rep.pairs[1].model_b, "c");
  EXPECT_EQ(rep.pairs[2].model_a, "b");
  EXPECT_TRUE(rep.pairs[0].significant);
  EXPECT_FALSE(rep.pairs[1].significant);
  EXPECT_EQ(rep.pairs[1].wilcoxon_p, 1.0);
  EXPECT_DOUBLE_EQ(rep.pairs[0].mean_a, 3.5);
  EXPECT_EQ(rep.pairs[0].items, 6u);

  const auto back = significance_report_from_json(nlohmann::json::parse(to_json(rep).dump()));
  EXPECT_EQ(back.direction, Direction::kFa2Tj);
  ASSERT_EQ(back.pairs.size(), 3u);
  EXPECT_EQ(back.pairs[0].wilcoxon_p, rep.pairs[0].wilcoxon_p);

  models.push_back({"d", {1}});
  EXPECT_THROW(compare_models(Direction::kFa2Tj, models), Error);
}

}  // namespace
}  // namespace tfbench::stats
