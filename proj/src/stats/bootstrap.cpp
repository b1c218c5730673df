#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "tfbench/error.hpp"
#include "tfbench/random.hpp"
#include "tfbench/stats.hpp"

namespace tfbench::stats {
namespace {

void check(std::size_t items, const BootstrapOptions& opts) {
  if (items == 0) throw Error("BAD_BOOTSTRAP", "bootstrap needs at least one item");
  if (opts.resamples < 1) throw Error("BAD_BOOTSTRAP", "resamples must be >= 1");
  if (!(opts.level > 0 && opts.level < 1)) throw Error("BAD_BOOTSTRAP", "level must lie in (0,1)");
}

std::vector<std::size_t> draw(std::size_t n, std::uint64_t seed, int iteration) {
  Xoshiro256 rng(derive_seed(seed, static_cast<std::uint64_t>(iteration)));
  std::vector<std::size_t> idx(n);
  for (auto& i : idx) i = static_cast<std::size_t>(uniform_below(rng, n));
  return idx;
}

// Runs body(i) for every resample; each i writes only its own slot.
void for_each_resample(int resamples, unsigned threads, const std::function<void(int)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(resamples));
  if (threads <= 1) {
    for (int i = 0; i < resamples; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  const int chunk = (resamples + static_cast<int>(threads) - 1) / static_cast<int>(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        const int lo = static_cast<int>(t) * chunk;
        const int hi = std::min(resamples, lo + chunk);
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Interval summarize(std::vector<double> values, double estimate, double level) {
  Interval out;
  out.estimate = estimate;
  out.bootstrap_mean = std::accumulate(values.begin(), values.end(), 0.0) /
                       static_cast<double>(values.size());
  std::sort(values.begin(), values.end());
  const double alpha = (1.0 - level) / 2.0;
  out.low = percentile(values, alpha);
  out.high = percentile(values, 1.0 - alpha);
  return out;
}

}  // namespace

double percentile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error("BAD_BOOTSTRAP", "percentile of an empty sample");
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

std::vector<double> bootstrap_distribution(const metrics::ItemStatistics& stats,
                                           const BootstrapOptions& opts) {
  const std::size_t n = stats.items();
  check(n, opts);
  std::vector<double> values(static_cast<std::size_t>(opts.resamples));
  for_each_resample(opts.resamples, opts.threads, [&](int i) {
    values[static_cast<std::size_t>(i)] = stats.score(draw(n, opts.seed, i));
  });
  return values;
}

Interval bootstrap_ci(const metrics::ItemStatistics& stats, const BootstrapOptions& opts) {
  auto values = bootstrap_distribution(stats, opts);
  return summarize(std::move(values), stats.corpus_score(), opts.level);
}

Interval bootstrap_ci(const metrics::HypothesisSet& set, const SetMetric& metric,
                      const BootstrapOptions& opts) {
  const std::size_t n = set.size();
  check(n, opts);
  std::vector<double> values(static_cast<std::size_t>(opts.resamples));
  for_each_resample(opts.resamples, opts.threads, [&](int i) {
    metrics::HypothesisSet sample;
    sample.direction = set.direction;
    sample.items.reserve(n);
    for (std::size_t idx : draw(n, opts.seed, i)) sample.items.push_back(set.items[idx]);
    values[static_cast<std::size_t>(i)] = metric(sample);
  });
  return summarize(std::move(values), metric(set), opts.level);
}

}  // namespace tfbench::stats
