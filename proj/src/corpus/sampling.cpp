#include <algorithm>
#include <cmath>
#include <numeric>

#include "tfbench/corpus.hpp"
#include "tfbench/error.hpp"
#include "tfbench/random.hpp"

namespace tfbench::corpus {
namespace {

std::map<std::string, std::vector<std::size_t>> group_by_category(const Corpus& corpus) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < corpus.size(); ++i) groups[corpus.pairs[i].category].push_back(i);
  return groups;
}

Corpus take(const Corpus& corpus, std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  Corpus out;
  out.provenance = corpus.provenance;
  out.pairs.reserve(indices.size());
  for (std::size_t i : indices) out.pairs.push_back(corpus.pairs[i]);
  return out;
}

std::vector<std::size_t> shuffled(std::vector<std::size_t> indices, std::uint64_t seed,
                                  std::string_view purpose, std::string_view category) {
  std::string tag(purpose);
  tag.push_back(':');
  tag += category;
  Xoshiro256 rng(derive_seed(seed, fnv1a64(tag)));
  shuffle(std::span<std::size_t>(indices), rng);
  return indices;
}

}  // namespace

std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& weights,
                                   const std::vector<std::size_t>& capacity) {
  const std::size_t k = weights.size();
  std::vector<std::size_t> quota(k, 0);
  const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (k == 0 || total == 0 || weight_sum <= 0) return quota;

  std::vector<double> remainder(k, 0.0);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double exact = static_cast<double>(total) * weights[i] / weight_sum;
    const double whole = std::floor(exact + 1e-9);
    remainder[i] = std::max(0.0, exact - whole);
    if (remainder[i] < 1e-9) remainder[i] = 0.0;
    quota[i] = std::min(static_cast<std::size_t>(whole), capacity[i]);
    assigned += quota[i];
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  while (assigned < total) {
    bool progressed = false;
    for (std::size_t i : order) {
      if (assigned == total) break;
      if (quota[i] < capacity[i]) {
        ++quota[i];
        ++assigned;
        progressed = true;
      }
    }
    if (!progressed) break;
  }
  return quota;
}

Corpus stratified_sample(const Corpus& corpus, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw Error("BAD_SAMPLE_SIZE", "sample size must be positive");
  if (n > corpus.size()) {
    throw Error("BAD_SAMPLE_SIZE", "sample size " + std::to_string(n) + " exceeds corpus size " +
                                       std::to_string(corpus.size()));
  }
  const auto groups = group_by_category(corpus);
  std::vector<double> weights;
  std::vector<std::size_t> capacity;
  for (const auto& [label, members] : groups) {
    weights.push_back(static_cast<double>(members.size()));
    capacity.push_back(members.size());
  }
  const auto quota = apportion(n, weights, capacity);

  std::vector<std::size_t> chosen;
  chosen.reserve(n);
  std::size_t g = 0;
  for (const auto& [label, members] : groups) {
    const auto order = shuffled(members, seed, "sample", label);
    chosen.insert(chosen.end(), order.begin(), order.begin() + static_cast<std::ptrdiff_t>(quota[g]));
    ++g;
  }
  return take(corpus, std::move(chosen));
}

void SplitSpec::validate() const {
  for (double r : {train_ratio, valid_ratio, test_ratio}) {
    if (!(r > 0.0 && r < 1.0)) throw Error("BAD_SPLIT", "split ratios must lie in (0, 1)");
  }
  if (std::abs(train_ratio + valid_ratio + test_ratio - 1.0) > 1e-9) {
    throw Error("BAD_SPLIT", "split ratios must sum to 1");
  }
}

Split stratified_split(const Corpus& corpus, const SplitSpec& spec) {
  spec.validate();
  if (corpus.empty()) throw Error("EMPTY_CORPUS", "cannot split an empty corpus");

  std::map<std::string, std::vector<std::size_t>> strata;
  if (spec.stratify_by_category) {
    strata = group_by_category(corpus);
  } else {
    auto& all = strata[""];
    all.resize(corpus.size());
    std::iota(all.begin(), all.end(), 0);
  }

  const std::vector<double> ratios = {spec.train_ratio, spec.valid_ratio, spec.test_ratio};
  std::vector<std::size_t> parts[3];
  for (const auto& [label, members] : strata) {
    if (members.size() < 3) {
      parts[0].insert(parts[0].end(), members.begin(), members.end());
      continue;
    }
    const auto sizes = apportion(members.size(), ratios,
                                 std::vector<std::size_t>(3, members.size()));
    const auto order = shuffled(members, spec.seed, "split", label);
    std::size_t offset = 0;
    for (int p = 0; p < 3; ++p) {
      parts[p].insert(parts[p].end(), order.begin() + static_cast<std::ptrdiff_t>(offset),
                      order.begin() + static_cast<std::ptrdiff_t>(offset + sizes[p]));
      offset += sizes[p];
    }
  }
  return Split{take(corpus, std::move(parts[0])), take(corpus, std::move(parts[1])),
               take(corpus, std::move(parts[2]))};
}

}  // namespace tfbench::corpus
