#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <utility>

// Portable seeded randomness. std::shuffle and the <random> distributions
// are implementation-defined, so every seeded operation in the toolkit goes
// through these instead; results are identical on every platform.
namespace tfbench {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();

 private:
  std::uint64_t state_;
};

// xoshiro256** seeded from a single 64-bit value through SplitMix64.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::uint64_t s_[4];
};

// Unbiased integer in [0, bound). bound must be positive.
std::uint64_t uniform_below(Xoshiro256& rng, std::uint64_t bound);

// Uniform double in [0, 1) with 53 random bits.
double uniform_unit(Xoshiro256& rng);

// Seed of an independent substream, e.g. one per bootstrap iteration.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

std::uint64_t fnv1a64(std::string_view bytes);

// Fisher-Yates, walking from the back.
template <typename T>
void shuffle(std::span<T> items, Xoshiro256& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(rng, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace tfbench
