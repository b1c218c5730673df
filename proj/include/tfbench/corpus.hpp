#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace tfbench::corpus {

// Category labels seen in the Tajik-Farsi corpus. Loading accepts any
// label made of [A-Za-z0-9_-]; this list is what the sample data uses.
inline const std::vector<std::string>& known_categories() {
  static const std::vector<std::string> kLabels = {
      "poetry_parts", "masnavi",       "shahnameh",     "prose_parts",
      "unique_tajik_words", "paranames_per", "paranames_loc", "paranames_org",
      "words",        "dr",            "jj",            "bbc"};
  return kLabels;
}

struct ParallelPair {
  std::string tajik;
  std::string farsi;
  std::string category;

  bool operator==(const ParallelPair&) const = default;
};

struct Corpus {
  std::vector<ParallelPair> pairs;
  std::string provenance;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
};

// Unicode clean-up applied to both sides of every pair:
//  - C0/C1 controls are removed, except TAB/LF/VT/FF/CR/NEL which count as spaces
//  - every space separator (Zs, e.g. U+00A0, U+2009, U+202F) becomes U+0020
//  - NFC composition
//  - runs of spaces collapse to one; leading/trailing spaces are trimmed
// U+200C (ZWNJ) is a letter-forming character in Persian and is kept as is.
std::string normalize_text(std::string_view raw);

enum class DropReason { kEmptySide, kLatinContent, kForeignScript, kLengthExceeded };

std::string_view to_string(DropReason reason);

struct FilterOptions {
  std::size_t max_chars = 512;  // per side, in scalar values
};

// nullopt means KEEP. Expects normalized input. Checks run in the order
// empty side, Latin letters, other-alphabet letters, length.
std::optional<DropReason> filter_pair(const ParallelPair& pair, const FilterOptions& options = {});

// Removes exact (tajik, farsi) duplicates keeping the first occurrence;
// pairs sharing only one side are kept.
Corpus dedup(const Corpus& corpus);

struct PrepareReport {
  Corpus corpus;
  std::size_t input_pairs = 0;
  std::size_t duplicates_removed = 0;
  std::map<std::string, std::size_t> dropped;  // by DropReason name
};

// normalize -> filter -> dedup
PrepareReport prepare(const Corpus& raw, const FilterOptions& options = {});

struct LengthStats {
  double mean = 0, std = 0, median = 0, p25 = 0, p75 = 0, max = 0;
};

struct WordStats {
  double mean = 0, std = 0;
};

struct SideStats {
  LengthStats length;
  WordStats words_per_string;
  std::map<std::string, std::size_t> char_frequency;  // UTF-8 character -> count
  double script_chars_per_string = 0;
  std::size_t total_chars = 0;
};

struct CorpusStats {
  std::size_t pair_count = 0;
  std::size_t unique_tajik = 0;
  std::size_t unique_farsi = 0;
  SideStats tajik;
  SideStats farsi;
  std::map<std::string, std::size_t> category_counts;
};

// Lengths are in scalar values; std is the sample (n-1) deviation and
// percentiles interpolate linearly between order statistics. Throws
// Error("EMPTY_CORPUS") on an empty corpus.
CorpusStats compute_stats(const Corpus& corpus);

nlohmann::json to_json(const CorpusStats& stats);

// Draws n pairs preserving category shares. Quotas are floor(n * share)
// topped up by largest remainder (ties go to the lexicographically smaller
// label) so they sum to n exactly; each category is then drawn by a seeded
// Fisher-Yates shuffle. Survivors keep their corpus order.
Corpus stratified_sample(const Corpus& corpus, std::size_t n, std::uint64_t seed);

struct SplitSpec {
  double train_ratio = 0.8;
  double valid_ratio = 0.1;
  double test_ratio = 0.1;
  std::uint64_t seed = 42;
  bool stratify_by_category = true;

  // Each ratio in (0,1), sum 1 within 1e-9; throws Error("BAD_SPLIT").
  void validate() const;
};

struct Split {
  Corpus train;
  Corpus valid;
  Corpus test;
};

// Per-category sizes follow largest-remainder allocation of the ratios.
// A category with fewer than 3 pairs goes entirely to train.
Split stratified_split(const Corpus& corpus, const SplitSpec& spec);

// Largest-remainder apportionment of `total` items over strata with the
// given weights and capacities. Strata that hit their capacity hand their
// remainder on to the next-largest remainders.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& weights,
                                   const std::vector<std::size_t>& capacity);

// JSON Lines, one {"tajik", "farsi", "category"} object per line.
Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view jsonl, std::string provenance = {});
std::string serialize_corpus(const Corpus& corpus);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace tfbench::corpus
