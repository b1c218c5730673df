#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "tfbench/corpus.hpp"
#include "tfbench/error.hpp"
#include "tfbench/unicode.hpp"

namespace tfbench::corpus {
namespace {

double percentile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

void mean_std(const std::vector<double>& v, double& mean, double& std) {
  double sum = 0;
  for (double x : v) sum += x;
  mean = sum / static_cast<double>(v.size());
  if (v.size() < 2) {
    std = 0;
    return;
  }
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  std = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

SideStats side_stats(const Corpus& corpus, bool tajik_side) {
  SideStats side;
  std::vector<double> lengths, words;
  lengths.reserve(corpus.size());
  words.reserve(corpus.size());
  double script_total = 0;
  for (const auto& pair : corpus.pairs) {
    const auto text = unicode::decode(tajik_side ? pair.tajik : pair.farsi);
    lengths.push_back(static_cast<double>(text.size()));
    words.push_back(static_cast<double>(unicode::split_whitespace(text).size()));
    side.total_chars += text.size();
    for (char32_t c : text) {
      ++side.char_frequency[unicode::encode(c)];
      if (tajik_side ? unicode::in_cyrillic_block(c) : unicode::in_arabic_block(c)) ++script_total;
    }
  }
  mean_std(lengths, side.length.mean, side.length.std);
  mean_std(words, side.words_per_string.mean, side.words_per_string.std);
  std::sort(lengths.begin(), lengths.end());
  side.length.median = percentile(lengths, 0.5);
  side.length.p25 = percentile(lengths, 0.25);
  side.length.p75 = percentile(lengths, 0.75);
  side.length.max = lengths.back();
  side.script_chars_per_string = script_total / static_cast<double>(corpus.size());
  return side;
}

}  // namespace

CorpusStats compute_stats(const Corpus& corpus) {
  if (corpus.empty()) throw Error("EMPTY_CORPUS", "statistics need at least one pair");
  CorpusStats stats;
  stats.pair_count = corpus.size();
  std::unordered_set<std::string> tajik, farsi;
  for (const auto& pair : corpus.pairs) {
    tajik.insert(pair.tajik);
    farsi.insert(pair.farsi);
    ++stats.category_counts[pair.category];
  }
  stats.unique_tajik = tajik.size();
  stats.unique_farsi = farsi.size();
  stats.tajik = side_stats(corpus, true);
  stats.farsi = side_stats(corpus, false);
  return stats;
}

nlohmann::json to_json(const CorpusStats& stats) {
  nlohmann::json j;
  j["pair_count"] = stats.pair_count;
  j["unique_tajik"] = stats.unique_tajik;
  j["unique_farsi"] = stats.unique_farsi;
  for (const auto& [name, side] : {std::pair{"tajik", &stats.tajik}, std::pair{"farsi", &stats.farsi}}) {
    const LengthStats& len = side->length;
    j["length_stats"][name] = {{"mean", len.mean},     {"std", len.std}, {"median", len.median},
                               {"p25", len.p25},       {"p75", len.p75}, {"max", len.max}};
    j["words_per_string"][name] = {{"mean", side->words_per_string.mean},
                                   {"std", side->words_per_string.std}};
    j["char_frequency"][name] = side->char_frequency;
    j["script_chars_per_string"][name] = side->script_chars_per_string;
    j["total_chars"][name] = side->total_chars;
  }
  j["category_counts"] = stats.category_counts;
  return j;
}

}  // namespace tfbench::corpus
