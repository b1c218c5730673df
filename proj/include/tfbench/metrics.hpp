#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tfbench/direction.hpp"

namespace tfbench::metrics {

struct HypothesisItem {
  std::string hypothesis;
  std::string reference;
  std::string category;
};

struct HypothesisSet {
  std::vector<HypothesisItem> items;
  Direction direction = Direction::kTj2Fa;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
};

enum class BleuTokenizer { kThirteenA, kInternational };
enum class BleuSmoothing { kExp, kNone };

// Defaults are those of the reference scorer (char order 6, word order 2,
// beta 2; BLEU order 4 with exponential smoothing; TER with shifts), except
// the BLEU tokenizer, which defaults to the script-neutral "international"
// rules instead of the Latin-centric 13a.
struct MetricConfig {
  int char_ngram_order = 6;
  int word_ngram_order = 2;
  double beta = 2.0;
  int bleu_max_order = 4;
  BleuSmoothing bleu_smoothing = BleuSmoothing::kExp;
  BleuTokenizer bleu_tokenizer = BleuTokenizer::kInternational;
  bool ter_shift_enabled = true;
  // The reference scorer lower-cases before TER unless told otherwise.
  bool ter_case_sensitive = false;

  // Throws Error("BAD_METRIC_CONFIG").
  void validate() const;
};

nlohmann::json to_json(const MetricConfig& cfg);
MetricConfig metric_config_from_json(const nlohmann::json& j);

// ---- edit distance ------------------------------------------------------

// Unit-cost Levenshtein distance over arbitrary comparable elements.
template <typename T>
std::size_t edit_distance(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (a[i - 1] == b[j - 1] ? 0 : 1);
      row[j] = std::min({sub, up + 1, row[j - 1] + 1});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view a_utf8, std::string_view b_utf8);

// Character error rate of one pair: levenshtein / reference length.
// Throws Error("EMPTY_REFERENCE") for an empty reference.
double cer(std::string_view hypothesis, std::string_view reference);
// Word-level analogue over whitespace-delimited tokens.
double wer(std::string_view hypothesis, std::string_view reference);

// ---- corpus metrics -----------------------------------------------------

// Additive per-item statistics. Summing any multiset of rows and passing
// the sum to finalize() yields the corpus score of that multiset, which is
// what the bootstrap relies on.
struct ItemStatistics {
  std::string metric;
  std::size_t width = 0;
  std::vector<double> rows;  // size() == items * width, row-major
  std::function<double(std::span<const double>)> finalize;

  std::size_t items() const { return width == 0 ? 0 : rows.size() / width; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(rows).subspan(i * width, width);
  }
  std::vector<double> sum(std::span<const std::size_t> indices) const;
  double score(std::span<const std::size_t> indices) const;
  double corpus_score() const;
};

enum class MetricKind { kChrfPP, kBleu, kTer, kCer, kWer, kAccuracy };
std::string_view to_string(MetricKind kind);
MetricKind parse_metric_kind(std::string_view name);

ItemStatistics chrf_statistics(const HypothesisSet& set, const MetricConfig& cfg);
ItemStatistics bleu_statistics(const HypothesisSet& set, const MetricConfig& cfg);
ItemStatistics ter_statistics(const HypothesisSet& set, const MetricConfig& cfg);
ItemStatistics cer_statistics(const HypothesisSet& set);
ItemStatistics wer_statistics(const HypothesisSet& set);
ItemStatistics accuracy_statistics(const HypothesisSet& set);
ItemStatistics statistics_for(MetricKind kind, const HypothesisSet& set, const MetricConfig& cfg);

struct ChrfResult {
  double corpus = 0;
  std::vector<double> sentence;
};

// All corpus metrics throw Error("EMPTY_SET") on an empty set.
ChrfResult chrf_pp(const HypothesisSet& set, const MetricConfig& cfg = {});
double bleu(const HypothesisSet& set, const MetricConfig& cfg = {});
double ter(const HypothesisSet& set, const MetricConfig& cfg = {});
double exact_match_accuracy(const HypothesisSet& set);

// Sentence-level chrF++ of one pair; equals chrf_pp() on a one-item set.
double sentence_chrf_pp(std::string_view hypothesis, std::string_view reference,
                        const MetricConfig& cfg = {});

// TER edit count between token sequences (greedy shift search followed by
// a beam-restricted edit distance). Returns {edits, reference length}.
struct TerCount {
  std::size_t edits = 0;
  std::size_t ref_words = 0;
};
TerCount ter_edits(const std::vector<std::u32string>& hyp_words,
                   const std::vector<std::u32string>& ref_words, bool shifts_enabled = true);

// ---- tokenizers ---------------------------------------------------------

std::u32string tokenize_13a(std::u32string_view line);
std::u32string tokenize_international(std::u32string_view line);

// ---- reports ------------------------------------------------------------

struct MetricScores {
  double chrf_pp = 0;
  double bleu = 0;
  double ter = 0;
  double cer = 0;
  double wer = 0;
  double accuracy = 0;
  std::size_t items = 0;

  bool operator==(const MetricScores&) const = default;
};

struct MetricReport {
  MetricScores overall;
  std::map<std::string, MetricScores> per_category;
  std::vector<double> sentence_chrf;

  bool operator==(const MetricReport&) const = default;
};

// All six metrics overall and per category. CER and WER pool edit counts
// over items before dividing by the pooled reference length. Items with an
// empty reference make the whole call fail with Error("EMPTY_REFERENCE"),
// listing every offending item.
MetricReport evaluate(const HypothesisSet& set, const MetricConfig& cfg = {});

nlohmann::json to_json(const MetricScores& scores);
nlohmann::json to_json(const MetricReport& report);
MetricScores metric_scores_from_json(const nlohmann::json& j);
MetricReport metric_report_from_json(const nlohmann::json& j);

}  // namespace tfbench::metrics
