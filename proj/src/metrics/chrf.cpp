// chrF / chrF++ with the reference scorer's default "effective order"
// averaging: precision and recall are averaged over the n-gram orders for
// which both sides have n-grams, then combined into one F-beta.
#include <string>
#include <unordered_map>

#include "tfbench/error.hpp"
#include "tfbench/metrics.hpp"
#include "tfbench/unicode.hpp"

namespace tfbench::metrics {
namespace {

using Counter = std::unordered_map<std::u32string, int>;

bool is_ascii_punct(char32_t c) {
  return (c >= U'!' && c <= U'/') || (c >= U':' && c <= U'@') || (c >= U'[' && c <= U'`') ||
         (c >= U'{' && c <= U'~');
}

// Splits one leading or trailing ASCII punctuation mark off each word.
std::vector<std::u32string> split_punctuation(std::u32string_view sentence) {
  std::vector<std::u32string> out;
  for (auto& word : unicode::split_whitespace(sentence)) {
    if (word.size() == 1) {
      out.push_back(std::move(word));
    } else if (is_ascii_punct(word.back())) {
      out.push_back(word.substr(0, word.size() - 1));
      out.push_back(word.substr(word.size() - 1));
    } else if (is_ascii_punct(word.front())) {
      out.push_back(word.substr(0, 1));
      out.push_back(word.substr(1));
    } else {
      out.push_back(std::move(word));
    }
  }
  return out;
}

std::vector<Counter> extract_ngrams(std::u32string_view sentence, int char_order, int word_order) {
  std::vector<Counter> counters;
  counters.reserve(static_cast<std::size_t>(char_order + word_order));
  std::u32string packed;
  for (char32_t c : sentence) {
    if (!unicode::is_whitespace(c)) packed.push_back(c);
  }
  for (int n = 1; n <= char_order; ++n) {
    Counter counter;
    const auto len = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + len <= packed.size(); ++i) ++counter[packed.substr(i, len)];
    counters.push_back(std::move(counter));
  }
  if (word_order > 0) {
    const auto words = split_punctuation(sentence);
    for (int n = 1; n <= word_order; ++n) {
      Counter counter;
      const auto len = static_cast<std::size_t>(n);
      for (std::size_t i = 0; i + len <= words.size(); ++i) {
        std::u32string key = words[i];
        for (std::size_t k = 1; k < len; ++k) {
          key.push_back(U' ');
          key += words[i + k];
        }
        ++counter[key];
      }
      counters.push_back(std::move(counter));
    }
  }
  return counters;
}

double f_score(std::span<const double> stats, int order, double beta) {
  const double factor = beta * beta;
  double avg_prec = 0, avg_rec = 0;
  int effective = 0;
  for (int i = 0; i < order; ++i) {
    const double n_hyp = stats[3 * i];
    const double n_ref = stats[3 * i + 1];
    const double n_match = stats[3 * i + 2];
    if (n_hyp > 0 && n_ref > 0) {
      avg_prec += n_match / n_hyp;
      avg_rec += n_match / n_ref;
      ++effective;
    }
  }
  if (effective == 0) return 0.0;
  avg_prec /= effective;
  avg_rec /= effective;
  if (avg_prec + avg_rec == 0) return 0.0;
  double score = (1 + factor) * avg_prec * avg_rec;
  score /= factor * avg_prec + avg_rec;
  return 100 * score;
}

void append_item_stats(std::u32string_view hyp, std::u32string_view ref, const MetricConfig& cfg,
                       std::vector<double>& rows) {
  const auto hyp_ngrams = extract_ngrams(hyp, cfg.char_ngram_order, cfg.word_ngram_order);
  const auto ref_ngrams = extract_ngrams(ref, cfg.char_ngram_order, cfg.word_ngram_order);
  for (std::size_t k = 0; k < hyp_ngrams.size(); ++k) {
    double hyp_count = 0, ref_count = 0, match = 0;
    for (const auto& [gram, count] : ref_ngrams[k]) ref_count += count;
    for (const auto& [gram, count] : hyp_ngrams[k]) {
      hyp_count += count;
      if (auto it = ref_ngrams[k].find(gram); it != ref_ngrams[k].end()) {
        match += std::min(count, it->second);
      }
    }
    // hits are not counted when the reference has no n-grams of this order
    rows.push_back(ref_ngrams[k].empty() ? 0.0 : hyp_count);
    rows.push_back(ref_count);
    rows.push_back(match);
  }
}

}  // namespace

ItemStatistics chrf_statistics(const HypothesisSet& set, const MetricConfig& cfg) {
  cfg.validate();
  ItemStatistics stats;
  stats.metric = "chrf_pp";
  const int order = cfg.char_ngram_order + cfg.word_ngram_order;
  stats.width = static_cast<std::size_t>(3 * order);
  stats.rows.reserve(set.size() * stats.width);
  for (const auto& item : set.items) {
    append_item_stats(unicode::decode(item.hypothesis), unicode::decode(item.reference), cfg,
                      stats.rows);
  }
  const double beta = cfg.beta;
  stats.finalize = [order, beta](std::span<const double> sum) { return f_score(sum, order, beta); };
  return stats;
}

ChrfResult chrf_pp(const HypothesisSet& set, const MetricConfig& cfg) {
  if (set.empty()) throw Error("EMPTY_SET", "chrF++ needs at least one item");
  const auto stats = chrf_statistics(set, cfg);
  ChrfResult result;
  result.corpus = stats.corpus_score();
  result.sentence.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) result.sentence.push_back(stats.finalize(stats.row(i)));
  return result;
}

double sentence_chrf_pp(std::string_view hypothesis, std::string_view reference,
                        const MetricConfig& cfg) {
  HypothesisSet one;
  one.items.push_back({std::string(hypothesis), std::string(reference), {}});
  return chrf_pp(one, cfg).corpus;
}

}  // namespace tfbench::metrics
