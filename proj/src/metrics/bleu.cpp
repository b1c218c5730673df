#include <cmath>
#include <string>
#include <unordered_map>

#include "tfbench/error.hpp"
#include "tfbench/metrics.hpp"
#include "tfbench/unicode.hpp"

namespace tfbench::metrics {
namespace {

// log() floored at a large negative constant instead of -inf.
double floored_log(double x) { return x == 0.0 ? -9999999999.0 : std::log(x); }

std::unordered_map<std::u32string, int> word_ngrams(const std::vector<std::u32string>& tokens,
                                                    int max_order) {
  std::unordered_map<std::u32string, int> counts;
  for (int n = 1; n <= max_order; ++n) {
    const auto len = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
      std::u32string key = tokens[i];
      for (std::size_t k = 1; k < len; ++k) {
        key.push_back(U' ');
        key += tokens[i + k];
      }
      ++counts[key];
    }
  }
  return counts;
}

std::vector<std::u32string> preprocess(std::string_view text, BleuTokenizer tokenizer) {
  const auto decoded = unicode::decode(text);
  const auto stripped = unicode::rstrip(decoded);
  const auto tokenized = tokenizer == BleuTokenizer::kThirteenA ? tokenize_13a(stripped)
                                                                : tokenize_international(stripped);
  return unicode::split_whitespace(tokenized);
}

double compute_bleu(std::span<const double> stats, int max_order, BleuSmoothing smoothing) {
  const double sys_len = stats[0];
  const double ref_len = stats[1];
  const auto correct = stats.subspan(2, static_cast<std::size_t>(max_order));
  const auto total = stats.subspan(2 + static_cast<std::size_t>(max_order),
                                   static_cast<std::size_t>(max_order));

  double bp = 1.0;
  if (sys_len < ref_len) bp = sys_len > 0 ? std::exp(1 - ref_len / sys_len) : 0.0;

  bool any_correct = false;
  for (double c : correct) any_correct = any_correct || c != 0;
  if (!any_correct) return 0.0;

  std::vector<double> precisions(static_cast<std::size_t>(max_order), 0.0);
  double smooth_mteval = 1.0;
  for (std::size_t n = 0; n < precisions.size(); ++n) {
    if (total[n] == 0) break;
    if (correct[n] == 0) {
      if (smoothing == BleuSmoothing::kExp) {
        smooth_mteval *= 2;
        precisions[n] = 1.0 / (smooth_mteval * total[n]);
      }
    } else {
      precisions[n] = correct[n] / total[n];
    }
  }
  // Precisions stay fractions so that all-perfect precisions give exactly 100.
  double log_sum = 0;
  for (double p : precisions) log_sum += floored_log(p);
  return 100.0 * bp * std::exp(log_sum / max_order);
}

}  // namespace

ItemStatistics bleu_statistics(const HypothesisSet& set, const MetricConfig& cfg) {
  cfg.validate();
  const int max_order = cfg.bleu_max_order;
  ItemStatistics stats;
  stats.metric = "bleu";
  stats.width = 2 + 2 * static_cast<std::size_t>(max_order);
  stats.rows.reserve(set.size() * stats.width);
  for (const auto& item : set.items) {
    const auto hyp = preprocess(item.hypothesis, cfg.bleu_tokenizer);
    const auto ref = preprocess(item.reference, cfg.bleu_tokenizer);
    const auto hyp_counts = word_ngrams(hyp, max_order);
    const auto ref_counts = word_ngrams(ref, max_order);
    std::vector<double> correct(static_cast<std::size_t>(max_order), 0.0);
    std::vector<double> total(static_cast<std::size_t>(max_order), 0.0);
    for (const auto& [gram, count] : hyp_counts) {
      const std::size_t n = static_cast<std::size_t>(std::count(gram.begin(), gram.end(), U' '));
      total[n] += count;
      if (auto it = ref_counts.find(gram); it != ref_counts.end()) {
        correct[n] += std::min(count, it->second);
      }
    }
    stats.rows.push_back(static_cast<double>(hyp.size()));
    stats.rows.push_back(static_cast<double>(ref.size()));
    stats.rows.insert(stats.rows.end(), correct.begin(), correct.end());
    stats.rows.insert(stats.rows.end(), total.begin(), total.end());
  }
  const BleuSmoothing smoothing = cfg.bleu_smoothing;
  stats.finalize = [max_order, smoothing](std::span<const double> sum) {
    return compute_bleu(sum, max_order, smoothing);
  };
  return stats;
}

double bleu(const HypothesisSet& set, const MetricConfig& cfg) {
  if (set.empty()) throw Error("EMPTY_SET", "BLEU needs at least one item");
  return bleu_statistics(set, cfg).corpus_score();
}

}  // namespace tfbench::metrics
