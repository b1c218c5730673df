#include <cmath>
#include <sstream>

#include "tfbench/error.hpp"
#include "tfbench/metrics.hpp"
#include "tfbench/unicode.hpp"

namespace tfbench::metrics {

std::vector<double> ItemStatistics::sum(std::span<const std::size_t> indices) const {
  std::vector<double> total(width, 0.0);
  for (std::size_t idx : indices) {
    const double* r = rows.data() + idx * width;
    for (std::size_t k = 0; k < width; ++k) total[k] += r[k];
  }
  return total;
}

double ItemStatistics::score(std::span<const std::size_t> indices) const {
  return finalize(sum(indices));
}

double ItemStatistics::corpus_score() const {
  std::vector<double> total(width, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i) total[i % width] += rows[i];
  return finalize(total);
}

void MetricConfig::validate() const {
  const auto fail = [](const std::string& what) { throw Error("BAD_METRIC_CONFIG", what); };
  if (char_ngram_order < 1) fail("char_ngram_order must be >= 1");
  if (word_ngram_order < 1) fail("word_ngram_order must be >= 1");
  if (bleu_max_order < 1) fail("bleu_max_order must be >= 1");
  if (!(beta > 0) || !std::isfinite(beta)) fail("beta must be a positive number");
}

namespace {

std::string_view tokenizer_name(BleuTokenizer t) {
  return t == BleuTokenizer::kThirteenA ? "thirteen_a" : "international";
}

BleuTokenizer parse_tokenizer(const std::string& s) {
  if (s == "thirteen_a" || s == "13a") return BleuTokenizer::kThirteenA;
  if (s == "international" || s == "intl") return BleuTokenizer::kInternational;
  throw Error("BAD_METRIC_CONFIG", "unknown bleu_tokenizer '" + s + "'");
}

BleuSmoothing parse_smoothing(const std::string& s) {
  if (s == "exp") return BleuSmoothing::kExp;
  if (s == "none") return BleuSmoothing::kNone;
  throw Error("BAD_METRIC_CONFIG", "unknown bleu_smoothing '" + s + "'");
}

// Rows of (edit distance, reference length); finalize divides the pooled sums.
ItemStatistics ratio_statistics(std::string metric) {
  ItemStatistics stats;
  stats.metric = std::move(metric);
  stats.width = 2;
  stats.finalize = [](std::span<const double> sum) {
    if (sum[1] <= 0) throw Error("EMPTY_REFERENCE", "pooled reference length is zero");
    return sum[0] / sum[1];
  };
  return stats;
}

}  // namespace

nlohmann::json to_json(const MetricConfig& cfg) {
  return {{"char_ngram_order", cfg.char_ngram_order},
          {"word_ngram_order", cfg.word_ngram_order},
          {"beta", cfg.beta},
          {"bleu_max_order", cfg.bleu_max_order},
          {"bleu_smoothing", cfg.bleu_smoothing == BleuSmoothing::kExp ? "exp" : "none"},
          {"bleu_tokenizer", tokenizer_name(cfg.bleu_tokenizer)},
          {"ter_shift_enabled", cfg.ter_shift_enabled},
          {"ter_case_sensitive", cfg.ter_case_sensitive}};
}

MetricConfig metric_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("BAD_METRIC_CONFIG", "metric_config must be an object");
  MetricConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "char_ngram_order") cfg.char_ngram_order = value.get<int>();
      else if (key == "word_ngram_order") cfg.word_ngram_order = value.get<int>();
      else if (key == "beta") cfg.beta = value.get<double>();
      else if (key == "bleu_max_order") cfg.bleu_max_order = value.get<int>();
      else if (key == "bleu_smoothing") cfg.bleu_smoothing = parse_smoothing(value.get<std::string>());
      else if (key == "bleu_tokenizer") cfg.bleu_tokenizer = parse_tokenizer(value.get<std::string>());
      else if (key == "ter_shift_enabled") cfg.ter_shift_enabled = value.get<bool>();
      else if (key == "ter_case_sensitive") cfg.ter_case_sensitive = value.get<bool>();
      else throw Error("BAD_METRIC_CONFIG", "unknown metric_config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("BAD_METRIC_CONFIG", e.what());
  }
  cfg.validate();
  return cfg;
}

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kChrfPP: return "chrf_pp";
    case MetricKind::kBleu: return "bleu";
    case MetricKind::kTer: return "ter";
    case MetricKind::kCer: return "cer";
    case MetricKind::kWer: return "wer";
    case MetricKind::kAccuracy: return "accuracy";
  }
  return "?";
}

MetricKind parse_metric_kind(std::string_view name) {
  for (MetricKind k : {MetricKind::kChrfPP, MetricKind::kBleu, MetricKind::kTer, MetricKind::kCer,
                       MetricKind::kWer, MetricKind::kAccuracy}) {
    if (to_string(k) == name) return k;
  }
  if (name == "chrf" || name == "chrf++") return MetricKind::kChrfPP;
  throw Error("BAD_METRIC", "unknown metric '" + std::string(name) + "'");
}

ItemStatistics cer_statistics(const HypothesisSet& set) {
  ItemStatistics stats = ratio_statistics("cer");
  stats.rows.reserve(set.size() * 2);
  for (const auto& item : set.items) {
    const auto ref = unicode::decode(item.reference);
    stats.rows.push_back(static_cast<double>(levenshtein(unicode::decode(item.hypothesis), ref)));
    stats.rows.push_back(static_cast<double>(ref.size()));
  }
  return stats;
}

ItemStatistics wer_statistics(const HypothesisSet& set) {
  ItemStatistics stats = ratio_statistics("wer");
  stats.rows.reserve(set.size() * 2);
  for (const auto& item : set.items) {
    const auto ref = unicode::split_whitespace(unicode::decode(item.reference));
    const auto hyp = unicode::split_whitespace(unicode::decode(item.hypothesis));
    stats.rows.push_back(static_cast<double>(edit_distance<std::u32string>(hyp, ref)));
    stats.rows.push_back(static_cast<double>(ref.size()));
  }
  return stats;
}

ItemStatistics accuracy_statistics(const HypothesisSet& set) {
  ItemStatistics stats;
  stats.metric = "accuracy";
  stats.width = 2;
  stats.rows.reserve(set.size() * 2);
  for (const auto& item : set.items) {
    stats.rows.push_back(item.hypothesis == item.reference ? 1.0 : 0.0);
    stats.rows.push_back(1.0);
  }
  stats.finalize = [](std::span<const double> sum) { return sum[1] > 0 ? sum[0] / sum[1] : 0.0; };
  return stats;
}

ItemStatistics statistics_for(MetricKind kind, const HypothesisSet& set, const MetricConfig& cfg) {
  switch (kind) {
    case MetricKind::kChrfPP: return chrf_statistics(set, cfg);
    case MetricKind::kBleu: return bleu_statistics(set, cfg);
    case MetricKind::kTer: return ter_statistics(set, cfg);
    case MetricKind::kCer: return cer_statistics(set);
    case MetricKind::kWer: return wer_statistics(set);
    case MetricKind::kAccuracy: return accuracy_statistics(set);
  }
  throw Error("BAD_METRIC", "unknown metric kind");
}

double exact_match_accuracy(const HypothesisSet& set) {
  if (set.empty()) throw Error("EMPTY_SET", "accuracy needs at least one item");
  return accuracy_statistics(set).corpus_score();
}

MetricReport evaluate(const HypothesisSet& set, const MetricConfig& cfg) {
  if (set.empty()) throw Error("EMPTY_SET", "cannot evaluate an empty hypothesis set");
  cfg.validate();

  std::ostringstream bad;
  std::size_t bad_count = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& ref = set.items[i].reference;
    if (unicode::split_whitespace(unicode::decode(ref)).empty()) {
      bad << (bad_count++ ? ", " : "") << "item " << i + 1;
      if (!set.items[i].category.empty()) bad << " (" << set.items[i].category << ")";
    }
  }
  if (bad_count > 0) {
    throw Error("EMPTY_REFERENCE", std::to_string(bad_count) + " empty reference(s): " + bad.str());
  }

  const ItemStatistics chrf = chrf_statistics(set, cfg);
  const ItemStatistics bl = bleu_statistics(set, cfg);
  const ItemStatistics tr = ter_statistics(set, cfg);
  const ItemStatistics ce = cer_statistics(set);
  const ItemStatistics we = wer_statistics(set);
  const ItemStatistics acc = accuracy_statistics(set);

  const auto scores = [&](std::span<const std::size_t> idx) {
    MetricScores s;
    s.chrf_pp = chrf.score(idx);
    s.bleu = bl.score(idx);
    s.ter = tr.score(idx);
    s.cer = ce.score(idx);
    s.wer = we.score(idx);
    s.accuracy = acc.score(idx);
    s.items = idx.size();
    return s;
  };

  std::vector<std::size_t> all(set.size());
  std::map<std::string, std::vector<std::size_t>> by_category;
  for (std::size_t i = 0; i < set.size(); ++i) {
    all[i] = i;
    by_category[set.items[i].category].push_back(i);
  }

  MetricReport report;
  report.overall = scores(all);
  for (const auto& [label, idx] : by_category) report.per_category[label] = scores(idx);
  report.sentence_chrf.reserve(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) report.sentence_chrf.push_back(chrf.finalize(chrf.row(i)));
  return report;
}

nlohmann::json to_json(const MetricScores& s) {
  return {{"chrf_pp", s.chrf_pp}, {"bleu", s.bleu}, {"ter", s.ter},          {"cer", s.cer},
          {"wer", s.wer},         {"accuracy", s.accuracy}, {"items", s.items}};
}

nlohmann::json to_json(const MetricReport& r) {
  nlohmann::json j = to_json(r.overall);
  nlohmann::json cats = nlohmann::json::object();
  for (const auto& [label, s] : r.per_category) cats[label] = to_json(s);
  j["per_category"] = std::move(cats);
  j["sentence_chrf"] = r.sentence_chrf;
  return j;
}

MetricScores metric_scores_from_json(const nlohmann::json& j) {
  try {
    MetricScores s;
    s.chrf_pp = j.at("chrf_pp").get<double>();
    s.bleu = j.at("bleu").get<double>();
    s.ter = j.at("ter").get<double>();
    s.cer = j.at("cer").get<double>();
    s.wer = j.at("wer").get<double>();
    s.accuracy = j.at("accuracy").get<double>();
    s.items = j.at("items").get<std::size_t>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw Error("BAD_REPORT", std::string("malformed metric scores: ") + e.what());
  }
}

MetricReport metric_report_from_json(const nlohmann::json& j) {
  MetricReport r;
  r.overall = metric_scores_from_json(j);
  try {
    for (const auto& [label, s] : j.at("per_category").items()) {
      r.per_category[label] = metric_scores_from_json(s);
    }
    r.sentence_chrf = j.at("sentence_chrf").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("BAD_REPORT", std::string("malformed metric report: ") + e.what());
  }
  return r;
}

}  // namespace tfbench::metrics
