#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "tfbench/error.hpp"
#include "tfbench/harness.hpp"

namespace tfbench::harness {
namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  // "-0.0" reads as a sign error in a table
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

struct MetricColumn {
  const char* key;
  const char* title;
  int decimals;
  double scale;
  double metrics::MetricScores::*field;
};

constexpr MetricColumn kColumns[] = {
    {"chrf_pp", "chrF++", 1, 1.0, &metrics::MetricScores::chrf_pp},
    {"bleu", "BLEU", 2, 1.0, &metrics::MetricScores::bleu},
    {"ter", "TER", 1, 1.0, &metrics::MetricScores::ter},
    {"cer", "CER", 2, 1.0, &metrics::MetricScores::cer},
    {"wer", "WER", 2, 1.0, &metrics::MetricScores::wer},
    {"accuracy", "Acc, %", 1, 100.0, &metrics::MetricScores::accuracy},
};

using Key = std::pair<std::string, Direction>;

std::map<Key, std::vector<const RunRecord*>> group(const std::vector<RunRecord>& records, bool ok_only) {
  std::map<Key, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) {
    if (ok_only && !r.ok()) continue;
    groups[{r.model, r.direction}].push_back(&r);
  }
  for (auto& [key, v] : groups) {
    std::sort(v.begin(), v.end(), [](const RunRecord* a, const RunRecord* b) { return a->seed < b->seed; });
  }
  return groups;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string format_cell(double mean, std::optional<double> std, std::optional<double> ci_low,
                        std::optional<double> ci_high, int decimals) {
  std::string s = fixed(mean, decimals);
  if (std) s += " ± " + fixed(*std, decimals);
  if (ci_low && ci_high) s += " [" + fixed(*ci_low, decimals) + "--" + fixed(*ci_high, decimals) + "]";
  return s;
}

std::vector<stats::SignificanceReport> compare_records(const std::vector<RunRecord>& records, double alpha) {
  std::map<Direction, std::map<std::string, std::map<std::uint64_t, const RunRecord*>>> by_dir;
  for (const auto& r : records) {
    if (r.ok() && r.metrics) by_dir[r.direction][r.model][r.seed] = &r;
  }
  std::vector<stats::SignificanceReport> out;
  for (const auto& [direction, models] : by_dir) {
    stats::SignificanceReport rep;
    rep.direction = direction;
    for (auto a = models.begin(); a != models.end(); ++a) {
      for (auto b = std::next(a); b != models.end(); ++b) {
        stats::NamedScores sa{a->first, {}}, sb{b->first, {}};
        for (const auto& [seed, ra] : a->second) {
          const auto it = b->second.find(seed);
          if (it == b->second.end()) continue;
          const RunRecord* rb = it->second;
          if (ra->test_set_sha256 != rb->test_set_sha256 ||
              ra->metrics->sentence_chrf.size() != rb->metrics->sentence_chrf.size()) {
            throw Error("PAIRING_MISMATCH", a->first + " and " + b->first + " were scored on different " +
                                                std::string(to_string(direction)) + " test sets at seed " +
                                                std::to_string(seed));
          }
          sa.scores.insert(sa.scores.end(), ra->metrics->sentence_chrf.begin(), ra->metrics->sentence_chrf.end());
          sb.scores.insert(sb.scores.end(), rb->metrics->sentence_chrf.begin(), rb->metrics->sentence_chrf.end());
        }
        if (sa.scores.size() >= 2) {
          rep.pairs.push_back(stats::compare_models(direction, {sa, sb}, alpha).pairs.front());
        } else {
          stats::PairComparison pc;
          pc.model_a = sa.model;
          pc.model_b = sb.model;
          pc.items = sa.scores.size();
          pc.significant_at = alpha;
          rep.pairs.push_back(pc);
        }
      }
    }
    out.push_back(std::move(rep));
  }
  return out;
}

ReportDocument render_report(const std::vector<RunRecord>& records,
                             const std::vector<stats::SignificanceReport>& comparisons) {
  const auto ok_groups = group(records, true);
  if (ok_groups.empty()) throw Error("NO_RECORDS", "no successful run records to report");
  const auto all_groups = group(records, false);

  std::set<std::string> categories;
  for (const auto& [key, recs] : ok_groups) {
    for (const auto* r : recs) {
      for (const auto& [label, s] : r->metrics->per_category) categories.insert(label);
    }
  }

  ReportDocument doc;
  nlohmann::json rows = nlohmann::json::array();
  nlohmann::json cat_rows = nlohmann::json::array();
  std::ostringstream md, csv;
  md << "| Model | Direction | Seeds |";
  for (const auto& c : kColumns) md << ' ' << c.title << " |";
  md << "\n|---|---|---|";
  for (std::size_t i = 0; i < std::size(kColumns); ++i) md << "---|";
  md << '\n';

  csv << "model,direction";
  for (const auto& c : categories) csv << ',' << csv_field(c);
  csv << '\n';

  for (const auto& [key, recs] : ok_groups) {
    const auto& [model, direction] = key;
    nlohmann::json row{{"model", model}, {"direction", to_string(direction)}};
    std::vector<std::uint64_t> seeds, failed;
    for (const auto* r : recs) seeds.push_back(r->seed);
    for (const auto* r : all_groups.at(key)) {
      if (!r->ok()) failed.push_back(r->seed);
    }
    row["seeds"] = seeds;
    row["failed_seeds"] = failed;

    nlohmann::json aggs, display;
    md << "| " << model << " | " << to_string(direction) << " | " << seeds.size() << " |";
    for (const auto& c : kColumns) {
      std::vector<double> values;
      for (const auto* r : recs) values.push_back(r->metrics->overall.*c.field * c.scale);
      auto agg = stats::aggregate_runs(c.key, values);
      if (std::string_view(c.key) == "chrf_pp") {
        double lo = 0, hi = 0;
        std::size_t n = 0;
        for (const auto* r : recs) {
          if (!r->chrf_ci) continue;
          lo += r->chrf_ci->low;
          hi += r->chrf_ci->high;
          ++n;
          agg.ci_level = r->chrf_ci->level;
        }
        if (n == recs.size()) {
          agg.ci_low = lo / static_cast<double>(n);
          agg.ci_high = hi / static_cast<double>(n);
        }
      }
      const std::string cell = format_cell(agg.mean, agg.std, agg.ci_low, agg.ci_high, c.decimals);
      aggs[c.key] = stats::to_json(agg);
      display[c.key] = cell;
      md << ' ' << cell << " |";
    }
    md << '\n';
    row["metrics"] = aggs;
    row["display"] = display;

    nlohmann::json timing;
    std::vector<double> train, infer;
    std::optional<double> peak;
    bool reliable = true;
    for (const auto* r : recs) {
      if (r->train_seconds) train.push_back(*r->train_seconds);
      infer.push_back(r->infer_ms_per_item);
      if (r->peak_memory_gb) peak = std::max(peak.value_or(0.0), *r->peak_memory_gb);
      reliable = reliable && r->timing_reliable;
    }
    timing["train_seconds"] = train.empty() ? nlohmann::json() : stats::to_json(stats::aggregate_runs("train_seconds", train));
    timing["infer_ms_per_item"] = stats::to_json(stats::aggregate_runs("infer_ms_per_item", infer));
    timing["peak_memory_gb"] = peak ? nlohmann::json(*peak) : nlohmann::json();
    timing["timing_reliable"] = reliable;
    row["timing"] = timing;
    rows.push_back(row);

    nlohmann::json cat_row{{"model", model}, {"direction", to_string(direction)}};
    nlohmann::json cat_values = nlohmann::json::object();
    csv << csv_field(model) << ',' << to_string(direction);
    for (const auto& label : categories) {
      double sum = 0;
      std::size_t n = 0;
      for (const auto* r : recs) {
        const auto it = r->metrics->per_category.find(label);
        if (it == r->metrics->per_category.end()) continue;
        sum += it->second.chrf_pp;
        ++n;
      }
      csv << ',';
      if (n > 0) {
        cat_values[label] = sum / static_cast<double>(n);
        csv << fixed(sum / static_cast<double>(n), 4);
      }
    }
    csv << '\n';
    cat_row["chrf_pp"] = cat_values;
    cat_rows.push_back(cat_row);
  }

  nlohmann::json sig = nlohmann::json::array();
  for (const auto& rep : comparisons) {
    sig.push_back(stats::to_json(rep));
    if (rep.pairs.empty()) continue;
    md << "\n### Significance, " << to_string(rep.direction) << "\n\n"
       << "| Model A | Model B | Items | Wilcoxon p | t-test p | Significant |\n|---|---|---|---|---|---|\n";
    for (const auto& p : rep.pairs) {
      char wp[32], tp[32];
      std::snprintf(wp, sizeof wp, "%.3g", p.wilcoxon_p);
      std::snprintf(tp, sizeof tp, "%.3g", p.ttest_p);
      md << "| " << p.model_a << " | " << p.model_b << " | " << p.items << " | " << wp << " | " << tp << " | "
         << (p.significant ? "yes" : "no") << " |\n";
    }
  }

  doc.json = {{"rows", rows},
              {"per_category", {{"metric", "chrf_pp"}, {"categories", categories}, {"rows", cat_rows}}},
              {"significance", sig}};
  doc.markdown = md.str();
  doc.category_csv = csv.str();
  return doc;
}

}  // namespace tfbench::harness
