#include "tfbench/cli.hpp"

#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "tfbench/corpus.hpp"
#include "tfbench/error.hpp"
#include "tfbench/harness.hpp"
#include "tfbench/metrics.hpp"
#include "tfbench/rule_translit.hpp"
#include "tfbench/stats.hpp"
#include "tfbench/text_io.hpp"

namespace tfbench::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Options {
  bool json_out = false;
  std::uint64_t seed = 42;
  std::string config;

  std::string in, out, out_dir, table, direction, hyp, ref, cat, dir;
  std::vector<std::string> files;
  std::size_t n = 0;
  bool clean = false;
  bool resume = false;
  bool no_stratify = false;
  double train = 0.8, valid = 0.1, test = 0.1;
  double alpha = 0.05;
  std::string tokenizer;
  bool ter_case_sensitive = false;
  bool no_ter_shifts = false;
  int bootstrap = 0;
};

corpus::Corpus load_input(const Options& o, std::ostream& err) {
  corpus::Corpus c = corpus::load_corpus(o.in);
  if (!o.clean) return c;
  auto rep = corpus::prepare(c);
  err << "cleaned: " << rep.input_pairs << " -> " << rep.corpus.size() << " pairs ("
      << rep.duplicates_removed << " duplicates";
  for (const auto& [reason, count] : rep.dropped) err << ", " << count << ' ' << reason;
  err << ")\n";
  return std::move(rep.corpus);
}

metrics::MetricConfig metric_config(const Options& o) {
  metrics::MetricConfig cfg;
  if (!o.config.empty()) cfg = metrics::metric_config_from_json(json::parse(read_file(o.config)));
  if (!o.tokenizer.empty()) {
    cfg.bleu_tokenizer = metrics::metric_config_from_json({{"bleu_tokenizer", o.tokenizer}}).bleu_tokenizer;
  }
  if (o.ter_case_sensitive) cfg.ter_case_sensitive = true;
  if (o.no_ter_shifts) cfg.ter_shift_enabled = false;
  cfg.validate();
  return cfg;
}

void print(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

int cmd_corpus_stats(const Options& o, std::ostream& out, std::ostream& err) {
  print(out, corpus::to_json(corpus::compute_stats(load_input(o, err))));
  return 0;
}

int cmd_sample(const Options& o, std::ostream& out, std::ostream& err) {
  const auto c = load_input(o, err);
  const auto s = corpus::stratified_sample(c, o.n, o.seed);
  corpus::save_corpus(s, o.out);
  std::map<std::string, std::size_t> counts;
  for (const auto& p : s.pairs) ++counts[p.category];
  if (o.json_out) {
    print(out, {{"input_pairs", c.size()}, {"sampled", s.size()}, {"seed", o.seed}, {"out", o.out},
                {"category_counts", counts}});
  } else {
    out << "sampled " << s.size() << " of " << c.size() << " pairs into " << o.out << '\n';
  }
  return 0;
}

int cmd_split(const Options& o, std::ostream& out, std::ostream& err) {
  const auto c = load_input(o, err);
  corpus::SplitSpec spec;
  spec.train_ratio = o.train;
  spec.valid_ratio = o.valid;
  spec.test_ratio = o.test;
  spec.seed = o.seed;
  spec.stratify_by_category = !o.no_stratify;
  const auto split = corpus::stratified_split(c, spec);
  const fs::path dir(o.out_dir);
  corpus::save_corpus(split.train, dir / "train.jsonl");
  corpus::save_corpus(split.valid, dir / "valid.jsonl");
  corpus::save_corpus(split.test, dir / "test.jsonl");
  if (o.json_out) {
    print(out, {{"train", split.train.size()}, {"valid", split.valid.size()}, {"test", split.test.size()},
                {"seed", o.seed}, {"out_dir", o.out_dir}});
  } else {
    out << "train " << split.train.size() << ", valid " << split.valid.size() << ", test " << split.test.size()
        << " -> " << o.out_dir << '\n';
  }
  return 0;
}

int cmd_translit(const Options& o, std::ostream& out, std::ostream&) {
  if (o.table.empty() == o.direction.empty()) throw Error("USAGE", "give exactly one of --table or --direction");
  const auto table = o.table.empty() ? translit::load_bundled_mapping(parse_direction(o.direction))
                                     : translit::load_mapping(o.table);
  const auto lines = read_lines(o.in);
  std::vector<std::string> result;
  result.reserve(lines.size());
  for (const auto& l : lines) result.push_back(translit::transliterate(l, table));
  write_lines(o.out, result);
  if (o.json_out) {
    print(out, {{"lines", result.size()}, {"direction", to_string(table.direction())}, {"rules", table.size()},
                {"out", o.out}});
  } else {
    out << "transliterated " << result.size() << " lines with " << table.size() << " rules into " << o.out << '\n';
  }
  return 0;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream&) {
  const auto hyp = read_lines(o.hyp);
  const auto ref = read_lines(o.ref);
  if (hyp.size() != ref.size()) {
    throw Error("LINE_MISMATCH", o.hyp + " has " + std::to_string(hyp.size()) + " lines, " + o.ref + " has " +
                                     std::to_string(ref.size()));
  }
  std::vector<std::string> cats;
  if (!o.cat.empty()) {
    cats = read_lines(o.cat);
    if (cats.size() != ref.size()) {
      throw Error("LINE_MISMATCH", o.cat + " has " + std::to_string(cats.size()) + " lines, " + o.ref + " has " +
                                       std::to_string(ref.size()));
    }
  }
  metrics::HypothesisSet set;
  if (!o.direction.empty()) set.direction = parse_direction(o.direction);
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    set.items.push_back({corpus::normalize_text(hyp[i]), corpus::normalize_text(ref[i]), cats.empty() ? "all" : cats[i]});
  }
  const auto cfg = metric_config(o);
  const auto report = metrics::evaluate(set, cfg);
  json j = metrics::to_json(report);
  if (o.bootstrap > 0) {
    stats::BootstrapOptions bo;
    bo.resamples = o.bootstrap;
    bo.seed = o.seed;
    bo.threads = 0;
    const auto ci = stats::bootstrap_ci(metrics::chrf_statistics(set, cfg), bo);
    j["chrf_ci"] = {{"low", ci.low}, {"high", ci.high}, {"level", bo.level}, {"resamples", bo.resamples}};
  }
  if (!o.out.empty()) write_file_atomic(o.out, j.dump(2) + "\n");
  if (o.json_out) {
    print(out, j);
  } else {
    const auto& s = report.overall;
    char buf[256];
    std::snprintf(buf, sizeof buf, "items %zu  chrF++ %.2f  BLEU %.2f  TER %.2f  CER %.4f  WER %.4f  Acc %.4f\n",
                  s.items, s.chrf_pp, s.bleu, s.ter, s.cer, s.wer, s.accuracy);
    out << buf;
  }
  return 0;
}

int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.config.empty()) throw Error("USAGE", "bench needs --config FILE");
  auto cfg = harness::load_run_config(o.config);
  if (o.resume) cfg.resume = true;
  const auto summary = harness::run_experiment(cfg, [&](const std::string& m) { err << m << '\n'; });
  for (const auto& w : summary.warnings) err << "warning: " << w << '\n';
  if (o.json_out) {
    json failed = json::array();
    for (const auto& r : summary.records) {
      if (!r.ok()) failed.push_back({{"model", r.model}, {"direction", to_string(r.direction)}, {"seed", r.seed},
                                     {"diagnostic", r.diagnostic}});
    }
    print(out, {{"records", summary.records.size()}, {"invocations", summary.invocations},
                {"skipped", summary.skipped}, {"failed", summary.failed}, {"failures", failed},
                {"warnings", summary.warnings}, {"output_dir", cfg.output_dir.string()}});
  } else {
    out << summary.records.size() << " records (" << summary.invocations << " run, " << summary.skipped
        << " reused, " << summary.failed << " failed) in " << cfg.output_dir.string() << '\n';
  }
  return summary.failed > 0 ? 2 : 0;
}

std::vector<harness::RunRecord> gather(const Options& o) {
  std::vector<harness::RunRecord> records;
  if (!o.dir.empty()) records = harness::load_records(o.dir);
  for (const auto& f : o.files) records.push_back(harness::load_record(f));
  if (records.empty()) throw Error("NO_RECORDS", "no run records given (use --dir or record files)");
  return records;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream&) {
  const auto reports = harness::compare_records(gather(o), o.alpha);
  json j = json::array();
  for (const auto& r : reports) j.push_back(stats::to_json(r));
  if (!o.out.empty()) write_file_atomic(o.out, j.dump(2) + "\n");
  print(out, j);
  return 0;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream&) {
  const auto records = gather(o);
  const auto doc = harness::render_report(records, harness::compare_records(records, o.alpha));
  if (!o.out.empty()) {
    fs::path base(o.out);
    write_file_atomic(base, doc.json.dump(2) + "\n");
    write_file_atomic(fs::path(base).replace_extension(".md"), doc.markdown);
    write_file_atomic(fs::path(base).replace_extension(".categories.csv"), doc.category_csv);
  }
  if (o.json_out) print(out, doc.json);
  else out << doc.markdown;
  return 0;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Tajik-Farsi transliteration benchmark toolkit", "tfbench"};
  app.require_subcommand(1);
  app.fallthrough();

  const auto common = [&](CLI::App* sub, bool seed) {
    sub->add_flag("--json", o.json_out, "Write machine-readable JSON to standard output");
    if (seed) sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  };
  const auto input = [&](CLI::App* sub) {
    sub->add_option("--in", o.in, "Corpus JSONL file")->required()->check(CLI::ExistingFile);
    sub->add_flag("--clean", o.clean, "Normalize, filter and deduplicate before use");
  };

  auto* stats_cmd = app.add_subcommand("corpus-stats", "Descriptive statistics of a corpus as JSON");
  input(stats_cmd);
  common(stats_cmd, false);

  auto* sample_cmd = app.add_subcommand("sample", "Stratified sample of a corpus");
  input(sample_cmd);
  sample_cmd->add_option("--n", o.n, "Sample size")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--out", o.out, "Output JSONL file")->required();
  common(sample_cmd, true);

  auto* split_cmd = app.add_subcommand("split", "Stratified train/valid/test split");
  input(split_cmd);
  split_cmd->add_option("--out-dir", o.out_dir, "Directory for train/valid/test.jsonl")->required();
  split_cmd->add_option("--train", o.train, "Train ratio")->capture_default_str();
  split_cmd->add_option("--valid", o.valid, "Validation ratio")->capture_default_str();
  split_cmd->add_option("--test", o.test, "Test ratio")->capture_default_str();
  split_cmd->add_flag("--no-stratify", o.no_stratify, "Split without regard to categories");
  common(split_cmd, true);

  auto* translit_cmd = app.add_subcommand("translit", "Rule-based transliteration of a text file, line by line");
  translit_cmd->add_option("--table", o.table, "Mapping table JSON")->check(CLI::ExistingFile);
  translit_cmd->add_option("--direction", o.direction, "Use the bundled table for tj2fa or fa2tj");
  translit_cmd->add_option("--in", o.in, "Input text file")->required()->check(CLI::ExistingFile);
  translit_cmd->add_option("--out", o.out, "Output text file")->required();
  common(translit_cmd, false);

  auto* eval_cmd = app.add_subcommand("eval", "Score hypotheses against references");
  eval_cmd->add_option("--hyp", o.hyp, "Hypothesis file, one segment per line")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--ref", o.ref, "Reference file, one segment per line")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--cat", o.cat, "Category label per line")->check(CLI::ExistingFile);
  eval_cmd->add_option("--out", o.out, "Write the report JSON here");
  eval_cmd->add_option("--direction", o.direction, "tj2fa or fa2tj (informational)");
  eval_cmd->add_option("--config", o.config, "Metric configuration JSON")->check(CLI::ExistingFile);
  eval_cmd->add_option("--tokenizer", o.tokenizer, "BLEU tokenizer: international or 13a");
  eval_cmd->add_flag("--ter-case-sensitive", o.ter_case_sensitive, "Do not lower-case before TER");
  eval_cmd->add_flag("--no-ter-shifts", o.no_ter_shifts, "Disable TER block shifts");
  eval_cmd->add_option("--bootstrap", o.bootstrap, "Add a chrF++ bootstrap interval with this many resamples");
  common(eval_cmd, true);

  auto* bench_cmd = app.add_subcommand("bench", "Run models x directions x seeds from a run configuration");
  bench_cmd->add_option("--config", o.config, "Run configuration JSON")->required()->check(CLI::ExistingFile);
  bench_cmd->add_flag("--resume", o.resume, "Reuse finished records whose configuration hash matches");
  common(bench_cmd, false);

  auto* compare_cmd = app.add_subcommand("compare", "Paired significance tests between models");
  compare_cmd->add_option("--dir", o.dir, "Results directory")->check(CLI::ExistingDirectory);
  compare_cmd->add_option("records", o.files, "Run record JSON files")->check(CLI::ExistingFile);
  compare_cmd->add_option("--alpha", o.alpha, "Significance level")->capture_default_str();
  compare_cmd->add_option("--out", o.out, "Also write the JSON here");
  common(compare_cmd, false);

  auto* report_cmd = app.add_subcommand("report", "Tables of mean, std and intervals over seeds");
  report_cmd->add_option("--dir", o.dir, "Results directory")->check(CLI::ExistingDirectory);
  report_cmd->add_option("records", o.files, "Run record JSON files")->check(CLI::ExistingFile);
  report_cmd->add_option("--out", o.out, "Report JSON path; .md and .categories.csv are written beside it");
  report_cmd->add_option("--alpha", o.alpha, "Significance level")->capture_default_str();
  common(report_cmd, false);

  if (!args.empty() && !args[0].empty() && args[0][0] != '-') {
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known = known || sub->get_name() == args[0];
    if (!known) {
      err << "error[USAGE]: unknown subcommand '" << args[0] << "'\n" << app.help();
      return 1;
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error[USAGE]: " << e.what() << '\n';
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    err << failing->help();
    return 1;
  }

  try {
    if (stats_cmd->parsed()) return cmd_corpus_stats(o, out, err);
    if (sample_cmd->parsed()) return cmd_sample(o, out, err);
    if (split_cmd->parsed()) return cmd_split(o, out, err);
    if (translit_cmd->parsed()) return cmd_translit(o, out, err);
    if (eval_cmd->parsed()) return cmd_eval(o, out, err);
    if (bench_cmd->parsed()) return cmd_bench(o, out, err);
    if (compare_cmd->parsed()) return cmd_compare(o, out, err);
    if (report_cmd->parsed()) return cmd_report(o, out, err);
  } catch (const Error& e) {
    err << "error[" << e.code() << "]: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    err << "error[BAD_JSON]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error[INTERNAL]: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, std::cout, std::cerr);
}

}  // namespace tfbench::cli
