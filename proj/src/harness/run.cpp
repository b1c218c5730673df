#include <atomic>
#include <ctime>
#include <mutex>
#include <thread>

#include "tfbench/error.hpp"
#include "tfbench/harness.hpp"
#include "tfbench/text_io.hpp"

namespace tfbench::harness {
namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Source, reference and category of every test item for one seed and direction.
struct TestSet {
  std::vector<std::string> sources, references, categories;
  std::filesystem::path src_path, train_src, train_tgt, valid_src, valid_tgt;
  std::string sha256;
};

void write_if_changed(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::string body;
  for (const auto& l : lines) {
    body += l;
    body.push_back('\n');
  }
  if (std::filesystem::exists(path) && read_file(path) == body) return;
  write_file_atomic(path, body);
}

TestSet materialize(const corpus::Split& split, Direction direction, const std::filesystem::path& dir) {
  const bool tj = direction == Direction::kTj2Fa;
  const auto side = [&](const corpus::Corpus& c, bool source) {
    std::vector<std::string> out;
    out.reserve(c.size());
    for (const auto& p : c.pairs) out.push_back((source == tj) ? p.tajik : p.farsi);
    return out;
  };
  TestSet t;
  t.sources = side(split.test, true);
  t.references = side(split.test, false);
  for (const auto& p : split.test.pairs) t.categories.push_back(p.category);
  t.src_path = dir / "test.src";
  t.train_src = dir / "train.src";
  t.train_tgt = dir / "train.tgt";
  t.valid_src = dir / "valid.src";
  t.valid_tgt = dir / "valid.tgt";
  write_if_changed(t.src_path, t.sources);
  write_if_changed(dir / "test.ref", t.references);
  write_if_changed(t.train_src, side(split.train, true));
  write_if_changed(t.train_tgt, side(split.train, false));
  write_if_changed(t.valid_src, side(split.valid, true));
  write_if_changed(t.valid_tgt, side(split.valid, false));

  nlohmann::json fingerprint{{"sources", t.sources}, {"references", t.references}, {"categories", t.categories}};
  t.sha256 = sha256_hex(fingerprint.dump());
  return t;
}

struct Cell {
  const ModelAdapter* adapter;
  Direction direction;
  std::uint64_t seed;
  const TestSet* test;
  std::filesystem::path path;
  std::string hash;
};

RunRecord execute(const RunConfig& cfg, const Cell& cell) {
  RunRecord rec;
  rec.model = cell.adapter->name;
  rec.direction = cell.direction;
  rec.seed = cell.seed;
  rec.config_hash = cell.hash;
  rec.test_items = cell.test->sources.size();
  rec.test_set_sha256 = cell.test->sha256;
  rec.timing_reliable = !cfg.parallel;

  auto workdir = cell.path;
  workdir.replace_extension(".work");
  AdapterTask task;
  task.direction = cell.direction;
  task.seed = cell.seed;
  task.input = cell.test->src_path;
  task.output = workdir / "hypotheses.txt";
  task.train_src = cell.test->train_src;
  task.train_tgt = cell.test->train_tgt;
  task.valid_src = cell.test->valid_src;
  task.valid_tgt = cell.test->valid_tgt;
  task.workdir = workdir;
  task.timeout_seconds = cfg.timeout_seconds;

  try {
    std::filesystem::create_directories(workdir);
    const AdapterOutput out = run_adapter(*cell.adapter, task);
    rec.train_seconds = out.train_seconds;
    rec.infer_wall_seconds = out.infer_wall_seconds;
    rec.infer_ms_per_item = out.infer_ms_per_item;
    rec.peak_memory_gb = out.peak_memory_gb;

    metrics::HypothesisSet set;
    set.direction = cell.direction;
    set.items.reserve(out.lines.size());
    for (std::size_t i = 0; i < out.lines.size(); ++i) {
      set.items.push_back({corpus::normalize_text(out.lines[i]), cell.test->references[i],
                           cell.test->categories[i]});
    }
    rec.metrics = metrics::evaluate(set, cfg.metric_config);

    stats::BootstrapOptions bo;
    bo.resamples = cfg.bootstrap_resamples;
    bo.seed = cell.seed;
    bo.threads = cfg.parallel ? 1 : 0;
    const auto ci = stats::bootstrap_ci(metrics::chrf_statistics(set, cfg.metric_config), bo);
    rec.chrf_ci = ConfidenceInterval{ci.low, ci.high, bo.level, bo.resamples};
  } catch (const Error& e) {
    rec.status = "failed";
    rec.diagnostic = e.code() + ": " + e.what();
    rec.metrics.reset();
    rec.chrf_ci.reset();
  } catch (const std::exception& e) {
    rec.status = "failed";
    rec.diagnostic = std::string("INTERNAL: ") + e.what();
    rec.metrics.reset();
    rec.chrf_ci.reset();
  }
  rec.timestamp = utc_timestamp();
  save_record(rec, cell.path);
  return rec;
}

}  // namespace

std::string cell_config_hash(const RunConfig& config, const ModelAdapter& adapter, Direction direction,
                             const std::string& corpus_sha256) {
  nlohmann::json j = to_json(config);
  for (const char* key : {"corpus_path", "seeds", "directions", "adapters", "output_dir", "timeout_seconds",
                          "parallel", "resume"}) {
    j.erase(key);
  }
  j["corpus_sha256"] = corpus_sha256;
  j["adapter"] = to_json(adapter);
  if (adapter.kind == AdapterKind::kBuiltinRule) {
    const auto table = rule_table_path(adapter, direction);
    j["table_sha256"] = std::filesystem::exists(table) ? sha256_hex(read_file(table)) : "missing";
  }
  return sha256_hex(j.dump());
}

RunSummary run_experiment(const RunConfig& input_config, const ProgressFn& progress) {
  input_config.validate();
  // Adapters run inside their work directories, so every path handed to
  // them has to be absolute.
  RunConfig config = input_config;
  config.corpus_path = std::filesystem::absolute(config.corpus_path).lexically_normal();
  config.output_dir = std::filesystem::absolute(config.output_dir).lexically_normal();
  const auto say = [&](const std::string& msg) {
    if (progress) progress(msg);
  };

  const std::string corpus_bytes = read_file(config.corpus_path);
  const std::string corpus_sha = sha256_hex(corpus_bytes);
  const corpus::Corpus raw = corpus::parse_corpus(corpus_bytes, config.corpus_path.string());
  const corpus::PrepareReport prep = corpus::prepare(raw);
  if (prep.corpus.empty()) throw Error("EMPTY_CORPUS", "no pairs survive cleaning in " + config.corpus_path.string());

  RunSummary summary;
  std::size_t n = config.sample_size;
  if (n > prep.corpus.size()) {
    summary.warnings.push_back("sample_size " + std::to_string(n) + " exceeds the " +
                               std::to_string(prep.corpus.size()) + " clean pairs; using all of them");
    n = prep.corpus.size();
  }
  const corpus::Corpus sample = corpus::stratified_sample(prep.corpus, n, config.sampling_seed);
  say("corpus: " + std::to_string(raw.size()) + " pairs, " + std::to_string(prep.corpus.size()) + " clean, " +
      std::to_string(sample.size()) + " sampled");

  std::filesystem::create_directories(config.output_dir);
  write_file_atomic(config.output_dir / "run_config.json", to_json(config).dump(2) + "\n");

  // seed -> direction -> test set
  std::map<std::uint64_t, std::map<Direction, TestSet>> tests;
  for (std::uint64_t seed : config.seeds) {
    corpus::SplitSpec spec = config.split;
    spec.seed = seed;
    const corpus::Split split = corpus::stratified_split(sample, spec);
    for (Direction d : config.directions) {
      const auto dir = config.output_dir / "_data" / ("seed_" + std::to_string(seed)) / std::string(to_string(d));
      tests[seed].emplace(d, materialize(split, d, dir));
    }
  }

  std::vector<Cell> cells;
  for (const auto& adapter : config.adapters) {
    for (Direction d : config.directions) {
      for (std::uint64_t seed : config.seeds) {
        cells.push_back({&adapter, d, seed, &tests.at(seed).at(d),
                         record_path(config.output_dir, adapter.name, d, seed),
                         cell_config_hash(config, adapter, d, corpus_sha)});
      }
    }
  }

  summary.records.resize(cells.size());
  std::vector<bool> todo(cells.size(), true);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!config.resume || !std::filesystem::exists(cells[i].path)) continue;
    try {
      RunRecord prev = load_record(cells[i].path);
      if (prev.ok() && prev.config_hash == cells[i].hash) {
        summary.records[i] = std::move(prev);
        todo[i] = false;
        ++summary.skipped;
      }
    } catch (const Error&) {
    }
  }

  std::atomic<std::size_t> invocations{0};
  std::mutex say_mutex;
  const auto run_one = [&](std::size_t i) {
    const Cell& c = cells[i];
    ++invocations;
    summary.records[i] = execute(config, c);
    std::lock_guard lock(say_mutex);
    say(c.adapter->name + " " + std::string(to_string(c.direction)) + " seed " + std::to_string(c.seed) + ": " +
        (summary.records[i].ok() ? "ok" : summary.records[i].diagnostic));
  };

  if (config.parallel) {
    std::atomic<std::size_t> next{0};
    const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < cells.size(); i = next++) {
            if (todo[i]) run_one(i);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (todo[i]) run_one(i);
    }
  }

  summary.invocations = invocations.load();
  for (const auto& r : summary.records) summary.failed += r.ok() ? 0 : 1;
  return summary;
}

}  // namespace tfbench::harness
