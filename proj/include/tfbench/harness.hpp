#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tfbench/corpus.hpp"
#include "tfbench/direction.hpp"
#include "tfbench/metrics.hpp"
#include "tfbench/stats.hpp"

namespace tfbench::harness {

// ---- configuration ------------------------------------------------------

enum class AdapterKind { kBuiltinRule, kBuiltinIdentity, kExternalCommand };
std::string_view to_string(AdapterKind kind);
AdapterKind parse_adapter_kind(std::string_view text);

// Command templates are run with /bin/sh -c after placeholder substitution.
// Path placeholders ({input} {output} {train_src} {train_tgt} {valid_src}
// {valid_tgt} {workdir}) are substituted single-quoted; {direction} {seed}
// {model} are plain tokens.
struct ModelAdapter {
  std::string name;
  AdapterKind kind = AdapterKind::kBuiltinIdentity;
  std::string command_template;        // external only
  std::string train_command_template;  // external only, optional
  std::string table_path;              // builtin_rule; may contain {direction}; empty = bundled

  bool operator==(const ModelAdapter&) const = default;
};

nlohmann::json to_json(const ModelAdapter& adapter);

struct RunConfig {
  std::filesystem::path corpus_path;
  std::size_t sample_size = 40000;
  std::uint64_t sampling_seed = 42;
  std::vector<std::uint64_t> seeds{42, 43, 44};
  corpus::SplitSpec split;
  std::vector<Direction> directions{Direction::kTj2Fa, Direction::kFa2Tj};
  std::vector<ModelAdapter> adapters;
  metrics::MetricConfig metric_config;
  std::filesystem::path output_dir;
  int bootstrap_resamples = 2000;
  double timeout_seconds = 3600;
  bool parallel = false;
  bool resume = false;

  // Throws Error("BAD_CONFIG").
  void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const nlohmann::json& j,
                               const std::filesystem::path& base_dir = {});
// Relative paths inside the file resolve against the file's directory.
RunConfig load_run_config(const std::filesystem::path& path);

// ---- external processes -------------------------------------------------

struct ProcessResult {
  int exit_code = -1;  // 128 + signal for a signalled child
  bool timed_out = false;
  double wall_seconds = 0;
};

// Runs `command` under /bin/sh -c in its own process group with stdin from
// /dev/null and stdout+stderr appended to `log_path`. On timeout the whole
// group is killed.
ProcessResult run_shell(const std::string& command, const std::filesystem::path& workdir,
                        const std::filesystem::path& log_path, double timeout_seconds);

std::string shell_quote(std::string_view text);
// Unknown placeholders are left untouched.
std::string expand_template(std::string_view tmpl, const std::map<std::string, std::string>& values);

// ---- adapters -------------------------------------------------------------

struct AdapterTask {
  Direction direction = Direction::kTj2Fa;
  std::uint64_t seed = 0;
  std::filesystem::path input;   // one source segment per line
  std::filesystem::path output;  // written by the adapter
  std::filesystem::path train_src, train_tgt, valid_src, valid_tgt;
  std::filesystem::path workdir;
  double timeout_seconds = 3600;
};

struct AdapterOutput {
  std::vector<std::string> lines;
  std::optional<double> train_seconds;
  double infer_wall_seconds = 0;
  double infer_ms_per_item = 0;
  std::optional<double> peak_memory_gb;  // from {output}.meta.json
};

// Runs one adapter over a task. Failures throw Error with code
// ADAPTER_TIMEOUT, ADAPTER_EXIT, OUTPUT_MISSING or LINE_MISMATCH.
AdapterOutput run_adapter(const ModelAdapter& adapter, const AdapterTask& task);

// Table used by a builtin_rule adapter for one direction.
std::filesystem::path rule_table_path(const ModelAdapter& adapter, Direction direction);

// ---- records --------------------------------------------------------------

struct ConfidenceInterval {
  double low = 0;
  double high = 0;
  double level = 0.95;
  int resamples = 0;

  bool operator==(const ConfidenceInterval&) const = default;
};

struct RunRecord {
  std::string model;
  Direction direction = Direction::kTj2Fa;
  std::uint64_t seed = 0;
  std::string status = "ok";  // "ok" | "failed"
  std::string diagnostic;
  std::optional<metrics::MetricReport> metrics;
  std::optional<ConfidenceInterval> chrf_ci;
  std::optional<double> train_seconds;
  double infer_ms_per_item = 0;
  double infer_wall_seconds = 0;
  std::optional<double> peak_memory_gb;
  bool timing_reliable = true;
  std::string timestamp;  // ISO 8601 UTC
  std::string config_hash;
  std::size_t test_items = 0;
  std::string test_set_sha256;

  bool ok() const { return status == "ok"; }
  bool operator==(const RunRecord&) const = default;
};

nlohmann::json to_json(const RunRecord& record);
RunRecord run_record_from_json(const nlohmann::json& j);
std::filesystem::path record_path(const std::filesystem::path& output_dir, const std::string& model,
                                  Direction direction, std::uint64_t seed);
void save_record(const RunRecord& record, const std::filesystem::path& path);
RunRecord load_record(const std::filesystem::path& path);
// Every <dir>/<model>/<direction>/seed_<k>.json, in path order.
std::vector<RunRecord> load_records(const std::filesystem::path& dir);

// ---- experiment ---------------------------------------------------------

struct RunSummary {
  std::vector<RunRecord> records;  // adapter-major, then direction, then seed
  std::size_t invocations = 0;     // adapter runs actually performed
  std::size_t skipped = 0;         // cells reused from a previous run
  std::size_t failed = 0;
  std::vector<std::string> warnings;
};

using ProgressFn = std::function<void(const std::string&)>;

// Throws Error for configuration problems or an unreadable corpus; adapter
// failures are recorded in the summary instead.
RunSummary run_experiment(const RunConfig& config, const ProgressFn& progress = {});

// Hash written to a record; covers every config field that influences the
// cell's result, the corpus bytes and, for rule adapters, the table bytes.
std::string cell_config_hash(const RunConfig& config, const ModelAdapter& adapter, Direction direction,
                             const std::string& corpus_sha256);

// ---- reports --------------------------------------------------------------

// Significance of every model pair within a direction over per-item
// sentence chrF++ of the seeds both models completed. Throws
// Error("PAIRING_MISMATCH") when two records of one seed were scored on
// different test sets.
std::vector<stats::SignificanceReport> compare_records(const std::vector<RunRecord>& records,
                                                       double alpha = 0.05);

// "87.4 ± 0.1 [87.2--87.4]"; the ± part is omitted without a std and the
// bracket without an interval.
std::string format_cell(double mean, std::optional<double> std, std::optional<double> ci_low,
                        std::optional<double> ci_high, int decimals);

struct ReportDocument {
  nlohmann::json json;
  std::string markdown;
  std::string category_csv;
};

// Throws Error("NO_RECORDS") when no record succeeded.
ReportDocument render_report(const std::vector<RunRecord>& records,
                             const std::vector<stats::SignificanceReport>& comparisons);

}  // namespace tfbench::harness
