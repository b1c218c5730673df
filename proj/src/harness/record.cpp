#include <algorithm>
#include <regex>

#include "tfbench/error.hpp"
#include "tfbench/harness.hpp"
#include "tfbench/text_io.hpp"

namespace tfbench::harness {
namespace {

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

std::optional<double> opt_double(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<double>();
}

}  // namespace

nlohmann::json to_json(const RunRecord& r) {
  nlohmann::json j{{"model", r.model},
                   {"direction", to_string(r.direction)},
                   {"seed", r.seed},
                   {"status", r.status},
                   {"diagnostic", r.diagnostic},
                   {"metrics", r.metrics ? metrics::to_json(*r.metrics) : nlohmann::json()},
                   {"train_seconds", opt(r.train_seconds)},
                   {"infer_ms_per_item", r.infer_ms_per_item},
                   {"infer_wall_seconds", r.infer_wall_seconds},
                   {"peak_memory_gb", opt(r.peak_memory_gb)},
                   {"timing_reliable", r.timing_reliable},
                   {"timestamp", r.timestamp},
                   {"config_hash", r.config_hash},
                   {"test_items", r.test_items},
                   {"test_set_sha256", r.test_set_sha256}};
  if (r.chrf_ci) {
    j["chrf_ci"] = {{"low", r.chrf_ci->low},
                    {"high", r.chrf_ci->high},
                    {"level", r.chrf_ci->level},
                    {"resamples", r.chrf_ci->resamples}};
  } else {
    j["chrf_ci"] = nullptr;
  }
  return j;
}

RunRecord run_record_from_json(const nlohmann::json& j) {
  try {
    RunRecord r;
    r.model = j.at("model").get<std::string>();
    r.direction = parse_direction(j.at("direction").get<std::string>());
    r.seed = j.at("seed").get<std::uint64_t>();
    r.status = j.at("status").get<std::string>();
    if (r.status != "ok" && r.status != "failed") throw Error("BAD_RECORD", "unknown status '" + r.status + "'");
    r.diagnostic = j.value("diagnostic", "");
    if (j.contains("metrics") && !j["metrics"].is_null()) r.metrics = metrics::metric_report_from_json(j["metrics"]);
    if (j.contains("chrf_ci") && !j["chrf_ci"].is_null()) {
      const auto& c = j["chrf_ci"];
      r.chrf_ci = ConfidenceInterval{c.at("low").get<double>(), c.at("high").get<double>(),
                                     c.at("level").get<double>(), c.at("resamples").get<int>()};
    }
    r.train_seconds = opt_double(j, "train_seconds");
    r.infer_ms_per_item = j.at("infer_ms_per_item").get<double>();
    r.infer_wall_seconds = j.at("infer_wall_seconds").get<double>();
    r.peak_memory_gb = opt_double(j, "peak_memory_gb");
    r.timing_reliable = j.at("timing_reliable").get<bool>();
    r.timestamp = j.at("timestamp").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.test_items = j.at("test_items").get<std::size_t>();
    r.test_set_sha256 = j.at("test_set_sha256").get<std::string>();
    if (r.ok() && !r.metrics) throw Error("BAD_RECORD", "successful record without metrics");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error("BAD_RECORD", e.what());
  } catch (const Error& e) {
    if (e.code() == "BAD_RECORD") throw;
    throw Error("BAD_RECORD", e.what());
  }
}

std::filesystem::path record_path(const std::filesystem::path& output_dir, const std::string& model,
                                  Direction direction, std::uint64_t seed) {
  return output_dir / model / std::string(to_string(direction)) / ("seed_" + std::to_string(seed) + ".json");
}

void save_record(const RunRecord& record, const std::filesystem::path& path) {
  write_file_atomic(path, to_json(record).dump(2) + "\n");
}

RunRecord load_record(const std::filesystem::path& path) {
  try {
    return run_record_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw Error("BAD_RECORD", path.string() + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == "IO_ERROR") throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<RunRecord> load_records(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw Error("IO_ERROR", "not a directory: " + dir.string());
  static const std::regex kName(R"(seed_[0-9]+\.json)");
  std::vector<std::filesystem::path> paths;
  for (const auto& model : std::filesystem::directory_iterator(dir)) {
    if (!model.is_directory()) continue;
    for (const auto& direction : std::filesystem::directory_iterator(model.path())) {
      if (!direction.is_directory()) continue;
      for (const auto& file : std::filesystem::directory_iterator(direction.path())) {
        if (file.is_regular_file() && std::regex_match(file.path().filename().string(), kName)) {
          paths.push_back(file.path());
        }
      }
    }
  }
  std::sort(paths.begin(), paths.end());
  std::vector<RunRecord> records;
  records.reserve(paths.size());
  for (const auto& p : paths) records.push_back(load_record(p));
  return records;
}

}  // namespace tfbench::harness
