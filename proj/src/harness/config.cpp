#include <cctype>
#include <set>

#include "tfbench/error.hpp"
#include "tfbench/harness.hpp"
#include "tfbench/text_io.hpp"

namespace tfbench::harness {
namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error("BAD_CONFIG", msg); }

bool safe_name(const std::string& s) {
  if (s.empty() || !std::isalnum(static_cast<unsigned char>(s[0]))) return false;
  for (unsigned char c : s) {
    if (!(std::isalnum(c) || c == '_' || c == '-' || c == '.')) return false;
  }
  return true;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.empty() || path.is_absolute() || base.empty()) return path;
  return base / path;
}

ModelAdapter adapter_from_json(const nlohmann::json& j, const std::filesystem::path& base) {
  if (!j.is_object()) bad("adapter entries must be objects");
  ModelAdapter a;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") a.name = value.get<std::string>();
    else if (key == "kind") a.kind = parse_adapter_kind(value.get<std::string>());
    else if (key == "command_template") a.command_template = value.get<std::string>();
    else if (key == "train_command_template") a.train_command_template = value.get<std::string>();
    else if (key == "table_path") a.table_path = resolve(base, value.get<std::string>()).string();
    else bad("unknown adapter key '" + key + "'");
  }
  return a;
}

}  // namespace

std::string_view to_string(AdapterKind kind) {
  switch (kind) {
    case AdapterKind::kBuiltinRule: return "builtin_rule";
    case AdapterKind::kBuiltinIdentity: return "builtin_identity";
    case AdapterKind::kExternalCommand: return "external_command";
  }
  return "?";
}

AdapterKind parse_adapter_kind(std::string_view text) {
  if (text == "builtin_rule") return AdapterKind::kBuiltinRule;
  if (text == "builtin_identity") return AdapterKind::kBuiltinIdentity;
  if (text == "external_command") return AdapterKind::kExternalCommand;
  bad("unknown adapter kind '" + std::string(text) + "'");
}

nlohmann::json to_json(const ModelAdapter& a) {
  nlohmann::json j{{"name", a.name}, {"kind", to_string(a.kind)}};
  if (a.kind == AdapterKind::kExternalCommand) {
    j["command_template"] = a.command_template;
    if (!a.train_command_template.empty()) j["train_command_template"] = a.train_command_template;
  }
  if (a.kind == AdapterKind::kBuiltinRule && !a.table_path.empty()) j["table_path"] = a.table_path;
  return j;
}

void RunConfig::validate() const {
  if (corpus_path.empty()) bad("corpus_path is required");
  if (output_dir.empty()) bad("output_dir is required");
  if (sample_size == 0) bad("sample_size must be positive");
  if (seeds.empty()) bad("at least one seed is required");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) bad("seeds must be distinct");
  if (directions.empty()) bad("at least one direction is required");
  if (std::set<Direction>(directions.begin(), directions.end()).size() != directions.size()) {
    bad("directions must be distinct");
  }
  if (adapters.empty()) bad("at least one adapter is required");
  std::set<std::string> names;
  for (const auto& a : adapters) {
    if (!safe_name(a.name)) bad("adapter name '" + a.name + "' must match [A-Za-z0-9][A-Za-z0-9_.-]*");
    if (!names.insert(a.name).second) bad("duplicate adapter name '" + a.name + "'");
    if (a.kind == AdapterKind::kExternalCommand && a.command_template.empty()) {
      bad("adapter '" + a.name + "' needs a command_template");
    }
  }
  if (bootstrap_resamples < 1) bad("bootstrap_resamples must be >= 1");
  if (!(timeout_seconds > 0)) bad("timeout_seconds must be positive");
  try {
    split.validate();
    metric_config.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json dirs = nlohmann::json::array();
  for (auto d : cfg.directions) dirs.push_back(to_string(d));
  nlohmann::json adapters = nlohmann::json::array();
  for (const auto& a : cfg.adapters) adapters.push_back(to_json(a));
  return {{"corpus_path", cfg.corpus_path.string()},
          {"sample_size", cfg.sample_size},
          {"sampling_seed", cfg.sampling_seed},
          {"seeds", cfg.seeds},
          {"split",
           {{"train_ratio", cfg.split.train_ratio},
            {"valid_ratio", cfg.split.valid_ratio},
            {"test_ratio", cfg.split.test_ratio},
            {"stratify_by_category", cfg.split.stratify_by_category}}},
          {"directions", dirs},
          {"adapters", adapters},
          {"metric_config", metrics::to_json(cfg.metric_config)},
          {"output_dir", cfg.output_dir.string()},
          {"bootstrap_resamples", cfg.bootstrap_resamples},
          {"timeout_seconds", cfg.timeout_seconds},
          {"parallel", cfg.parallel},
          {"resume", cfg.resume}};
}

RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) bad("run config must be a JSON object");
  RunConfig cfg;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "corpus_path") cfg.corpus_path = resolve(base_dir, value.get<std::string>());
      else if (key == "sample_size") cfg.sample_size = value.get<std::size_t>();
      else if (key == "sampling_seed") cfg.sampling_seed = value.get<std::uint64_t>();
      else if (key == "seeds") cfg.seeds = value.get<std::vector<std::uint64_t>>();
      else if (key == "split") {
        for (const auto& [k, v] : value.items()) {
          if (k == "train_ratio") cfg.split.train_ratio = v.get<double>();
          else if (k == "valid_ratio") cfg.split.valid_ratio = v.get<double>();
          else if (k == "test_ratio") cfg.split.test_ratio = v.get<double>();
          else if (k == "stratify_by_category") cfg.split.stratify_by_category = v.get<bool>();
          else bad("unknown split key '" + k + "'");
        }
      } else if (key == "directions") {
        cfg.directions.clear();
        for (const auto& d : value) cfg.directions.push_back(parse_direction(d.get<std::string>()));
      } else if (key == "adapters") {
        for (const auto& a : value) cfg.adapters.push_back(adapter_from_json(a, base_dir));
      } else if (key == "metric_config") cfg.metric_config = metrics::metric_config_from_json(value);
      else if (key == "output_dir") cfg.output_dir = resolve(base_dir, value.get<std::string>());
      else if (key == "bootstrap_resamples") cfg.bootstrap_resamples = value.get<int>();
      else if (key == "timeout_seconds") cfg.timeout_seconds = value.get<double>();
      else if (key == "parallel") cfg.parallel = value.get<bool>();
      else if (key == "resume") cfg.resume = value.get<bool>();
      else bad("unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  } catch (const Error& e) {
    if (e.code() == "BAD_CONFIG") throw;
    bad(e.what());
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    bad(path.string() + ": " + e.what());
  } catch (const Error& e) {
    bad(e.what());
  }
  return run_config_from_json(j, std::filesystem::absolute(path).parent_path());
}

}  // namespace tfbench::harness
