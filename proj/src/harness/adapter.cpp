#include <chrono>

#include "tfbench/error.hpp"
#include "tfbench/harness.hpp"
#include "tfbench/rule_translit.hpp"
#include "tfbench/text_io.hpp"

namespace tfbench::harness {
namespace {

using Clock = std::chrono::steady_clock;

std::map<std::string, std::string> placeholders(const ModelAdapter& adapter, const AdapterTask& task) {
  const auto q = [](const std::filesystem::path& p) { return shell_quote(p.string()); };
  return {{"input", q(task.input)},         {"output", q(task.output)},
          {"train_src", q(task.train_src)}, {"train_tgt", q(task.train_tgt)},
          {"valid_src", q(task.valid_src)}, {"valid_tgt", q(task.valid_tgt)},
          {"workdir", q(task.workdir)},     {"direction", std::string(to_string(task.direction))},
          {"seed", std::to_string(task.seed)}, {"model", adapter.name}};
}

double run_step(const std::string& what, const std::string& command, const AdapterTask& task) {
  const auto log = task.workdir / (what + ".log");
  const ProcessResult r = run_shell(command, task.workdir, log, task.timeout_seconds);
  if (r.timed_out) {
    throw Error("ADAPTER_TIMEOUT", what + " command exceeded " + std::to_string(task.timeout_seconds) +
                                       " s (log: " + log.string() + ")");
  }
  if (r.exit_code != 0) {
    throw Error("ADAPTER_EXIT", what + " command exited with status " + std::to_string(r.exit_code) +
                                    " (log: " + log.string() + ")");
  }
  return r.wall_seconds;
}

std::optional<double> read_peak_memory(const std::filesystem::path& output) {
  auto sidecar = output;
  sidecar += ".meta.json";
  if (!std::filesystem::exists(sidecar)) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(read_file(sidecar));
    if (j.contains("peak_memory_gb") && j["peak_memory_gb"].is_number()) {
      return j["peak_memory_gb"].get<double>();
    }
  } catch (const nlohmann::json::exception&) {
  }
  return std::nullopt;
}

}  // namespace

std::filesystem::path rule_table_path(const ModelAdapter& adapter, Direction direction) {
  if (adapter.table_path.empty()) return translit::bundled_table_path(direction);
  return expand_template(adapter.table_path, {{"direction", std::string(to_string(direction))}});
}

AdapterOutput run_adapter(const ModelAdapter& adapter, const AdapterTask& task) {
  const auto inputs = read_lines(task.input);
  AdapterOutput out;

  if (adapter.kind == AdapterKind::kExternalCommand) {
    const auto values = placeholders(adapter, task);
    if (!adapter.train_command_template.empty()) {
      out.train_seconds = run_step("train", expand_template(adapter.train_command_template, values), task);
    }
    std::filesystem::remove(task.output);
    out.infer_wall_seconds = run_step("predict", expand_template(adapter.command_template, values), task);
    if (!std::filesystem::exists(task.output)) {
      throw Error("OUTPUT_MISSING", "adapter did not write " + task.output.string());
    }
    out.lines = read_lines(task.output);
    if (out.lines.size() != inputs.size()) {
      throw Error("LINE_MISMATCH", "adapter wrote " + std::to_string(out.lines.size()) + " lines for " +
                                       std::to_string(inputs.size()) + " inputs");
    }
    out.peak_memory_gb = read_peak_memory(task.output);
  } else {
    const auto start = Clock::now();
    if (adapter.kind == AdapterKind::kBuiltinRule) {
      const auto path = rule_table_path(adapter, task.direction);
      const auto table = translit::load_mapping(path);
      if (table.direction() != task.direction) {
        throw Error("TABLE_DIRECTION", path.string() + " is a " + std::string(to_string(table.direction())) +
                                           " table, run needs " + std::string(to_string(task.direction)));
      }
      out.lines.reserve(inputs.size());
      for (const auto& line : inputs) out.lines.push_back(translit::transliterate(line, table));
    } else {
      out.lines = inputs;
    }
    write_lines(task.output, out.lines);
    out.infer_wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  }
  out.infer_ms_per_item =
      inputs.empty() ? 0.0 : out.infer_wall_seconds * 1000.0 / static_cast<double>(inputs.size());
  return out;
}

}  // namespace tfbench::harness
