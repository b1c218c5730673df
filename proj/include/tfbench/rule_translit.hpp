#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "tfbench/direction.hpp"

namespace tfbench::translit {

struct Rule {
  std::string from;  // one or more scalar values
  std::string to;    // may be empty (deletion)
};

inline constexpr std::size_t kBundledTj2FaRules = 70;
inline constexpr std::size_t kBundledFa2TjRules = 47;

// Grapheme substitution table for one direction. Immutable once built;
// rules() is ordered longest source first, insertion order within a length.
class MappingTable {
 public:
  // Throws Error("EMPTY_SOURCE") or Error("DUPLICATE_RULE").
  MappingTable(Direction direction, std::vector<Rule> rules, std::string name = {},
               std::string version = {});

  Direction direction() const { return direction_; }
  const std::string& name() const { return name_; }
  const std::string& version() const { return version_; }
  const std::vector<Rule>& rules() const { return rules_; }
  std::size_t size() const { return rules_.size(); }
  std::size_t max_source_length() const { return max_source_; }
  std::size_t max_target_length() const { return max_target_; }

  // Target for an exact source grapheme, or nullptr.
  const std::u32string* find(std::u32string_view source) const;

 private:
  Direction direction_;
  std::string name_;
  std::string version_;
  std::vector<Rule> rules_;
  std::unordered_map<std::u32string, std::u32string> lookup_;
  std::size_t max_source_ = 0;
  std::size_t max_target_ = 0;
};

// {"direction": "tj2fa", "name": ..., "version": ..., "rules": [{"from": "ғ", "to": "غ"}, ...]}
MappingTable parse_mapping(const nlohmann::json& doc);
MappingTable load_mapping(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const MappingTable& table);

// The reference tables shipped under data/tables/, with their rule counts
// checked (70 for tj2fa, 47 for fa2tj).
std::filesystem::path bundled_table_path(Direction direction);
MappingTable load_bundled_mapping(Direction direction);

// Left-to-right longest match; characters no rule covers are copied.
// The text is not re-normalized.
std::u32string transliterate(std::u32string_view text, const MappingTable& table);
std::string transliterate(std::string_view text, const MappingTable& table);

// Data directory: $TFBENCH_DATA_DIR if set, else the source tree's data/.
std::filesystem::path data_dir();

}  // namespace tfbench::translit
