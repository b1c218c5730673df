#include "tfbench/rule_translit.hpp"

#include <algorithm>
#include <cstdlib>

#include "tfbench/error.hpp"
#include "tfbench/text_io.hpp"
#include "tfbench/unicode.hpp"

namespace tfbench::translit {

MappingTable::MappingTable(Direction direction, std::vector<Rule> rules, std::string name,
                           std::string version)
    : direction_(direction), name_(std::move(name)), version_(std::move(version)) {
  std::vector<std::pair<std::u32string, std::size_t>> keyed;
  keyed.reserve(rules.size());
  for (std::size_t i = 0; i < rules.size(); ++i) {
    std::u32string from = unicode::decode(rules[i].from);
    std::u32string to = unicode::decode(rules[i].to);
    if (from.empty()) {
      throw Error("EMPTY_SOURCE", "rule " + std::to_string(i) + " has an empty source grapheme");
    }
    if (!lookup_.emplace(from, to).second) {
      throw Error("DUPLICATE_RULE", "duplicate source grapheme '" + rules[i].from + "'");
    }
    max_source_ = std::max(max_source_, from.size());
    max_target_ = std::max(max_target_, to.size());
    keyed.emplace_back(std::move(from), i);
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    return a.first.size() > b.first.size();
  });
  rules_.reserve(rules.size());
  for (const auto& [from, index] : keyed) rules_.push_back(std::move(rules[index]));
}

const std::u32string* MappingTable::find(std::u32string_view source) const {
  const auto it = lookup_.find(std::u32string(source));
  return it == lookup_.end() ? nullptr : &it->second;
}

MappingTable parse_mapping(const nlohmann::json& doc) {
  try {
    const Direction direction = parse_direction(doc.at("direction").get<std::string>());
    std::vector<Rule> rules;
    for (const auto& rule : doc.at("rules")) {
      rules.push_back({rule.at("from").get<std::string>(), rule.at("to").get<std::string>()});
    }
    return MappingTable(direction, std::move(rules), doc.value("name", std::string()),
                        doc.value("version", std::string()));
  } catch (const nlohmann::json::exception& e) {
    throw Error("MAPPING_PARSE", std::string("malformed mapping table: ") + e.what());
  }
}

MappingTable load_mapping(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("MAPPING_PARSE", path.string() + ": " + e.what());
  }
  return parse_mapping(doc);
}

nlohmann::ordered_json to_json(const MappingTable& table) {
  nlohmann::ordered_json doc;
  doc["direction"] = to_string(table.direction());
  doc["name"] = table.name();
  doc["version"] = table.version();
  doc["rules"] = nlohmann::ordered_json::array();
  for (const auto& rule : table.rules()) doc["rules"].push_back({{"from", rule.from}, {"to", rule.to}});
  return doc;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("TFBENCH_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return TFBENCH_DATA_DIR;
}

std::filesystem::path bundled_table_path(Direction direction) {
  return data_dir() / "tables" / (std::string(to_string(direction)) + ".json");
}

MappingTable load_bundled_mapping(Direction direction) {
  MappingTable table = load_mapping(bundled_table_path(direction));
  const std::size_t expected =
      direction == Direction::kTj2Fa ? kBundledTj2FaRules : kBundledFa2TjRules;
  if (table.direction() != direction || table.size() != expected) {
    throw Error("MAPPING_PARSE", "bundled " + std::string(to_string(direction)) + " table has " +
                                     std::to_string(table.size()) + " rules, expected " +
                                     std::to_string(expected));
  }
  return table;
}

std::u32string transliterate(std::u32string_view text, const MappingTable& table) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t longest = std::min(table.max_source_length(), text.size() - pos);
    bool matched = false;
    for (std::size_t len = longest; len > 0; --len) {
      if (const std::u32string* target = table.find(text.substr(pos, len))) {
        out += *target;
        pos += len;
        matched = true;
        break;
      }
    }
    if (!matched) out.push_back(text[pos++]);
  }
  return out;
}

std::string transliterate(std::string_view text, const MappingTable& table) {
  return unicode::encode(transliterate(unicode::decode(text), table));
}

}  // namespace tfbench::translit
