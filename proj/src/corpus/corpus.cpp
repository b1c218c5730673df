#include <string>
#include <unordered_set>

#include "tfbench/corpus.hpp"
#include "tfbench/error.hpp"
#include "tfbench/text_io.hpp"
#include "tfbench/unicode.hpp"

namespace tfbench::corpus {
namespace {

bool valid_label(std::string_view label) {
  if (label.empty()) return false;
  for (char c : label) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

std::optional<DropReason> check_side(std::string_view text, std::size_t max_chars,
                                     bool& too_long) {
  const std::u32string chars = unicode::decode(text);
  if (chars.empty()) return DropReason::kEmptySide;
  std::optional<DropReason> verdict;
  for (char32_t c : chars) {
    if (!unicode::is_letter(c) && !unicode::is_mark(c)) continue;
    const auto script = unicode::script_of(c);
    if (script == unicode::Script::kLatin) return DropReason::kLatinContent;
    if (script == unicode::Script::kOther) verdict = DropReason::kForeignScript;
  }
  if (chars.size() > max_chars) too_long = true;
  return verdict;
}

}  // namespace

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::kEmptySide: return "empty_side";
    case DropReason::kLatinContent: return "latin_content";
    case DropReason::kForeignScript: return "foreign_script";
    case DropReason::kLengthExceeded: return "length_exceeded";
  }
  return "unknown";
}

std::optional<DropReason> filter_pair(const ParallelPair& pair, const FilterOptions& options) {
  if (pair.tajik.empty() || pair.farsi.empty()) return DropReason::kEmptySide;
  bool too_long = false;
  const auto tajik = check_side(pair.tajik, options.max_chars, too_long);
  const auto farsi = check_side(pair.farsi, options.max_chars, too_long);
  for (DropReason reason : {DropReason::kEmptySide, DropReason::kLatinContent,
                            DropReason::kForeignScript}) {
    if (tajik == reason || farsi == reason) return reason;
  }
  if (too_long) return DropReason::kLengthExceeded;
  return std::nullopt;
}

Corpus dedup(const Corpus& corpus) {
  Corpus out;
  out.provenance = corpus.provenance;
  std::unordered_set<std::string> seen;
  seen.reserve(corpus.size());
  for (const auto& pair : corpus.pairs) {
    std::string key = pair.tajik;
    key.push_back('\0');
    key += pair.farsi;
    if (seen.insert(std::move(key)).second) out.pairs.push_back(pair);
  }
  return out;
}

PrepareReport prepare(const Corpus& raw, const FilterOptions& options) {
  PrepareReport report;
  report.input_pairs = raw.size();
  Corpus kept;
  kept.provenance = raw.provenance;
  for (const auto& pair : raw.pairs) {
    ParallelPair clean{normalize_text(pair.tajik), normalize_text(pair.farsi), pair.category};
    if (const auto reason = filter_pair(clean, options)) {
      ++report.dropped[std::string(to_string(*reason))];
      continue;
    }
    kept.pairs.push_back(std::move(clean));
  }
  report.corpus = dedup(kept);
  report.duplicates_removed = kept.size() - report.corpus.size();
  return report;
}

Corpus parse_corpus(std::string_view jsonl, std::string provenance) {
  Corpus corpus;
  corpus.provenance = std::move(provenance);
  std::size_t line_no = 0;
  for (const auto& line : split_lines(jsonl)) {
    ++line_no;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = corpus.provenance + ":" + std::to_string(line_no);
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error("CORPUS_PARSE", where + ": " + e.what());
    }
    if (!row.is_object()) throw Error("CORPUS_PARSE", where + ": expected a JSON object");
    ParallelPair pair;
    try {
      pair.tajik = row.at("tajik").get<std::string>();
      pair.farsi = row.at("farsi").get<std::string>();
      pair.category = row.at("category").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error("CORPUS_PARSE", where + ": " + e.what());
    }
    if (!valid_label(pair.category)) {
      throw Error("CORPUS_PARSE", where + ": invalid category label '" + pair.category + "'");
    }
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_file(path), path.string());
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& pair : corpus.pairs) {
    nlohmann::ordered_json row;
    row["tajik"] = pair.tajik;
    row["farsi"] = pair.farsi;
    row["category"] = pair.category;
    out += row.dump();
    out += '\n';
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_corpus(corpus));
}

}  // namespace tfbench::corpus
