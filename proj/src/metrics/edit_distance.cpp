#include "tfbench/error.hpp"
#include "tfbench/metrics.hpp"
#include "tfbench/unicode.hpp"

namespace tfbench::metrics {

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  return edit_distance<char32_t>(std::span<const char32_t>(a.data(), a.size()),
                                 std::span<const char32_t>(b.data(), b.size()));
}

std::size_t levenshtein(std::string_view a_utf8, std::string_view b_utf8) {
  return levenshtein(unicode::decode(a_utf8), unicode::decode(b_utf8));
}

double cer(std::string_view hypothesis, std::string_view reference) {
  const auto ref = unicode::decode(reference);
  if (ref.empty()) throw Error("EMPTY_REFERENCE", "CER is undefined for an empty reference");
  return static_cast<double>(levenshtein(unicode::decode(hypothesis), ref)) /
         static_cast<double>(ref.size());
}

double wer(std::string_view hypothesis, std::string_view reference) {
  const auto ref = unicode::split_whitespace(unicode::decode(reference));
  if (ref.empty()) throw Error("EMPTY_REFERENCE", "WER is undefined for a reference without words");
  const auto hyp = unicode::split_whitespace(unicode::decode(hypothesis));
  return static_cast<double>(edit_distance<std::u32string>(hyp, ref)) /
         static_cast<double>(ref.size());
}

}  // namespace tfbench::metrics
