#include <string>

#include "tfbench/corpus.hpp"
#include "tfbench/unicode.hpp"

namespace tfbench::corpus {
namespace {

bool is_whitespace_control(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || c == 0x85;
}

}  // namespace

std::string normalize_text(std::string_view raw) {
  // Controls go before composition: dropping one between a base and a
  // combining mark could otherwise leave a non-NFC result.
  std::u32string mapped;
  mapped.reserve(raw.size());
  for (char32_t c : unicode::decode(raw)) {
    if (is_whitespace_control(c) || unicode::is_space_separator(c)) {
      mapped.push_back(U' ');
    } else if (!unicode::is_control(c)) {
      mapped.push_back(c);
    }
  }
  const std::u32string composed = unicode::nfc(mapped);

  std::u32string out;
  out.reserve(composed.size());
  for (char32_t c : composed) {
    if (c == U' ' && (out.empty() || out.back() == U' ')) continue;
    out.push_back(c);
  }
  if (!out.empty() && out.back() == U' ') out.pop_back();
  return unicode::encode(out);
}

}  // namespace tfbench::corpus
