// BLEU tokenizers, character-for-character equivalents of the reference
// scorer's regular-expression pipelines. Each regex pass there is a
// left-to-right, non-overlapping substitution; the loops below reproduce
// exactly that matching order.
#include "tfbench/metrics.hpp"
#include "tfbench/unicode.hpp"

namespace tfbench::metrics {
namespace {

bool is_ascii_digit(char32_t c) { return c >= U'0' && c <= U'9'; }

std::u32string squeeze_spaces(std::u32string_view text) {
  return unicode::join(unicode::split_whitespace(text), U" ");
}

void replace_all(std::u32string& s, std::u32string_view from, std::u32string_view to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::u32string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
}

// Pattern "(A)(B)" rewritten with `before` / `between` / `after` padding.
template <typename First, typename Second>
std::u32string pair_pass(std::u32string_view in, First first, Second second,
                         std::u32string_view before, std::u32string_view between,
                         std::u32string_view after) {
  std::u32string out;
  out.reserve(in.size() + in.size() / 2);
  std::size_t i = 0;
  while (i < in.size()) {
    if (i + 1 < in.size() && first(in[i]) && second(in[i + 1])) {
      out += before;
      out.push_back(in[i]);
      out += between;
      out.push_back(in[i + 1]);
      out += after;
      i += 2;
    } else {
      out.push_back(in[i]);
      ++i;
    }
  }
  return out;
}

}  // namespace

std::u32string tokenize_13a(std::u32string_view line) {
  std::u32string s(line);
  replace_all(s, U"<skipped>", U"");
  replace_all(s, U"-\n", U"");
  replace_all(s, U"\n", U" ");
  if (s.find(U'&') != std::u32string::npos) {
    replace_all(s, U"&quot;", U"\"");
    replace_all(s, U"&amp;", U"&");
    replace_all(s, U"&lt;", U"<");
    replace_all(s, U"&gt;", U">");
  }
  s = U" " + s + U" ";

  // ([\{-\~\[-\` -\&\(-\+\:-\@\/]) -> " \1 "
  std::u32string padded;
  padded.reserve(s.size() * 2);
  for (char32_t c : s) {
    const bool hit = (c >= 0x7B && c <= 0x7E) || (c >= 0x5B && c <= 0x60) ||
                     (c >= 0x20 && c <= 0x26) || (c >= 0x28 && c <= 0x2B) ||
                     (c >= 0x3A && c <= 0x40) || c == U'/';
    if (hit) {
      padded.push_back(U' ');
      padded.push_back(c);
      padded.push_back(U' ');
    } else {
      padded.push_back(c);
    }
  }
  const auto not_digit = [](char32_t c) { return !is_ascii_digit(c); };
  const auto period_comma = [](char32_t c) { return c == U'.' || c == U','; };
  s = pair_pass(padded, not_digit, period_comma, U"", U" ", U" ");
  s = pair_pass(s, period_comma, not_digit, U" ", U" ", U"");
  s = pair_pass(s, is_ascii_digit, [](char32_t c) { return c == U'-'; }, U"", U" ", U" ");
  return squeeze_spaces(s);
}

std::u32string tokenize_international(std::u32string_view line) {
  const auto not_number = [](char32_t c) { return !unicode::is_number(c); };
  const auto punct = [](char32_t c) { return unicode::is_punctuation(c); };
  // (\P{N})(\p{P}) -> "\1 \2 "
  std::u32string s = pair_pass(line, not_number, punct, U"", U" ", U" ");
  // (\p{P})(\P{N}) -> " \1 \2"
  s = pair_pass(s, punct, not_number, U" ", U" ", U"");
  // (\p{S}) -> " \1 "
  std::u32string out;
  out.reserve(s.size() + 8);
  for (char32_t c : s) {
    if (unicode::is_symbol(c)) {
      out.push_back(U' ');
      out.push_back(c);
      out.push_back(U' ');
    } else {
      out.push_back(c);
    }
  }
  return squeeze_spaces(out);
}

}  // namespace tfbench::metrics
