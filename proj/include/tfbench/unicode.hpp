#pragma once

#include <string>
#include <string_view>
#include <vector>

// Thin layer over ICU. All text crosses module boundaries as UTF-8
// std::string; algorithms that index by character work on std::u32string
// (one element per Unicode scalar value).
namespace tfbench::unicode {

// Ill-formed sequences decode to U+FFFD.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);
std::string encode(char32_t c);

std::u32string nfc(std::u32string_view text);
bool is_nfc(std::u32string_view text);

// Full Unicode lower-casing (root locale), the same mapping str.lower() uses.
std::u32string to_lower(std::u32string_view text);
std::u32string to_upper(std::u32string_view text);

// The characters Python's str.isspace() accepts. Tokenizers split on these.
bool is_whitespace(char32_t c);
// General category Zs.
bool is_space_separator(char32_t c);
// General category Cc (C0, DEL and C1).
bool is_control(char32_t c);

bool is_letter(char32_t c);  // L*
bool is_mark(char32_t c);    // M*
bool is_number(char32_t c);  // N*
bool is_punctuation(char32_t c);  // P*
bool is_symbol(char32_t c);  // S*

enum class Script { kCommon, kInherited, kLatin, kCyrillic, kArabic, kOther };
Script script_of(char32_t c);

// Block membership, used for the per-string "in-script character" counts.
bool in_cyrillic_block(char32_t c);
bool in_arabic_block(char32_t c);

// Maximal runs of non-whitespace characters (Python str.split() semantics).
std::vector<std::u32string> split_whitespace(std::u32string_view text);
std::u32string join(const std::vector<std::u32string>& parts, std::u32string_view separator);

// Strips trailing is_whitespace() characters (str.rstrip()).
std::u32string_view rstrip(std::u32string_view text);

}  // namespace tfbench::unicode
