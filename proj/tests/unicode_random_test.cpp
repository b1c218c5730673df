#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>

#include "tfbench/error.hpp"
#include "tfbench/random.hpp"
#include "tfbench/text_io.hpp"
#include "tfbench/unicode.hpp"
#include "test_util.hpp"

namespace tfbench {
namespace {

// Straight transcription of the published xoshiro256** step with an
// explicit state, used to pin the library generator.
struct RefXoshiro {
  std::array<std::uint64_t, 4> s;
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t next() {
    const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }
};

TEST(SplitMix64, KnownSequence) {
  SplitMix64 sm(1234567);
  const std::uint64_t expected[] = {6457827717110365317ULL, 3203168211198807973ULL, 9817491932198370423ULL,
                                    4593380528125082431ULL, 16408922859458223821ULL};
  for (auto e : expected) EXPECT_EQ(sm.next(), e);
}

TEST(Xoshiro256, ReferenceStepFromState1234) {
  RefXoshiro ref{{1, 2, 3, 4}};
  const std::uint64_t expected[] = {11520ULL, 0ULL, 1509978240ULL, 1215971899390074240ULL,
                                    1216172134540287360ULL, 607988272756665600ULL};
  for (auto e : expected) EXPECT_EQ(ref.next(), e);
}

TEST(Xoshiro256, SeededThroughSplitMix) {
  for (std::uint64_t seed : {0ULL, 42ULL, 0xFFFFFFFFFFFFFFFFULL}) {
    SplitMix64 sm(seed);
    RefXoshiro ref{{sm.next(), sm.next(), sm.next(), sm.next()}};
    Xoshiro256 rng(seed);
    for (int i = 0; i < 100; ++i) ASSERT_EQ(rng(), ref.next());
  }
}

TEST(UniformBelow, StaysInRangeAndCoversIt) {
  Xoshiro256 rng(7);
  std::map<std::uint64_t, int> hist;
  for (int i = 0; i < 60000; ++i) {
    const auto v = uniform_below(rng, 6);
    ASSERT_LT(v, 6u);
    ++hist[v];
  }
  ASSERT_EQ(hist.size(), 6u);
  for (const auto& [v, c] : hist) EXPECT_NEAR(c, 10000, 500) << v;
  EXPECT_EQ(uniform_below(rng, 1), 0u);
}

TEST(UniformUnit, HalfOpenInterval) {
  Xoshiro256 rng(9);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform_unit(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(DeriveSeed, StreamsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(42, s));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_NE(derive_seed(42, 0), derive_seed(43, 0));
  EXPECT_EQ(derive_seed(42, 5), derive_seed(42, 5));
}

TEST(Fnv1a64, KnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xCBF29CE484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xAF63DC4C8601EC8CULL);
}

TEST(Shuffle, PermutesDeterministically) {
  std::vector<int> a(50), b(50);
  std::iota(a.begin(), a.end(), 0);
  std::iota(b.begin(), b.end(), 0);
  Xoshiro256 r1(3), r2(3);
  shuffle(std::span<int>(a), r1);
  shuffle(std::span<int>(b), r2);
  EXPECT_EQ(a, b);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
  std::vector<int> id(50);
  std::iota(id.begin(), id.end(), 0);
  EXPECT_NE(a, id);
}

TEST(Shuffle, AllPermutationsOfThreeAppear) {
  std::map<std::vector<int>, int> counts;
  Xoshiro256 rng(11);
  for (int t = 0; t < 6000; ++t) {
    std::vector<int> v{0, 1, 2};
    shuffle(std::span<int>(v), rng);
    ++counts[v];
  }
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [p, c] : counts) EXPECT_NEAR(c, 1000, 150);
}

TEST(Utf8, RoundTrip) {
  const std::string s = "салом سلام ‌ 𝄞 a";
  EXPECT_EQ(unicode::encode(unicode::decode(s)), s);
  EXPECT_EQ(unicode::decode("ғ").size(), 1u);
  EXPECT_EQ(unicode::decode("𝄞"), std::u32string(1, U'\U0001D11E'));
}

TEST(Utf8, IllFormedBytesBecomeReplacement) {
  const auto d = unicode::decode(std::string("a\xFF" "b\xC3", 4));
  EXPECT_EQ(d, (std::u32string{U'a', U'\uFFFD', U'b', U'\uFFFD'}));
  EXPECT_EQ(unicode::decode("\xED\xA0\x80").front(), U'\uFFFD');  // encoded surrogate
}

TEST(Unicode, Classes) {
  using namespace unicode;
  EXPECT_TRUE(is_whitespace(U' '));
  EXPECT_TRUE(is_whitespace(U'\t'));
  EXPECT_TRUE(is_whitespace(U'\u00A0'));
  EXPECT_TRUE(is_whitespace(U'\u001C'));
  EXPECT_FALSE(is_whitespace(U'\u200C'));
  EXPECT_FALSE(is_whitespace(U'\u200B'));
  EXPECT_TRUE(is_space_separator(U'\u202F'));
  EXPECT_FALSE(is_space_separator(U'\t'));
  EXPECT_TRUE(is_control(U'\u0085'));
  EXPECT_TRUE(is_letter(U'ҷ'));
  EXPECT_TRUE(is_mark(U'\u064B'));
  EXPECT_TRUE(is_number(U'٣'));
  EXPECT_TRUE(is_punctuation(U'،'));
  EXPECT_TRUE(is_symbol(U'$'));
  EXPECT_EQ(script_of(U'ҳ'), Script::kCyrillic);
  EXPECT_EQ(script_of(U'ژ'), Script::kArabic);
  EXPECT_EQ(script_of(U'q'), Script::kLatin);
  EXPECT_EQ(script_of(U'1'), Script::kCommon);
  EXPECT_EQ(script_of(U'\u064B'), Script::kInherited);
  EXPECT_EQ(script_of(U'α'), Script::kOther);
  EXPECT_TRUE(in_cyrillic_block(U'ӯ'));
  EXPECT_TRUE(in_arabic_block(U'ی'));
  EXPECT_TRUE(in_arabic_block(U'ﮊ'));
  EXPECT_FALSE(in_arabic_block(U'ж'));
  EXPECT_FALSE(in_cyrillic_block(U'ی'));
}

TEST(Unicode, CaseAndNormalization) {
  using namespace unicode;
  EXPECT_EQ(encode(to_lower(decode("ҶАҲОН"))), "ҷаҳон");
  EXPECT_EQ(encode(to_upper(decode("ғӯ"))), "ҒӮ");
  const std::u32string decomposed{U'и', U'\u0306'};
  EXPECT_FALSE(is_nfc(decomposed));
  EXPECT_EQ(nfc(decomposed), std::u32string(1, U'й'));
  EXPECT_TRUE(is_nfc(nfc(decomposed)));
}

TEST(Unicode, SplitJoinStrip) {
  using namespace unicode;
  const auto parts = split_whitespace(U"  a \t b\u00A0c  ");
  ASSERT_EQ(parts.size(), 3u);
  EXPECT_EQ(join(parts, U"|"), U"a|b|c");
  EXPECT_TRUE(split_whitespace(U" \t ").empty());
  EXPECT_EQ(rstrip(U"ab \n\t"), U"ab");
  EXPECT_EQ(rstrip(U"   "), U"");
}

TEST(TextIo, LinesAndAtomicWrite) {
  testing::TempDir dir;
  const auto p = dir / "sub/x.txt";
  write_lines(p, {"a", "", "b"});
  EXPECT_EQ(read_file(p), "a\n\nb\n");
  EXPECT_EQ(read_lines(p), (std::vector<std::string>{"a", "", "b"}));
  EXPECT_EQ(split_lines("x\r\ny"), (std::vector<std::string>{"x", "y"}));
  EXPECT_TRUE(split_lines("").empty());
  EXPECT_EQ(split_lines("\n"), (std::vector<std::string>{""}));
  EXPECT_THROW(read_file(dir / "missing"), Error);
}

TEST(TextIo, Sha256) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace
}  // namespace tfbench
