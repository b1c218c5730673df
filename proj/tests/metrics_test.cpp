#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>

#include "tfbench/error.hpp"
#include "tfbench/metrics.hpp"
#include "tfbench/random.hpp"
#include "tfbench/text_io.hpp"
#include "tfbench/unicode.hpp"
#include "test_util.hpp"

namespace tfbench::metrics {
namespace {

// Levenshtein straight from its recursive definition, memoized on suffix
// positions.
std::size_t oracle_distance(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<long>> memo(a.size() + 1, std::vector<long>(b.size() + 1, -1));
  std::function<std::size_t(std::size_t, std::size_t)> d = [&](std::size_t i, std::size_t j) -> std::size_t {
    if (i == a.size()) return b.size() - j;
    if (j == b.size()) return a.size() - i;
    long& m = memo[i][j];
    if (m >= 0) return static_cast<std::size_t>(m);
    const std::size_t best = std::min({d(i + 1, j) + 1, d(i, j + 1) + 1, d(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1)});
    m = static_cast<long>(best);
    return best;
  };
  return d(0, 0);
}

std::vector<std::u32string> all_strings(std::size_t max_len, const std::u32string& alphabet) {
  std::vector<std::u32string> out{U""};
  std::vector<std::u32string> frontier{U""};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::u32string> next;
    for (const auto& s : frontier) {
      for (char32_t c : alphabet) next.push_back(s + c);
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

HypothesisSet one(std::string h, std::string r, std::string c = "words") {
  HypothesisSet s;
  s.items.push_back({std::move(h), std::move(r), std::move(c)});
  return s;
}

HypothesisSet golden_set() {
  HypothesisSet set;
  for (const auto& line : read_lines(testing::data_path("golden/golden30.jsonl"))) {
    const auto j = nlohmann::json::parse(line);
    set.items.push_back({j.at("hyp"), j.at("ref"), j.at("category")});
  }
  return set;
}

nlohmann::json golden_scores() {
  return nlohmann::json::parse(read_file(testing::data_path("golden/sacrebleu_scores.json")));
}

std::string tok13a(const std::string& s) { return unicode::encode(tokenize_13a(unicode::decode(s))); }
std::string tokintl(const std::string& s) { return unicode::encode(tokenize_international(unicode::decode(s))); }

// ---- edit distance ------------------------------------------------------

TEST(Levenshtein, Examples) {
  EXPECT_EQ(levenshtein(std::string_view(""), std::string_view("abc")), 3u);
  EXPECT_EQ(levenshtein(std::string_view("kitten"), std::string_view("sitting")), 3u);
  EXPECT_EQ(levenshtein(std::string_view("x"), std::string_view("x")), 0u);
  EXPECT_EQ(levenshtein(std::string_view("ҷаҳон"), std::string_view("ҷахон")), 1u);
}

TEST(Levenshtein, MatchesRecursiveOracleUpToLengthFour) {
  const auto strings = all_strings(4, U"abc");
  for (const auto& a : strings) {
    for (const auto& b : strings) ASSERT_EQ(levenshtein(a, b), oracle_distance(a, b)) << unicode::encode(a) << "/" << unicode::encode(b);
  }
}

TEST(Levenshtein, MetricAxiomsOnRandomStrings) {
  Xoshiro256 rng(1);
  const std::u32string alpha = U"abcд";
  const auto rnd = [&] {
    std::u32string s;
    const std::size_t n = uniform_below(rng, 9);
    for (std::size_t i = 0; i < n; ++i) s.push_back(alpha[uniform_below(rng, alpha.size())]);
    return s;
  };
  for (int i = 0; i < 3000; ++i) {
    const auto a = rnd(), b = rnd(), c = rnd();
    ASSERT_EQ(levenshtein(a, b), levenshtein(b, a));
    ASSERT_EQ(levenshtein(a, b) == 0, a == b);
    ASSERT_LE(levenshtein(a, c), levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST(Cer, Examples) {
  EXPECT_DOUBLE_EQ(cer("abc", "abc"), 0.0);
  EXPECT_DOUBLE_EQ(cer("abd", "abc"), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(cer("", "abc"), 1.0);
  EXPECT_DOUBLE_EQ(cer("abcdef", "ab"), 2.0);
  EXPECT_THROW(cer("a", ""), Error);
}

TEST(Cer, ZeroIffEqualAndBounded) {
  Xoshiro256 rng(4);
  for (int i = 0; i < 2000; ++i) {
    std::string h, r;
    for (std::size_t k = uniform_below(rng, 6); k > 0; --k) h.push_back("ab"[uniform_below(rng, 2)]);
    for (std::size_t k = 1 + uniform_below(rng, 6); k > 0; --k) r.push_back("ab"[uniform_below(rng, 2)]);
    const double v = cer(h, r);
    ASSERT_EQ(v == 0.0, h == r);
    ASSERT_LE(v, static_cast<double>(std::max(h.size(), r.size())) / static_cast<double>(r.size()));
  }
}

TEST(Wer, Examples) {
  EXPECT_DOUBLE_EQ(wer("a b", "a b"), 0.0);
  EXPECT_DOUBLE_EQ(wer("a c", "a b"), 0.5);
  EXPECT_DOUBLE_EQ(wer("a b c", "a b"), 0.5);
  EXPECT_DOUBLE_EQ(wer("  a   b ", "a b"), 0.0);
  EXPECT_THROW(wer("a", " "), Error);
}

TEST(Accuracy, Examples) {
  HypothesisSet s;
  s.items = {{"a", "a", ""}, {"b", "b", ""}};
  EXPECT_DOUBLE_EQ(exact_match_accuracy(s), 1.0);
  s.items = {{"a", "b", ""}, {"b", "a", ""}};
  EXPECT_DOUBLE_EQ(exact_match_accuracy(s), 0.0);
  s.items = {{"a", "a", ""}, {"b", "c", ""}, {"d", "e", ""}, {"f", "g", ""}};
  EXPECT_DOUBLE_EQ(exact_match_accuracy(s), 0.25);
  EXPECT_THROW(exact_match_accuracy(HypothesisSet{}), Error);
}

// ---- tokenizers ---------------------------------------------------------

TEST(Tokenizer13a, ReferenceOutputs) {
  EXPECT_EQ(tok13a("Hello, world!"), "Hello , world !");
  EXPECT_EQ(tok13a("U.S. 1,000.5 km-long"), "U . S . 1,000.5 km-long");
  EXPECT_EQ(tok13a("салом, дунё!"), "салом , дунё !");
  EXPECT_EQ(tok13a("کتاب‌ها را خواندم؟"), "کتاب‌ها را خواندم؟");
  EXPECT_EQ(tok13a("«Шоҳнома» (Фирдавсӣ)"), "«Шоҳнома» ( Фирдавсӣ )");
  EXPECT_EQ(tok13a("a-b 3-4 x.y"), "a-b 3 - 4 x . y");
  EXPECT_EQ(tok13a("&quot;q&amp;&lt;"), "\" q & <");
  EXPECT_EQ(tok13a("№5 $20 +/- 7%"), "№5 $ 20 + / - 7 %");
}

TEST(TokenizerInternational, ReferenceOutputs) {
  EXPECT_EQ(tokintl("Hello, world!"), "Hello , world !");
  EXPECT_EQ(tokintl("U.S. 1,000.5 km-long"), "U . S . 1,000.5 km - long");
  EXPECT_EQ(tokintl("کتاب‌ها را خواندم؟"), "کتاب‌ها را خواندم ؟");
  EXPECT_EQ(tokintl("«Шоҳнома» (Фирдавсӣ)"), "« Шоҳнома » ( Фирдавсӣ )");
  EXPECT_EQ(tokintl("a-b 3-4 x.y"), "a - b 3-4 x . y");
  EXPECT_EQ(tokintl("&quot;q&amp;&lt;"), "& quot ; q & amp ; & lt ;");
  EXPECT_EQ(tokintl("٣٫١٤ تومان"), "٣٫١٤ تومان");
  EXPECT_EQ(tokintl("№5 $20 +/- 7%"), "№ 5 $ 20 + / - 7%");
}

// ---- corpus metrics -------------------------------------------------------

TEST(Degenerate, IdenticalCorpusScoresPerfectly) {
  HypothesisSet s = golden_set();
  for (auto& item : s.items) item.hypothesis = item.reference;
  const auto r = evaluate(s);
  EXPECT_EQ(r.overall.chrf_pp, 100.0);
  EXPECT_EQ(r.overall.bleu, 100.0);
  EXPECT_EQ(r.overall.ter, 0.0);
  EXPECT_EQ(r.overall.cer, 0.0);
  EXPECT_EQ(r.overall.wer, 0.0);
  EXPECT_EQ(r.overall.accuracy, 1.0);
  for (double v : r.sentence_chrf) EXPECT_EQ(v, 100.0);
}

TEST(Degenerate, DisjointAlphabets) {
  EXPECT_EQ(chrf_pp(one("aaaa", "bbbb")).corpus, 0.0);
  EXPECT_LT(bleu(one("aaaa bbbb cccc dddd", "eeee ffff gggg hhhh")), 1.0);
  EXPECT_EQ(ter(one("a b", "c d")), 100.0);
}

TEST(Ter, HandExamples) {
  EXPECT_DOUBLE_EQ(ter(one("b a", "a b")), 50.0);
  EXPECT_DOUBLE_EQ(ter(one("", "a b c")), 100.0);
  EXPECT_DOUBLE_EQ(ter(one("a b c", "")), 100.0);
  EXPECT_DOUBLE_EQ(ter(one("", "")), 0.0);
  EXPECT_DOUBLE_EQ(ter(one("a b c d", "a b")), 100.0);
  EXPECT_DOUBLE_EQ(ter(one("a b c d e", "a")), 400.0);
}

TEST(Ter, ReferenceScorerEdgeCases) {
  EXPECT_DOUBLE_EQ(ter(one("c d e a b", "a b c d e")), 20.0);
  EXPECT_DOUBLE_EQ(ter(one("x y z a b c d e f g h", "a b c d e f g h x y z")), 100.0 / 11.0);
  EXPECT_DOUBLE_EQ(ter(one("A B", "a b")), 0.0);
  MetricConfig cs;
  cs.ter_case_sensitive = true;
  EXPECT_DOUBLE_EQ(ter(one("A B", "a b"), cs), 100.0);
  std::string h, r;
  for (int i = 0; i < 60; ++i) h += (i ? " w" : "w") + std::to_string(i % 7);
  for (int i = 0; i < 80; ++i) r += (i ? " w" : "w") + std::to_string((i * 3) % 7);
  EXPECT_DOUBLE_EQ(ter(one(h, r)), 68.75);
}

TEST(Ter, ShiftsNeverIncreaseEdits) {
  Xoshiro256 rng(12);
  const std::vector<std::u32string> vocab{U"a", U"b", U"c", U"d", U"e"};
  for (int i = 0; i < 1500; ++i) {
    std::vector<std::u32string> h, r;
    for (std::size_t k = uniform_below(rng, 14); k > 0; --k) h.push_back(vocab[uniform_below(rng, vocab.size())]);
    for (std::size_t k = uniform_below(rng, 14); k > 0; --k) r.push_back(vocab[uniform_below(rng, vocab.size())]);
    const auto with = ter_edits(h, r, true);
    const auto without = ter_edits(h, r, false);
    ASSERT_LE(with.edits, without.edits);
    ASSERT_EQ(with.ref_words, r.size());
    ASSERT_EQ(without.edits, edit_distance<std::u32string>(h, r));
  }
}

TEST(Chrf, ReferenceScorerEdgeCases) {
  EXPECT_DOUBLE_EQ(chrf_pp(one("b a", "a b")).corpus, 50.0);
  EXPECT_NEAR(chrf_pp(one("c d e a b", "a b c d e")).corpus, 54.761904761904766, 1e-9);
  EXPECT_NEAR(chrf_pp(one("x y z a b c d e f g h", "a b c d e f g h x y z")).corpus, 78.42757936507938, 1e-9);
  EXPECT_EQ(chrf_pp(one("", "")).corpus, 0.0);
}

TEST(Chrf, BetaDirectionConvention) {
  // recall is weighted higher with beta = 2, so dropping reference content
  // costs more than adding extra hypothesis content
  const std::string short_text = "салом дунё зебо";
  const std::string long_text = "салом дунё зебо ва бузург аст";
  EXPECT_LT(chrf_pp(one(short_text, long_text)).corpus, chrf_pp(one(long_text, short_text)).corpus);
  MetricConfig b1;
  b1.beta = 1;
  EXPECT_NEAR(chrf_pp(one(short_text, long_text), b1).corpus, chrf_pp(one(long_text, short_text), b1).corpus, 1e-9);
}

TEST(Bleu, ReferenceScorerEdgeCases) {
  EXPECT_NEAR(bleu(one("c d e a b", "a b c d e")), 49.99999999999999, 1e-9);
  EXPECT_NEAR(bleu(one("x y z a b c d e f g h", "a b c d e f g h x y z")), 81.32882808488928, 1e-9);
  EXPECT_EQ(bleu(one("", "a")), 0.0);
  // no 4-grams at all: the reference scorer reports 0 even for an exact match
  EXPECT_EQ(bleu(one("салом", "салом")), 0.0);
}

TEST(Golden, MatchesReferenceScorer) {
  const auto set = golden_set();
  const auto g = golden_scores();
  ASSERT_EQ(set.size(), 30u);
  MetricConfig cfg;
  const auto c = chrf_pp(set, cfg);
  EXPECT_NEAR(c.corpus, g.at("chrf_pp").get<double>(), 1e-9);
  for (std::size_t i = 0; i < set.size(); ++i) {
    EXPECT_NEAR(c.sentence[i], g.at("sentence_chrf_pp").at(i).get<double>(), 1e-9) << i;
    EXPECT_NEAR(sentence_chrf_pp(set.items[i].hypothesis, set.items[i].reference), c.sentence[i], 1e-12);
    EXPECT_NEAR(ter(one(set.items[i].hypothesis, set.items[i].reference)),
                g.at("sentence_ter_default").at(i).get<double>(), 1e-9)
        << i;
  }
  EXPECT_NEAR(bleu(set, cfg), g.at("bleu_intl").get<double>(), 1e-9);
  EXPECT_NEAR(ter(set, cfg), g.at("ter_default").get<double>(), 1e-9);
  cfg.bleu_tokenizer = BleuTokenizer::kThirteenA;
  EXPECT_NEAR(bleu(set, cfg), g.at("bleu_13a").get<double>(), 1e-9);
  cfg.ter_case_sensitive = true;
  EXPECT_NEAR(ter(set, cfg), g.at("ter_case_sensitive").get<double>(), 1e-9);
}

TEST(CorpusMetrics, PermutationInvariant) {
  auto set = golden_set();
  const double c0 = chrf_pp(set).corpus, b0 = bleu(set), t0 = ter(set);
  Xoshiro256 rng(6);
  for (int i = 0; i < 5; ++i) {
    shuffle(std::span<HypothesisItem>(set.items), rng);
    EXPECT_DOUBLE_EQ(chrf_pp(set).corpus, c0);
    EXPECT_DOUBLE_EQ(bleu(set), b0);
    EXPECT_DOUBLE_EQ(ter(set), t0);
  }
}

TEST(CorpusMetrics, EmptySetIsAnError) {
  EXPECT_THROW(chrf_pp(HypothesisSet{}), Error);
  EXPECT_THROW(bleu(HypothesisSet{}), Error);
  EXPECT_THROW(ter(HypothesisSet{}), Error);
  EXPECT_THROW(evaluate(HypothesisSet{}), Error);
}

TEST(ItemStatistics, SubsetScoresEqualRecomputation) {
  const auto set = golden_set();
  for (auto kind : {MetricKind::kChrfPP, MetricKind::kBleu, MetricKind::kTer, MetricKind::kCer, MetricKind::kWer,
                    MetricKind::kAccuracy}) {
    const auto stats = statistics_for(kind, set, {});
    ASSERT_EQ(stats.items(), set.size());
    std::vector<std::size_t> idx{3, 3, 7, 0, 29, 12};
    HypothesisSet sub;
    for (auto i : idx) sub.items.push_back(set.items[i]);
    const auto sub_stats = statistics_for(kind, sub, {});
    EXPECT_DOUBLE_EQ(stats.score(idx), sub_stats.corpus_score()) << to_string(kind);
    EXPECT_EQ(parse_metric_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_metric_kind("rouge"), Error);
}

TEST(Evaluate, SingleIdenticalPair) {
  const auto r = evaluate(one("салом дунё зебо ва бузург", "салом дунё зебо ва бузург"));
  EXPECT_EQ(r.overall.chrf_pp, 100.0);
  EXPECT_EQ(r.overall.bleu, 100.0);
  EXPECT_EQ(r.overall.ter, 0.0);
  EXPECT_EQ(r.overall.cer, 0.0);
  EXPECT_EQ(r.overall.wer, 0.0);
  EXPECT_EQ(r.overall.accuracy, 1.0);
  EXPECT_EQ(r.overall.items, 1u);
  ASSERT_EQ(r.sentence_chrf.size(), 1u);
}

TEST(Evaluate, PerCategoryBreakdown) {
  const auto set = golden_set();
  const auto r = evaluate(set);
  std::set<std::string> labels;
  for (const auto& i : set.items) labels.insert(i.category);
  ASSERT_EQ(r.per_category.size(), labels.size());
  std::size_t total = 0;
  for (const auto& [label, s] : r.per_category) {
    EXPECT_TRUE(labels.count(label));
    total += s.items;
    HypothesisSet sub;
    for (const auto& i : set.items) {
      if (i.category == label) sub.items.push_back(i);
    }
    EXPECT_DOUBLE_EQ(s.chrf_pp, chrf_pp(sub).corpus);
    EXPECT_DOUBLE_EQ(s.ter, ter(sub));
  }
  EXPECT_EQ(total, set.size());
  ASSERT_EQ(r.sentence_chrf.size(), set.size());

  HypothesisSet two;
  two.items = {{"а", "а", "x"}, {"б", "в", "y"}};
  const auto r2 = evaluate(two);
  ASSERT_EQ(r2.per_category.size(), 2u);
  EXPECT_EQ(r2.per_category.at("x").accuracy, 1.0);
  EXPECT_EQ(r2.per_category.at("y").accuracy, 0.0);
  EXPECT_EQ(r2.overall.accuracy, 0.5);
}

TEST(Evaluate, PooledCerAndWer) {
  HypothesisSet s;
  s.items = {{"ab", "abcd", ""}, {"x", "y", ""}};
  const auto r = evaluate(s);
  EXPECT_DOUBLE_EQ(r.overall.cer, 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(r.overall.wer, 2.0 / 2.0);
}

TEST(Evaluate, EmptyReferencesListEveryItem) {
  HypothesisSet s;
  s.items = {{"a", "", "x"}, {"b", "b", "x"}, {"c", "", "y"}};
  try {
    evaluate(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "EMPTY_REFERENCE");
    const std::string msg = e.what();
    EXPECT_NE(msg.find("item 1"), std::string::npos);
    EXPECT_NE(msg.find("item 3"), std::string::npos);
    EXPECT_EQ(msg.find("item 2"), std::string::npos);
  }
}

TEST(Evaluate, JsonRoundTrip) {
  const auto r = evaluate(golden_set());
  const auto j = nlohmann::json::parse(to_json(r).dump());
  EXPECT_EQ(metric_report_from_json(j), r);
  EXPECT_TRUE(j.contains("chrf_pp"));
  EXPECT_TRUE(j.contains("per_category"));
  EXPECT_TRUE(j.contains("sentence_chrf"));
}

TEST(MetricConfig, ValidationAndJson) {
  MetricConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.char_ngram_order, 6);
  EXPECT_EQ(c.word_ngram_order, 2);
  EXPECT_EQ(c.beta, 2.0);
  EXPECT_EQ(c.bleu_max_order, 4);
  EXPECT_EQ(c.bleu_tokenizer, BleuTokenizer::kInternational);
  EXPECT_TRUE(c.ter_shift_enabled);
  c.beta = 0;
  EXPECT_THROW(c.validate(), Error);
  c = MetricConfig{};
  c.word_ngram_order = 0;
  EXPECT_THROW(c.validate(), Error);

  MetricConfig d;
  d.bleu_tokenizer = BleuTokenizer::kThirteenA;
  d.ter_shift_enabled = false;
  const auto back = metric_config_from_json(to_json(d));
  EXPECT_EQ(back.bleu_tokenizer, BleuTokenizer::kThirteenA);
  EXPECT_FALSE(back.ter_shift_enabled);
  EXPECT_EQ(metric_config_from_json({{"bleu_tokenizer", "13a"}}).bleu_tokenizer, BleuTokenizer::kThirteenA);
  EXPECT_THROW(metric_config_from_json({{"colour", 1}}), Error);
  EXPECT_THROW(metric_config_from_json({{"beta", "two"}}), Error);
}

}  // namespace
}  // namespace tfbench::metrics
