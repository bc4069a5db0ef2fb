#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.h"
#include "subgram/error.h"
#include "subgram/rng.h"
#include "subgram/unit.h"

using namespace subgram;

namespace {

const AnnotatedToken kUyghur =
    parse_token("qariyalmaydu|ipa:qarijalmajdu|l:qari|m:Verb+Pot+Neg+Pres+A3sg");

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("extract_ngrams of the phonemic Uyghur form") {
  const auto grams = extract_ngrams("qarijalmajdu", 3, 6);
  REQUIRE(grams.size() == 12 + 11 + 10 + 9);
  CHECK(grams.front() == "<qa");
  CHECK(grams[1] == "qar");
  CHECK(grams.back() == "majdu>");
}

TEST_CASE("extract_ngrams small words") {
  CHECK(extract_ngrams("a", 3, 6) == std::vector<std::string>{"<a>"});
  CHECK(extract_ngrams("cat", 3, 6) ==
        std::vector<std::string>{"<ca", "cat", "at>", "<cat", "cat>", "<cat>"});
}

TEST_CASE("extract_ngrams counts code points, not bytes") {
  // " کتاب": four Arabic-script letters, two bytes each.
  const auto grams = extract_ngrams("\xda\xa9\xd8\xaa\xd8\xa7\xd8\xa8", 3, 3);
  REQUIRE(grams.size() == 4);
  CHECK(grams[0] == "<\xda\xa9\xd8\xaa");
}

TEST_CASE("extract_ngrams rejects boundary symbols") {
  CHECK_THROWS_AS(extract_ngrams("a<b", 3, 6), Error);
  try {
    extract_ngrams("ab>", 3, 6);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kReservedCharacter);
  }
}

TEST_CASE("extract_ngrams matches brute-force enumeration") {
  std::uint64_t state = 0x1234567;
  for (int trial = 0; trial < 200; ++trial) {
    const int length = 1 + static_cast<int>(state % 30);
    const std::string word = oracle::random_unicode_word(state, length);
    for (int lo = 1; lo <= 8; ++lo) {
      for (int hi = lo; hi <= 8; ++hi) {
        const auto got = extract_ngrams(word, lo, hi);
        REQUIRE(got == oracle::brute_force_ngrams(word, lo, hi));
        std::size_t expected = 0;
        for (int n = lo; n <= hi; ++n) expected += static_cast<std::size_t>(std::max(0, length + 2 - n + 1));
        CHECK(got.size() == expected);
      }
    }
    const std::string bounded = "<" + word + ">";
    for (const auto& g : extract_ngrams(word, 3, 6)) CHECK(bounded.find(g) != std::string::npos);
  }
}

TEST_CASE("unit_keys with phoneme n-grams, lemma and tags") {
  const UnitConfig config({UnitKind::kPhonNgram, UnitKind::kLemma, UnitKind::kMorphTag});
  const auto keys = unit_keys(kUyghur, config);
  REQUIRE(keys.size() == 48);
  CHECK(keys.front() == UnitKey{UnitKind::kPhonNgram, "<qa"});
  CHECK(keys[41] == UnitKey{UnitKind::kPhonNgram, "majdu>"});
  CHECK(keys[42] == UnitKey{UnitKind::kLemma, "qari"});
  CHECK(keys[43] == UnitKey{UnitKind::kMorphTag, "Verb"});
  CHECK(keys[47] == UnitKey{UnitKind::kMorphTag, "A3sg"});
}

TEST_CASE("unit_keys single-kind configurations") {
  CHECK(unit_keys(parse_token("cat"), UnitConfig({UnitKind::kWord})) ==
        std::vector<UnitKey>{{UnitKind::kWord, "cat"}});
  CHECK(unit_keys(kUyghur, UnitConfig({UnitKind::kPhonWord})) ==
        std::vector<UnitKey>{{UnitKind::kPhonWord, "qarijalmajdu"}});
}

TEST_CASE("unit_keys kind order is fixed") {
  UnitConfig all;
  for (const auto kind : kAllUnitKinds) all.enable(kind);
  const auto keys = unit_keys(kUyghur, all);
  CHECK(std::is_sorted(keys.begin(), keys.end(), [](const UnitKey& a, const UnitKey& b) {
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  }));
  CHECK(keys.front() == UnitKey{UnitKind::kWord, "qariyalmaydu"});
}

TEST_CASE("kinds with identical text stay distinct") {
  const auto t = parse_token("abc|ipa:abc");
  const auto keys = unit_keys(t, UnitConfig({UnitKind::kCharNgram, UnitKind::kPhonNgram}));
  REQUIRE(keys.size() == 12);
  CHECK(keys[1].text == keys[7].text);
  CHECK(keys[1] != keys[7]);
}

TEST_CASE("missing annotations abort by default and fall back when asked") {
  const UnitConfig config({UnitKind::kPhonNgram, UnitKind::kLemma, UnitKind::kMorphTag});
  const auto bare = parse_token("kitab|m:Noun");
  CHECK_THROWS_AS(unit_keys(bare, config), Error);
  const UnitExtractor lenient(config, MissingPolicy::kSilent);
  CHECK(lenient.keys(bare) == std::vector<UnitKey>{{UnitKind::kMorphTag, "Noun"}});
  // Token without tags is fine: it simply contributes no tag units.
  CHECK(unit_keys(parse_token("a|ipa:a|l:a"), config).size() == 2);
}

TEST_CASE("unit key serialization") {
  CHECK(serialize_unit_key({UnitKind::kPhonWord, "qari"}) == "pw:qari");
  CHECK(serialize_unit_key({UnitKind::kMorphTag, "Verb"}) == "m:Verb");
  for (const auto kind : kAllUnitKinds) {
    for (const std::string text : {"x", "pw:y", "<qa", "a:b"}) {
      const UnitKey key{kind, text};
      CHECK(parse_unit_key(serialize_unit_key(key)) == key);
    }
  }
  CHECK_THROWS_AS(parse_unit_key("z:foo"), Error);
  CHECK_THROWS_AS(parse_unit_key("m:"), Error);
}

TEST_CASE("UnitConfig parse and validation") {
  const auto config = UnitConfig::parse("phon-ngrams,lemma,morph");
  CHECK(config.to_string() == "phon-ngrams,lemma,morph");
  CHECK(config.kinds().size() == 3);
  CHECK_THROWS_AS(UnitConfig::parse("phonemes"), Error);
  CHECK_THROWS_AS(UnitConfig::parse("word", 4, 3), Error);
  CHECK_THROWS_AS(UnitConfig::parse("word", 0, 3), Error);
  CHECK_THROWS_AS(UnitConfig().validate(), Error);
}

TEST_CASE("compose examples") {
  const std::vector<std::vector<double>> one = {{0.3, -2.0}};
  CHECK(compose(one) == one[0]);
  const std::vector<std::vector<double>> two = {{1, 0}, {0, 1}};
  CHECK(compose(two) == std::vector<double>{0.5, 0.5});
  const std::vector<std::vector<double>> three = {{2, 4}, {0, 0}, {1, -1}};
  CHECK(compose(three) == std::vector<double>{1, 1});
  CHECK_THROWS_AS(compose(std::span<const std::vector<double>>{}), Error);
}

TEST_CASE("compose is a permutation-invariant convex combination") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = 1 + rng.below(6);
    std::vector<std::vector<double>> vs(n, std::vector<double>(4));
    double max_norm = 0;
    for (auto& v : vs) {
      for (auto& x : v) x = rng.uniform(-3, 3);
      max_norm = std::max(max_norm, norm(v));
    }
    const auto mean = compose(vs);
    CHECK(norm(mean) <= max_norm + 1e-12);
    std::reverse(vs.begin(), vs.end());
    const auto reversed = compose(vs);
    for (std::size_t i = 0; i < 4; ++i) CHECK(reversed[i] == doctest::Approx(mean[i]).epsilon(1e-12));
  }
}
