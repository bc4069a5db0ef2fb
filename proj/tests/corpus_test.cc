#include <doctest.h>

#include <map>
#include <sstream>

#include "subgram/corpus.h"
#include "subgram/error.h"
#include "subgram/rng.h"

using namespace subgram;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::kInvalidConfig;
}

}  // namespace

TEST_CASE("parse_token splits the fully annotated Uyghur token") {
  const auto t = parse_token("qariyalmaydu|ipa:qarijalmajdu|l:qari|m:Verb+Pot+Neg+Pres+A3sg");
  CHECK(t.surface == "qariyalmaydu");
  CHECK(t.phonemic == "qarijalmajdu");
  CHECK(t.lemma == "qari");
  CHECK(t.morph_tags == std::vector<std::string>{"Verb", "Pot", "Neg", "Pres", "A3sg"});
}

TEST_CASE("parse_token bare and single-tag forms") {
  const auto cat = parse_token("cat");
  CHECK(cat.surface == "cat");
  CHECK_FALSE(cat.phonemic);
  CHECK_FALSE(cat.lemma);
  CHECK(cat.morph_tags.empty());

  const auto a = parse_token("a|l:a|m:Noun");
  CHECK(a.surface == "a");
  CHECK_FALSE(a.phonemic);
  CHECK(a.lemma == "a");
  CHECK(a.morph_tags == std::vector<std::string>{"Noun"});
}

TEST_CASE("parse_token accepts fields in any order and collapses repeated tags") {
  const auto t = parse_token("ev|m:Noun+Noun+Loc|l:ev");
  CHECK(t.lemma == "ev");
  CHECK(t.morph_tags == std::vector<std::string>{"Noun", "Loc"});
}

TEST_CASE("parse_token rejects malformed tokens") {
  for (const char* raw : {"", "|l:a", "x|q:z", "a|l:b|l:c", "a|ipa:x|ipa:y", "a|m:X|m:Y", "a|l:",
                          "a|ipa:", "a|m:", "a|m:A++B", "a<b", "a|ipa:x>y"}) {
    CAPTURE(raw);
    CHECK(code_of([&] { parse_token(raw); }) == ErrorCode::kMalformedToken);
  }
}

TEST_CASE("render_token round-trips through parse_token") {
  Rng rng(7);
  const std::vector<std::string> pieces = {"a", "qar", "ij", "Noun", "A3sg", "\xd9\x83", "x_y"};
  const auto pick = [&] { return pieces[rng.below(pieces.size())]; };
  for (int trial = 0; trial < 300; ++trial) {
    AnnotatedToken t;
    t.surface = pick() + pick();
    if (rng.below(2)) t.phonemic = pick();
    if (rng.below(2)) t.lemma = pick();
    const auto tags = rng.below(4);
    for (std::uint64_t i = 0; i < tags; ++i) {
      const std::string tag = pick() + std::to_string(i);
      t.morph_tags.push_back(tag);
    }
    CHECK(parse_token(render_token(t)) == t);
  }
}

TEST_CASE("read_corpus counts tokens and skips blank lines") {
  std::istringstream in("a b c\n\n   \nd e\n");
  const auto corpus = read_corpus(in);
  REQUIRE(corpus.size() == 2);
  const auto stats = compute_stats(corpus);
  CHECK(stats.token_count == 5);
  CHECK(stats.sentence_count == 2);
  CHECK(stats.annotated_fraction_per_field.at("ipa") == 0.0);
}

TEST_CASE("read_corpus token count matches an independent split") {
  Rng rng(3);
  std::string text;
  std::int64_t expected = 0;
  for (int line = 0; line < 200; ++line) {
    const auto n = rng.below(7);
    for (std::uint64_t i = 0; i < n; ++i) {
      if (i > 0) text += ' ';
      text += "w" + std::to_string(rng.below(20));
    }
    text += '\n';
  }
  std::istringstream split_in(text);
  std::string word;
  while (split_in >> word) ++expected;
  std::istringstream in(text);
  CHECK(compute_stats(read_corpus(in)).token_count == expected);
}

TEST_CASE("read_corpus reports malformed tokens with the line number") {
  std::istringstream in("a b\nc x|q:z\n");
  try {
    read_corpus(in);
    FAIL("expected MalformedToken");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMalformedToken);
    CHECK(std::string(e.what()).find("line 2, token 2") != std::string::npos);
  }
}

TEST_CASE("lenient read_corpus drops the bad token and keeps going") {
  std::istringstream in("a b\nc x|q:z\nx|q:z\nd\n");
  CorpusReader reader(in, {.lenient = true});
  std::vector<Sentence> out;
  Sentence s;
  while (reader.next(s)) out.push_back(s);
  REQUIRE(out.size() == 3);
  CHECK(out[1].tokens.size() == 1);
  CHECK(reader.skipped_tokens() == 2);
}

TEST_CASE("annotated fractions per field") {
  std::istringstream in("a|ipa:a|l:a b|m:X\nc|l:c d\n");
  const auto stats = compute_stats(read_corpus(in));
  CHECK(stats.annotated_fraction_per_field.at("ipa") == doctest::Approx(0.25));
  CHECK(stats.annotated_fraction_per_field.at("lemma") == doctest::Approx(0.5));
  CHECK(stats.annotated_fraction_per_field.at("morph") == doctest::Approx(0.25));
}

TEST_CASE("upsample_factor") {
  CHECK(upsample_factor(40'000'000, 27'000'000) == 1);
  CHECK(upsample_factor(100, 100) == 1);
  CHECK(upsample_factor(1000, 99) == 10);
  CHECK(upsample_factor(0, 50) == 1);
  CHECK(upsample_factor(1000, 99, 4) == 4);
  CHECK(code_of([] { upsample_factor(10, 0); }) == ErrorCode::kZeroLowResourceCorpus);
}

TEST_CASE("upsample_factor rounding bound") {
  for (std::int64_t l = 1; l < 60; ++l) {
    for (std::int64_t h = l; h < 400; h += 7) {
      const auto f = upsample_factor(h, l);
      CHECK(std::abs(f * l - h) * 2 <= l);
    }
  }
}

namespace {

Sentence sentence_of(const std::string& line) {
  std::istringstream in(line);
  return read_corpus(in).at(0);
}

std::map<std::string, int> multiset(const std::vector<Sentence>& s) {
  std::map<std::string, int> m;
  for (const auto& x : s) ++m[render_sentence(x)];
  return m;
}

}  // namespace

TEST_CASE("merge_joint count law and determinism") {
  const std::vector<Sentence> hr = {sentence_of("h1 a"), sentence_of("h2 b")};
  const std::vector<Sentence> lr = {sentence_of("l1 c")};
  const auto merged = merge_joint(hr, lr, 3, 42);
  CHECK(merged.size() == 5);
  const auto counts = multiset(merged);
  CHECK(counts.at("l1 c") == 3);
  CHECK(counts.at("h1 a") == 1);
  CHECK(merge_joint(hr, lr, 3, 42) == merged);

  const std::vector<Sentence> lr2 = {sentence_of("x"), sentence_of("y")};
  const auto only_lr = merge_joint({}, lr2, 1, 9);
  CHECK(multiset(only_lr) == multiset(lr2));
}

TEST_CASE("merge_joint multiset law over factors") {
  std::vector<Sentence> hr, lr;
  for (int i = 0; i < 7; ++i) hr.push_back(sentence_of("h" + std::to_string(i)));
  for (int i = 0; i < 4; ++i) lr.push_back(sentence_of("l" + std::to_string(i % 3)));
  for (std::int64_t factor = 1; factor <= 5; ++factor) {
    auto expected = multiset(hr);
    for (const auto& [k, v] : multiset(lr)) expected[k] += v * static_cast<int>(factor);
    const auto merged = merge_joint(hr, lr, factor, static_cast<std::uint64_t>(factor));
    CHECK(merged.size() == hr.size() + static_cast<std::size_t>(factor) * lr.size());
    CHECK(multiset(merged) == expected);
  }
}
