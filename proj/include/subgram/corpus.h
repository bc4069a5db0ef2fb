#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace subgram {

// One corpus token: surface form plus optional annotations.
// Rendered on disk as  surface("|" field)*  with fields
// "ipa:<phonemic>", "l:<lemma>" and "m:<tag>+<tag>...".
struct AnnotatedToken {
  std::string surface;
  std::optional<std::string> phonemic;
  std::optional<std::string> lemma;
  std::vector<std::string> morph_tags;

  friend bool operator==(const AnnotatedToken&, const AnnotatedToken&) = default;
};

struct Sentence {
  std::vector<AnnotatedToken> tokens;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct CorpusStats {
  std::int64_t token_count = 0;
  std::int64_t sentence_count = 0;
  // Keys: "ipa", "lemma", "morph".
  std::map<std::string, double> annotated_fraction_per_field;
};

// Throws Error(kMalformedToken) on an empty surface, an unknown or repeated
// field prefix, an empty payload, or a boundary symbol ('<' or '>') in the
// surface or phonemic form.  Repeated morphological tags are collapsed.
AnnotatedToken parse_token(std::string_view raw);

// Canonical rendering; fields always appear in ipa, l, m order.
std::string render_token(const AnnotatedToken& token);
std::string render_sentence(const Sentence& sentence);

struct ReadOptions {
  // Skip malformed tokens with a warning instead of aborting.
  bool lenient = false;
};

// Line-oriented streaming reader.  Blank lines are skipped; a line whose
// tokens were all dropped in lenient mode is skipped as well.
class CorpusReader {
 public:
  explicit CorpusReader(std::istream& in, ReadOptions options = {});

  // Returns false at end of input.
  bool next(Sentence& sentence);

  std::int64_t line_number() const { return line_number_; }
  std::int64_t skipped_tokens() const { return skipped_tokens_; }

 private:
  std::istream& in_;
  ReadOptions options_;
  std::int64_t line_number_ = 0;
  std::int64_t skipped_tokens_ = 0;
  std::string line_;
};

std::vector<Sentence> read_corpus(std::istream& in, ReadOptions options = {});
std::vector<Sentence> read_corpus_file(const std::string& path, ReadOptions options = {});

CorpusStats compute_stats(std::span<const Sentence> corpus);

// Replication factor for the low-resource side of a joint corpus.
// Throws Error(kZeroLowResourceCorpus) when lr_tokens is 0.
std::int64_t upsample_factor(std::int64_t hr_tokens, std::int64_t lr_tokens,
                             std::optional<std::int64_t> override_factor = std::nullopt);

// Every high-resource sentence once, every low-resource sentence `factor`
// times, in a seeded shuffled order.
std::vector<Sentence> merge_joint(std::span<const Sentence> hr, std::span<const Sentence> lr,
                                  std::int64_t factor, std::uint64_t seed);

}  // namespace subgram
