#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "subgram/corpus.h"
#include "subgram/rng.h"
#include "subgram/unit.h"

namespace subgram {

struct WordEntry {
  std::string surface;
  std::int64_t count = 0;
  // First annotated occurrence; used to compose the word's vector outside
  // of a training context (export, neighbor queries).
  AnnotatedToken analysis;

  friend bool operator==(const WordEntry&, const WordEntry&) = default;
};

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

// Word table (output side) and unit table (input side).
// Word ids follow descending count, ties by surface; unit ids follow UnitKey
// order.  Immutable once built.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Validates ordering and uniqueness; throws Error(kEmptyVocabulary) or
  // Error(kMalformedCheckpoint).
  static Vocabulary from_tables(std::vector<WordEntry> words, std::vector<UnitKey> units,
                                std::int64_t total_tokens);

  std::span<const WordEntry> words() const { return words_; }
  std::span<const UnitKey> units() const { return units_; }
  std::size_t num_words() const { return words_.size(); }
  std::size_t num_units() const { return units_.size(); }
  std::int64_t total_tokens() const { return total_tokens_; }

  std::optional<std::int32_t> word_id(std::string_view surface) const;
  std::optional<std::int32_t> unit_id(const UnitKey& key) const;

  std::map<UnitKind, std::int64_t> units_per_kind() const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.words_ == b.words_ && a.units_ == b.units_ && a.total_tokens_ == b.total_tokens_;
  }

 private:
  std::vector<WordEntry> words_;
  std::vector<UnitKey> units_;
  std::int64_t total_tokens_ = 0;
  std::unordered_map<std::string, std::int32_t, StringHash, std::equal_to<>> word_index_;
  std::unordered_map<UnitKey, std::int32_t, UnitKeyHash> unit_index_;
};

// Incremental builder; the result does not depend on how the corpus is
// chunked across add() calls.
class VocabBuilder {
 public:
  explicit VocabBuilder(const UnitExtractor& extractor) : extractor_(extractor) {}

  void add(const Sentence& sentence);
  void add(std::span<const Sentence> corpus);

  // Throws Error(kEmptyVocabulary) when nothing survives min_count.
  Vocabulary build(std::int64_t min_count) const;

 private:
  struct Entry {
    std::int64_t count = 0;
    AnnotatedToken analysis;
    std::set<UnitKey> units;
  };
  const UnitExtractor& extractor_;
  std::unordered_map<std::string, Entry> entries_;
  std::int64_t total_tokens_ = 0;
};

Vocabulary build_vocab(std::span<const Sentence> corpus, std::int64_t min_count,
                       const UnitExtractor& extractor);
Vocabulary build_vocab(std::span<const Sentence> corpus, std::int64_t min_count,
                       const UnitConfig& config);

// max(0, 1 - sqrt(t / f)) with f = word_count / total_tokens.
double discard_probability(std::int64_t word_count, std::int64_t total_tokens, double t);

// Cells of the smoothed unigram distribution count^power.
struct NegativeTable {
  std::vector<std::int32_t> cells;
  double power = 0.75;

  std::size_t size() const { return cells.size(); }
};

inline constexpr std::size_t kDefaultNegativeTableSize = 10'000'000;

// Cell j holds the word w with cum(w-1) <= j/size < cum(w).  A word whose
// share is too small to own a cell under that rule is given one cell taken
// from the currently largest word.
NegativeTable build_negative_table(std::span<const std::int64_t> counts, double power,
                                   std::size_t size);
NegativeTable build_negative_table(const Vocabulary& vocab, double power = 0.75,
                                   std::size_t size = kDefaultNegativeTableSize);

// k uniform draws over the table cells; draws equal to `exclude` are dropped.
void sample_negatives(const NegativeTable& table, Rng& rng, int k, std::int32_t exclude,
                      std::vector<std::int32_t>& out);
std::vector<std::int32_t> sample_negatives(const NegativeTable& table, Rng& rng, int k,
                                           std::int32_t exclude);

}  // namespace subgram
