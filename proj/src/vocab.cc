#include "subgram/vocab.h"

#include <algorithm>
#include <cmath>

#include "subgram/error.h"

namespace subgram {

Vocabulary Vocabulary::from_tables(std::vector<WordEntry> words, std::vector<UnitKey> units,
                                   std::int64_t total_tokens) {
  if (words.empty()) throw Error(ErrorCode::kEmptyVocabulary, "word table is empty");
  Vocabulary vocab;
  vocab.words_ = std::move(words);
  vocab.units_ = std::move(units);
  vocab.total_tokens_ = total_tokens;

  std::int64_t counted = 0;
  for (std::size_t i = 0; i < vocab.words_.size(); ++i) {
    const auto& w = vocab.words_[i];
    if (w.count <= 0 || w.surface.empty()) {
      throw Error(ErrorCode::kMalformedCheckpoint, "invalid word entry '" + w.surface + "'");
    }
    if (i > 0) {
      const auto& prev = vocab.words_[i - 1];
      if (prev.count < w.count || (prev.count == w.count && !(prev.surface < w.surface))) {
        throw Error(ErrorCode::kMalformedCheckpoint, "word table is not in id order at '" + w.surface + "'");
      }
    }
    counted += w.count;
    vocab.word_index_.emplace(w.surface, static_cast<std::int32_t>(i));
  }
  if (total_tokens < counted) {
    throw Error(ErrorCode::kMalformedCheckpoint, "total token count below retained counts");
  }
  for (std::size_t i = 0; i < vocab.units_.size(); ++i) {
    if (i > 0 && !(vocab.units_[i - 1] < vocab.units_[i])) {
      throw Error(ErrorCode::kMalformedCheckpoint, "unit table is not sorted and unique");
    }
    vocab.unit_index_.emplace(vocab.units_[i], static_cast<std::int32_t>(i));
  }
  return vocab;
}

std::optional<std::int32_t> Vocabulary::word_id(std::string_view surface) const {
  const auto it = word_index_.find(surface);
  if (it == word_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::int32_t> Vocabulary::unit_id(const UnitKey& key) const {
  const auto it = unit_index_.find(key);
  if (it == unit_index_.end()) return std::nullopt;
  return it->second;
}

std::map<UnitKind, std::int64_t> Vocabulary::units_per_kind() const {
  std::map<UnitKind, std::int64_t> out;
  for (const auto& key : units_) ++out[key.kind];
  return out;
}

void VocabBuilder::add(const Sentence& sentence) {
  for (const auto& token : sentence.tokens) {
    ++total_tokens_;
    auto [it, inserted] = entries_.try_emplace(token.surface);
    Entry& entry = it->second;
    ++entry.count;
    if (inserted) {
      entry.analysis = token;
    } else if (token == entry.analysis) {
      continue;  // same annotation, same units
    }
    for (auto& key : extractor_.keys(token)) entry.units.insert(std::move(key));
  }
}

void VocabBuilder::add(std::span<const Sentence> corpus) {
  for (const auto& sentence : corpus) add(sentence);
}

Vocabulary VocabBuilder::build(std::int64_t min_count) const {
  if (min_count < 1) throw Error(ErrorCode::kInvalidConfig, "min_count must be positive");
  std::vector<WordEntry> words;
  std::set<UnitKey> units;
  for (const auto& [surface, entry] : entries_) {
    if (entry.count < min_count) continue;
    words.push_back({surface, entry.count, entry.analysis});
    units.insert(entry.units.begin(), entry.units.end());
  }
  if (words.empty()) {
    throw Error(ErrorCode::kEmptyVocabulary,
                "no word occurs at least " + std::to_string(min_count) + " times");
  }
  std::sort(words.begin(), words.end(), [](const WordEntry& a, const WordEntry& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.surface < b.surface;
  });
  return Vocabulary::from_tables(std::move(words), {units.begin(), units.end()}, total_tokens_);
}

Vocabulary build_vocab(std::span<const Sentence> corpus, std::int64_t min_count,
                       const UnitExtractor& extractor) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "cannot build a vocabulary from nothing");
  VocabBuilder builder(extractor);
  builder.add(corpus);
  return builder.build(min_count);
}

Vocabulary build_vocab(std::span<const Sentence> corpus, std::int64_t min_count,
                       const UnitConfig& config) {
  const UnitExtractor extractor(config);
  return build_vocab(corpus, min_count, extractor);
}

double discard_probability(std::int64_t word_count, std::int64_t total_tokens, double t) {
  const double f = static_cast<double>(word_count) / static_cast<double>(total_tokens);
  return std::max(0.0, 1.0 - std::sqrt(t / f));
}

NegativeTable build_negative_table(std::span<const std::int64_t> counts, double power,
                                   std::size_t size) {
  if (counts.empty() || size < counts.size()) {
    throw Error(ErrorCode::kInvalidConfig, "negative table needs at least one cell per word");
  }
  std::vector<double> weights(counts.size());
  double z = 0.0;
  for (std::size_t w = 0; w < counts.size(); ++w) {
    weights[w] = std::pow(static_cast<double>(counts[w]), power);
    z += weights[w];
  }

  // Cells per word under the cumulative rule.
  std::vector<std::size_t> cells_per_word(counts.size(), 0);
  const double dsize = static_cast<double>(size);
  std::size_t w = 0;
  double cumulative = weights[0] / z;
  for (std::size_t j = 0; j < size; ++j) {
    while (w + 1 < counts.size() && static_cast<double>(j) / dsize >= cumulative) {
      ++w;
      cumulative += weights[w] / z;
    }
    ++cells_per_word[w];
  }
  for (std::size_t v = 0; v < counts.size(); ++v) {
    if (cells_per_word[v] > 0 || counts[v] == 0) continue;
    const auto donor = std::max_element(cells_per_word.begin(), cells_per_word.end());
    --*donor;
    ++cells_per_word[v];
  }

  NegativeTable table;
  table.power = power;
  table.cells.reserve(size);
  for (std::size_t v = 0; v < counts.size(); ++v) {
    table.cells.insert(table.cells.end(), cells_per_word[v], static_cast<std::int32_t>(v));
  }
  return table;
}

NegativeTable build_negative_table(const Vocabulary& vocab, double power, std::size_t size) {
  std::vector<std::int64_t> counts;
  counts.reserve(vocab.num_words());
  for (const auto& w : vocab.words()) counts.push_back(w.count);
  return build_negative_table(counts, power, size);
}

void sample_negatives(const NegativeTable& table, Rng& rng, int k, std::int32_t exclude,
                      std::vector<std::int32_t>& out) {
  out.clear();
  for (int i = 0; i < k; ++i) {
    const std::int32_t id = table.cells[rng.below(table.cells.size())];
    if (id != exclude) out.push_back(id);
  }
}

std::vector<std::int32_t> sample_negatives(const NegativeTable& table, Rng& rng, int k,
                                           std::int32_t exclude) {
  std::vector<std::int32_t> out;
  sample_negatives(table, rng, k, exclude, out);
  return out;
}

}  // namespace subgram
