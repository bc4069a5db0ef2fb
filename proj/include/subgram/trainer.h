#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "subgram/corpus.h"
#include "subgram/model.h"
#include "subgram/rng.h"
#include "subgram/vocab.h"

namespace subgram {

// lr0 * max(1e-4, 1 - progress).
double lr_schedule(double lr0, double progress);

// Context positions around focus_index within radius b, where b = window
// when fixed and uniform on {1..window} otherwise.
std::vector<std::size_t> window_contexts(std::size_t sentence_len, std::size_t focus_index,
                                         int window, Rng& rng, bool fixed);

// Corpus mapped onto vocabulary ids.  Tokens whose surface is not in the
// word table carry word id -1.
struct EncodedCorpus {
  std::vector<std::int32_t> word_ids;
  std::vector<std::size_t> unit_offsets;  // size = tokens + 1
  std::vector<std::int32_t> unit_ids;
  std::vector<std::size_t> sentence_offsets;  // size = sentences + 1

  std::size_t num_tokens() const { return word_ids.size(); }
  std::size_t num_sentences() const { return sentence_offsets.size() - 1; }
  std::span<const std::int32_t> units_of(std::size_t token) const {
    return {unit_ids.data() + unit_offsets[token], unit_offsets[token + 1] - unit_offsets[token]};
  }
};

EncodedCorpus encode_corpus(std::span<const Sentence> corpus, const Vocabulary& vocab,
                            const UnitExtractor& extractor);

struct TrainReport {
  // Mean per-pair loss in each tenth of training progress; NaN when a
  // decile saw no pairs.
  std::array<double, 10> decile_loss{};
  std::int64_t pairs = 0;
};

// Trains `model` in place over the encoded corpus.  threads == 1 is
// deterministic; more threads update the shared matrices without locks.
// Throws Error(kNonFiniteParameter) if parameters leave the finite range.
TrainReport train_encoded(Model& model, const EncodedCorpus& corpus);

// Builds the model (from init_model, or from `initial` when given), encodes
// the corpus and trains.
Model train(std::span<const Sentence> corpus, const Vocabulary& vocab, const TrainConfig& config,
            std::optional<Model> initial = std::nullopt, TrainReport* report = nullptr);

}  // namespace subgram
