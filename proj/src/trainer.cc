#include "subgram/trainer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "subgram/error.h"
#include "subgram/sgns.h"

namespace subgram {

double lr_schedule(double lr0, double progress) {
  return lr0 * std::max(1e-4, 1.0 - progress);
}

std::vector<std::size_t> window_contexts(std::size_t sentence_len, std::size_t focus_index,
                                         int window, Rng& rng, bool fixed) {
  const std::size_t radius =
      fixed ? static_cast<std::size_t>(window) : 1 + rng.below(static_cast<std::uint64_t>(window));
  const std::size_t first = focus_index >= radius ? focus_index - radius : 0;
  const std::size_t last = std::min(sentence_len - 1, focus_index + radius);
  std::vector<std::size_t> positions;
  for (std::size_t j = first; j <= last; ++j) {
    if (j != focus_index) positions.push_back(j);
  }
  return positions;
}

EncodedCorpus encode_corpus(std::span<const Sentence> corpus, const Vocabulary& vocab,
                            const UnitExtractor& extractor) {
  EncodedCorpus encoded;
  encoded.unit_offsets.push_back(0);
  encoded.sentence_offsets.push_back(0);
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence.tokens) {
      const auto word = vocab.word_id(token.surface);
      encoded.word_ids.push_back(word.value_or(-1));
      if (word) {
        for (const auto& key : extractor.keys(token)) {
          if (const auto unit = vocab.unit_id(key)) encoded.unit_ids.push_back(*unit);
        }
      }
      encoded.unit_offsets.push_back(encoded.unit_ids.size());
    }
    encoded.sentence_offsets.push_back(encoded.word_ids.size());
  }
  return encoded;
}

namespace {

struct WorkerState {
  explicit WorkerState(std::uint64_t seed) : rng(seed) {}

  Rng rng;
  StepScratch<float> scratch;
  std::vector<std::int32_t> negatives;
  std::vector<std::size_t> kept;
  std::array<double, 10> loss{};
  std::array<std::int64_t, 10> pairs{};
};

struct Shared {
  Model& model;
  const EncodedCorpus& corpus;
  const NegativeTable& table;
  const std::vector<double>& keep_probability;
  std::atomic<std::int64_t>& processed;
  double total_work;
};

void run_shard(Shared& shared, WorkerState& state, std::size_t first_sentence,
               std::size_t last_sentence, bool frozen) {
  Model& model = shared.model;
  const TrainConfig& config = model.config();
  const EncodedCorpus& corpus = shared.corpus;
  const std::span<const std::uint8_t> frozen_rows =
      frozen ? std::span<const std::uint8_t>(model.transferred_rows())
             : std::span<const std::uint8_t>();

  for (std::size_t s = first_sentence; s < last_sentence; ++s) {
    const std::size_t begin = corpus.sentence_offsets[s];
    const std::size_t end = corpus.sentence_offsets[s + 1];
    const double progress =
        std::min(1.0, static_cast<double>(shared.processed.load(std::memory_order_relaxed)) /
                          shared.total_work);
    const float lr = static_cast<float>(lr_schedule(config.lr0, progress));
    const auto decile = std::min<std::size_t>(9, static_cast<std::size_t>(progress * 10.0));

    state.kept.clear();
    for (std::size_t t = begin; t < end; ++t) {
      const std::int32_t word = corpus.word_ids[t];
      if (word < 0) continue;
      const double keep = shared.keep_probability[static_cast<std::size_t>(word)];
      if (keep < 1.0 && state.rng.uniform01() >= keep) continue;
      state.kept.push_back(t);
    }

    for (std::size_t i = 0; i < state.kept.size(); ++i) {
      const auto focus_units = corpus.units_of(state.kept[i]);
      const auto contexts =
          window_contexts(state.kept.size(), i, config.window, state.rng, config.fixed_window);
      if (focus_units.empty()) continue;
      for (const std::size_t c : contexts) {
        const std::int32_t context_word = corpus.word_ids[state.kept[c]];
        sample_negatives(shared.table, state.rng, config.negatives, context_word, state.negatives);
        state.loss[decile] += sgns_step<float>(model.input(), model.output(), focus_units,
                                               context_word, state.negatives, lr, state.scratch,
                                               frozen_rows);
        ++state.pairs[decile];
      }
    }
    shared.processed.fetch_add(static_cast<std::int64_t>(end - begin), std::memory_order_relaxed);
  }
}

}  // namespace

TrainReport train_encoded(Model& model, const EncodedCorpus& corpus) {
  const TrainConfig& config = model.config();
  config.validate();
  const Vocabulary& vocab = model.vocab();
  if (vocab.num_words() == 0) throw Error(ErrorCode::kEmptyVocabulary, "empty vocabulary");
  if (corpus.num_tokens() == 0) throw Error(ErrorCode::kEmptyCorpus, "empty training corpus");

  const NegativeTable table = build_negative_table(vocab);
  std::vector<double> keep_probability(vocab.num_words(), 1.0);
  if (config.subsample > 0.0) {
    for (std::size_t w = 0; w < vocab.num_words(); ++w) {
      keep_probability[w] =
          1.0 - discard_probability(vocab.words()[w].count, vocab.total_tokens(), config.subsample);
    }
  }

  std::atomic<std::int64_t> processed{0};
  Shared shared{model, corpus, table, keep_probability, processed,
                static_cast<double>(config.epochs) * static_cast<double>(corpus.num_tokens())};

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(config.threads), corpus.num_sentences());
  std::vector<WorkerState> states;
  states.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    states.emplace_back(config.seed + 0x9E3779B97F4A7C15ull * (t + 1));
  }
  const auto shard_bound = [&](std::size_t t) { return corpus.num_sentences() * t / workers; };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const bool frozen = epoch < config.freeze_transferred_epochs && !model.transferred_rows().empty();
    if (workers == 1) {
      run_shard(shared, states[0], 0, corpus.num_sentences(), frozen);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < workers; ++t) {
        pool.emplace_back([&, t] { run_shard(shared, states[t], shard_bound(t), shard_bound(t + 1), frozen); });
      }
    }
    if (!model.all_finite()) {
      throw Error(ErrorCode::kNonFiniteParameter,
                  "non-finite parameter after epoch " + std::to_string(epoch + 1));
    }
  }

  TrainReport report;
  for (std::size_t d = 0; d < 10; ++d) {
    double loss = 0.0;
    std::int64_t pairs = 0;
    for (const auto& state : states) {
      loss += state.loss[d];
      pairs += state.pairs[d];
    }
    report.decile_loss[d] =
        pairs > 0 ? loss / static_cast<double>(pairs) : std::numeric_limits<double>::quiet_NaN();
    report.pairs += pairs;
  }
  return report;
}

Model train(std::span<const Sentence> corpus, const Vocabulary& vocab, const TrainConfig& config,
            std::optional<Model> initial, TrainReport* report) {
  config.validate();
  Model model;
  if (initial) {
    if (initial->dim() != config.dim) {
      throw Error(ErrorCode::kDimensionMismatch, "initial model dimension differs from config");
    }
    if (!(initial->vocab() == vocab)) {
      throw Error(ErrorCode::kInvalidConfig, "initial model was built for a different vocabulary");
    }
    model = std::move(*initial);
    model.config() = config;
  } else {
    Rng rng(config.seed);
    model = init_model(vocab, config, rng);
  }
  model.corpus_stats() = compute_stats(corpus);
  const UnitExtractor extractor(
      config.units, config.lenient_annotations ? MissingPolicy::kFallback : MissingPolicy::kAbort);
  const EncodedCorpus encoded = encode_corpus(corpus, vocab, extractor);
  TrainReport local = train_encoded(model, encoded);
  if (report) *report = local;
  return model;
}

}  // namespace subgram
