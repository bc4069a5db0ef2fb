#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subgram/corpus.h"
#include "subgram/matrix.h"
#include "subgram/rng.h"
#include "subgram/unit.h"
#include "subgram/vocab.h"

namespace subgram {

struct TrainConfig {
  int dim = 100;
  int window = 3;
  int negatives = 5;
  int epochs = 5;
  double lr0 = 0.05;
  std::int64_t min_count = 5;
  // Frequent-word subsampling threshold; 0 disables subsampling.
  double subsample = 1e-4;
  std::uint64_t seed = 1;
  int threads = 1;
  bool fixed_window = false;
  int freeze_transferred_epochs = 0;
  UnitConfig units = UnitConfig({UnitKind::kCharNgram});
  // Fall back to the available unit kinds for tokens missing an annotation.
  bool lenient_annotations = false;
  std::string language = "und";

  // Throws Error(kInvalidConfig).
  void validate() const;
};

// Input rows are unit vectors, output rows are whole-word context vectors.
class Model {
 public:
  Model() = default;
  Model(Vocabulary vocab, TrainConfig config);

  const Vocabulary& vocab() const { return vocab_; }
  const TrainConfig& config() const { return config_; }
  TrainConfig& config() { return config_; }
  int dim() const { return config_.dim; }

  Matrix& input() { return input_; }
  const Matrix& input() const { return input_; }
  Matrix& output() { return output_; }
  const Matrix& output() const { return output_; }

  // Input rows copied from a pretrained checkpoint (CT-FineTune); empty otherwise.
  std::vector<std::uint8_t>& transferred_rows() { return transferred_; }
  const std::vector<std::uint8_t>& transferred_rows() const { return transferred_; }

  CorpusStats& corpus_stats() { return corpus_stats_; }
  const CorpusStats& corpus_stats() const { return corpus_stats_; }

  bool all_finite() const { return input_.all_finite() && output_.all_finite(); }

  // Unit ids of the token's units that exist in the unit table.
  std::vector<std::int32_t> known_unit_ids(const AnnotatedToken& token) const;

 private:
  Vocabulary vocab_;
  TrainConfig config_;
  Matrix input_;
  Matrix output_;
  std::vector<std::uint8_t> transferred_;
  CorpusStats corpus_stats_;
};

// Input entries uniform on [-1/dim, 1/dim], output entries zero.
Model init_model(const Vocabulary& vocab, const TrainConfig& config, Rng& rng);

struct TransferCount {
  std::int64_t transferred = 0;
  std::int64_t total = 0;
};

struct FinetuneInit {
  Model model;
  std::map<UnitKind, TransferCount> report;
};

// Fresh model for the low-resource vocabulary whose input rows are copied
// from `pretrained` wherever the exact unit key exists there.
// Throws Error(kDimensionMismatch) when config.dim differs.
FinetuneInit finetune_init(const Vocabulary& lr_vocab, const Model& pretrained,
                           const TrainConfig& config, Rng& rng);

}  // namespace subgram
