#include "subgram/model.h"

#include "subgram/error.h"

namespace subgram {

void TrainConfig::validate() const {
  const auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidConfig, what);
  };
  require(dim >= 1, "dim must be >= 1");
  require(window >= 1, "window must be >= 1");
  require(negatives >= 1, "negatives must be >= 1");
  require(epochs >= 1, "epochs must be >= 1");
  require(lr0 > 0.0, "learning rate must be positive");
  require(min_count >= 1, "min_count must be >= 1");
  require(subsample >= 0.0, "subsample threshold must be nonnegative");
  require(threads >= 1, "threads must be >= 1");
  require(freeze_transferred_epochs >= 0, "freeze epochs must be nonnegative");
  require(!language.empty() && language.find_first_of(" \t\n=") == std::string::npos,
          "language label must be a single word");
  units.validate();
}

Model::Model(Vocabulary vocab, TrainConfig config)
    : vocab_(std::move(vocab)),
      config_(std::move(config)),
      input_(vocab_.num_units(), static_cast<std::size_t>(config_.dim)),
      output_(vocab_.num_words(), static_cast<std::size_t>(config_.dim)) {}

std::vector<std::int32_t> Model::known_unit_ids(const AnnotatedToken& token) const {
  const UnitExtractor extractor(config_.units, MissingPolicy::kSilent);
  std::vector<std::int32_t> ids;
  for (const auto& key : extractor.keys(token)) {
    if (const auto id = vocab_.unit_id(key)) ids.push_back(*id);
  }
  return ids;
}

Model init_model(const Vocabulary& vocab, const TrainConfig& config, Rng& rng) {
  config.validate();
  if (vocab.num_words() == 0) throw Error(ErrorCode::kEmptyVocabulary, "empty vocabulary");
  Model model(vocab, config);
  const double bound = 1.0 / static_cast<double>(config.dim);
  for (auto& x : model.input().data()) x = static_cast<float>(rng.uniform(-bound, bound));
  return model;
}

FinetuneInit finetune_init(const Vocabulary& lr_vocab, const Model& pretrained,
                           const TrainConfig& config, Rng& rng) {
  if (config.dim != pretrained.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "checkpoint dim " + std::to_string(pretrained.dim()) + " but requested dim " +
                    std::to_string(config.dim));
  }
  FinetuneInit result{init_model(lr_vocab, config, rng), {}};
  Model& model = result.model;
  model.transferred_rows().assign(lr_vocab.num_units(), 0);
  const auto units = lr_vocab.units();
  for (std::size_t id = 0; id < units.size(); ++id) {
    auto& count = result.report[units[id].kind];
    ++count.total;
    const auto source = pretrained.vocab().unit_id(units[id]);
    if (!source) continue;
    const auto from = pretrained.input().row(static_cast<std::size_t>(*source));
    std::copy(from.begin(), from.end(), model.input().row(id).begin());
    model.transferred_rows()[id] = 1;
    ++count.transferred;
  }
  return result;
}

}  // namespace subgram
