#include "cli.h"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "subgram/checkpoint.h"
#include "subgram/corpus.h"
#include "subgram/error.h"
#include "subgram/eval.h"
#include "subgram/model.h"
#include "subgram/pca.h"
#include "subgram/trainer.h"
#include "subgram/vectors.h"
#include "subgram/vocab.h"

namespace subgram::cli {

namespace {

namespace fs = std::filesystem;

std::string to_manifest_value(const std::string& v) { return v; }
std::string to_manifest_value(bool v) { return v ? "true" : "false"; }
std::string to_manifest_value(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, result.ptr);
}
template <class T>
  requires std::is_integral_v<T>
std::string to_manifest_value(T v) {
  return std::to_string(v);
}
template <class T>
std::string to_manifest_value(const std::optional<T>& v) {
  return v ? to_manifest_value(*v) : std::string();
}

// Ordered record of a subcommand's options, rendered as key=value lines
// that replay feeds back as --key=value.
class Manifest {
 public:
  explicit Manifest(std::string command) : command_(std::move(command)) {}

  template <class T>
  CLI::Option* option(CLI::App* app, const std::string& name, T& var, const std::string& help) {
    entries_.push_back({name, [&var] { return to_manifest_value(var); }});
    return app->add_option("--" + name, var, help)->capture_default_str();
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& var, const std::string& help) {
    entries_.push_back({name, [&var] { return to_manifest_value(var); }});
    return app->add_flag("--" + name, var, help);
  }

  std::string render() const {
    std::string out = "command=" + command_ + '\n';
    for (const auto& [name, value] : entries_) {
      const std::string v = value();
      if (!v.empty()) out += name + '=' + v + '\n';
    }
    return out;
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::function<std::string()>>> entries_;
};

struct TrainFlags {
  TrainConfig config;
  std::string units = "char-ngrams";
  int min_n = 3;
  int max_n = 6;
  bool lenient = false;

  void add(Manifest& m, CLI::App* app) {
    m.option(app, "dim", config.dim, "embedding dimension");
    m.option(app, "window", config.window, "context window radius");
    m.option(app, "negatives", config.negatives, "negative samples per pair");
    m.option(app, "epochs", config.epochs, "training epochs");
    m.option(app, "lr", config.lr0, "initial learning rate");
    m.option(app, "min-count", config.min_count, "minimum word count");
    m.option(app, "subsample", config.subsample, "frequent-word subsampling threshold (0 disables)");
    m.option(app, "seed", config.seed, "random seed");
    m.option(app, "threads", config.threads, "worker threads (1 = deterministic)");
    m.option(app, "units", units,
             "comma list of word,char-ngrams,phon-word,phon-ngrams,lemma,morph");
    m.option(app, "min-n", min_n, "shortest n-gram");
    m.option(app, "max-n", max_n, "longest n-gram");
    m.option(app, "language", config.language, "language label stored in the checkpoint");
    m.flag(app, "fixed-window", config.fixed_window, "use the full window instead of a sampled radius");
    m.flag(app, "lenient", lenient,
           "skip malformed tokens and fall back when annotations are missing");
  }

  TrainConfig resolve() const {
    TrainConfig c = config;
    c.units = UnitConfig::parse(units, min_n, max_n);
    c.lenient_annotations = lenient;
    c.validate();
    return c;
  }
};

struct Outputs {
  fs::path checkpoint;
  fs::path vectors;
};

Outputs write_training_outputs(const Model& model, const std::string& dir, const Manifest& manifest) {
  fs::create_directories(dir);
  Outputs o{fs::path(dir) / "model.ckpt", fs::path(dir) / "vectors.txt"};
  save_checkpoint_file(model, o.checkpoint.string());
  write_file(o.vectors.string(), export_vectors(model, ExportMode::kComposedWords));
  write_file((fs::path(dir) / "manifest.txt").string(), manifest.render());
  return o;
}

void print_report(std::ostream& out, const TrainReport& report) {
  char buf[96];
  out << "pairs=" << report.pairs << '\n';
  for (std::size_t d = 0; d < report.decile_loss.size(); ++d) {
    std::snprintf(buf, sizeof buf, "loss_decile_%zu=%.6f\n", d, report.decile_loss[d]);
    out << buf;
  }
}

Vocabulary vocab_for(std::span<const Sentence> corpus, const TrainConfig& config) {
  const UnitExtractor extractor(
      config.units, config.lenient_annotations ? MissingPolicy::kFallback : MissingPolicy::kAbort);
  return build_vocab(corpus, config.min_count, extractor);
}

std::map<std::string, std::string> parse_manifest(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kInvalidConfig, "bad manifest line '" + line + "'");
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

// Manifest keys in the order they were written, excluding command.
std::vector<std::pair<std::string, std::string>> manifest_entries(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    if (line.substr(0, eq) == "command") continue;
    out.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return out;
}

int exit_code_for(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::kUsage: return kExitUsage;
    case ErrorCategory::kNumerical: return kExitNumerical;
    case ErrorCategory::kData: return kExitData;
  }
  return kExitData;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Subword-unit skipgram embeddings with cross-lingual transfer", "subgram"};
  app.require_subcommand(1);

  // train
  auto* train_cmd = app.add_subcommand("train", "train a monolingual model");
  Manifest train_manifest("train");
  std::string train_input, train_output;
  TrainFlags train_flags;
  train_manifest.option(train_cmd, "input", train_input, "annotated corpus")->required();
  train_manifest.option(train_cmd, "output", train_output, "output directory")->required();
  train_flags.add(train_manifest, train_cmd);

  // train-joint
  auto* joint_cmd = app.add_subcommand("train-joint", "train on merged high/low-resource corpora");
  Manifest joint_manifest("train-joint");
  std::string joint_hr, joint_lr, joint_output;
  std::optional<std::int64_t> joint_upsample;
  TrainFlags joint_flags;
  joint_flags.config.language = "joint";
  joint_manifest.option(joint_cmd, "input-hr", joint_hr, "high-resource corpus")->required();
  joint_manifest.option(joint_cmd, "input-lr", joint_lr, "low-resource corpus")->required();
  joint_manifest.option(joint_cmd, "upsample", joint_upsample,
                        "low-resource replication factor (default: token ratio)");
  joint_manifest.option(joint_cmd, "output", joint_output, "output directory")->required();
  joint_flags.add(joint_manifest, joint_cmd);

  // finetune
  auto* fine_cmd = app.add_subcommand("finetune", "train initialized from a pretrained checkpoint");
  Manifest fine_manifest("finetune");
  std::string fine_input, fine_init, fine_output;
  TrainFlags fine_flags;
  fine_manifest.option(fine_cmd, "input", fine_input, "low-resource corpus")->required();
  fine_manifest.option(fine_cmd, "init-from", fine_init, "pretrained checkpoint")->required();
  fine_manifest.option(fine_cmd, "freeze-epochs", fine_flags.config.freeze_transferred_epochs,
                       "epochs during which transferred unit rows stay fixed");
  fine_manifest.option(fine_cmd, "output", fine_output, "output directory")->required();
  fine_flags.add(fine_manifest, fine_cmd);

  // nn
  auto* nn_cmd = app.add_subcommand("nn", "nearest neighbors of a token");
  std::string nn_model, nn_query;
  std::size_t nn_k = 10;
  nn_cmd->add_option("--model", nn_model, "checkpoint")->required();
  nn_cmd->add_option("--query", nn_query, "query token (annotated syntax accepted)")->required();
  nn_cmd->add_option("-k", nn_k, "number of neighbors")->capture_default_str();

  // coverage
  auto* cov_cmd = app.add_subcommand("coverage", "share of low-resource units known to a checkpoint");
  std::string cov_lr, cov_hr, cov_kinds;
  std::int64_t cov_min_count = 1;
  bool cov_lenient = false;
  cov_cmd->add_option("--lr", cov_lr, "low-resource checkpoint or corpus")->required();
  cov_cmd->add_option("--hr", cov_hr, "high-resource checkpoint")->required();
  cov_cmd->add_option("--kinds", cov_kinds, "comma list of unit kinds to report");
  cov_cmd->add_option("--min-count", cov_min_count, "minimum word count for a corpus")
      ->capture_default_str();
  cov_cmd->add_flag("--lenient", cov_lenient, "tolerate malformed tokens and missing annotations");

  // pca
  auto* pca_cmd = app.add_subcommand("pca", "two-dimensional PCA projection of selected words");
  Manifest pca_manifest("pca");
  std::string pca_model, pca_labels, pca_out;
  pca_manifest.option(pca_cmd, "model", pca_model, "checkpoint")->required();
  pca_manifest.option(pca_cmd, "labels", pca_labels, "file with one token per line")->required();
  pca_manifest.option(pca_cmd, "out", pca_out, "output TSV")->required();

  // loglik
  auto* ll_cmd = app.add_subcommand("loglik", "full-softmax corpus log-likelihood");
  std::string ll_model, ll_corpus;
  std::optional<int> ll_window;
  ll_cmd->add_option("--model", ll_model, "checkpoint")->required();
  ll_cmd->add_option("--corpus", ll_corpus, "annotated corpus")->required();
  ll_cmd->add_option("--window", ll_window, "fixed window (default: the model's)");

  // export
  auto* exp_cmd = app.add_subcommand("export", "write vectors as text");
  Manifest exp_manifest("export");
  std::string exp_model, exp_mode = "composed-words", exp_out;
  exp_manifest.option(exp_cmd, "model", exp_model, "checkpoint")->required();
  exp_manifest.option(exp_cmd, "mode", exp_mode, "composed-words or raw-units")
      ->check(CLI::IsMember({"composed-words", "raw-units"}));
  exp_manifest.option(exp_cmd, "out", exp_out, "output file")->required();

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "corpus statistics");
  std::string stats_input;
  bool stats_lenient = false;
  stats_cmd->add_option("--input", stats_input, "annotated corpus")->required();
  stats_cmd->add_flag("--lenient", stats_lenient, "skip malformed tokens");

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a manifest");
  std::string replay_manifest, replay_output;
  replay_cmd->add_option("--manifest", replay_manifest, "manifest.txt of an earlier run")->required();
  replay_cmd->add_option("--output", replay_output, "write outputs here instead");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* failed = &app;
    for (const auto* sub : app.get_subcommands()) failed = sub;
    err << failed->help();
    return kExitUsage;
  }

  try {
    if (train_cmd->parsed()) {
      const TrainConfig config = train_flags.resolve();
      const auto corpus = read_corpus_file(train_input, {train_flags.lenient});
      const Vocabulary vocab = vocab_for(corpus, config);
      TrainReport report;
      const Model model = train(corpus, vocab, config, std::nullopt, &report);
      write_training_outputs(model, train_output, train_manifest);
      out << "words=" << vocab.num_words() << "\nunits=" << vocab.num_units() << '\n';
      print_report(out, report);
    } else if (joint_cmd->parsed()) {
      const TrainConfig config = joint_flags.resolve();
      const auto hr = read_corpus_file(joint_hr, {joint_flags.lenient});
      const auto lr = read_corpus_file(joint_lr, {joint_flags.lenient});
      const auto factor = upsample_factor(compute_stats(hr).token_count,
                                          compute_stats(lr).token_count, joint_upsample);
      const auto merged = merge_joint(hr, lr, factor, config.seed);
      const Vocabulary vocab = vocab_for(merged, config);
      TrainReport report;
      const Model model = train(merged, vocab, config, std::nullopt, &report);
      write_training_outputs(model, joint_output, joint_manifest);
      out << "upsample=" << factor << "\nsentences=" << merged.size()
          << "\nwords=" << vocab.num_words() << "\nunits=" << vocab.num_units() << '\n';
      print_report(out, report);
    } else if (fine_cmd->parsed()) {
      const TrainConfig config = fine_flags.resolve();
      const Model pretrained = load_checkpoint_file(fine_init);
      const auto corpus = read_corpus_file(fine_input, {fine_flags.lenient});
      const Vocabulary vocab = vocab_for(corpus, config);
      Rng rng(config.seed);
      FinetuneInit init = finetune_init(vocab, pretrained, config, rng);
      for (const auto& [kind, count] : init.report) {
        out << "transferred_" << unit_kind_name(kind) << '=' << count.transferred << '/'
            << count.total << '\n';
      }
      TrainReport report;
      const Model model = train(corpus, vocab, config, std::move(init.model), &report);
      write_training_outputs(model, fine_output, fine_manifest);
      print_report(out, report);
    } else if (nn_cmd->parsed()) {
      const Model model = load_checkpoint_file(nn_model);
      const auto result = nearest_neighbors(model, parse_token(nn_query), nn_k);
      char buf[64];
      for (const auto& n : result.neighbors) {
        std::snprintf(buf, sizeof buf, "\t%.6f\n", n.cosine);
        out << n.surface << buf;
      }
    } else if (cov_cmd->parsed()) {
      const Model hr = load_checkpoint_file(cov_hr);
      const std::string lr_bytes = read_file(cov_lr);
      Vocabulary lr_vocab;
      if (looks_like_checkpoint(lr_bytes)) {
        lr_vocab = load_checkpoint(lr_bytes).vocab();
      } else {
        std::istringstream in(lr_bytes);
        const auto corpus = read_corpus(in, {cov_lenient});
        const UnitExtractor extractor(hr.config().units, cov_lenient ? MissingPolicy::kFallback
                                                                     : MissingPolicy::kAbort);
        lr_vocab = build_vocab(corpus, cov_min_count, extractor);
      }
      std::vector<UnitKind> kinds;
      if (!cov_kinds.empty()) kinds = UnitConfig::parse(cov_kinds).kinds();
      char buf[128];
      for (const auto& [kind, c] : unit_coverage(lr_vocab.units(), hr.vocab(), kinds)) {
        std::snprintf(buf, sizeof buf, "%s\t%lld\t%lld\t%.6f\n",
                      std::string(unit_kind_name(kind)).c_str(), static_cast<long long>(c.lr_count),
                      static_cast<long long>(c.shared_count), c.fraction);
        out << buf;
      }
    } else if (pca_cmd->parsed()) {
      const Model model = load_checkpoint_file(pca_model);
      std::istringstream in(read_file(pca_labels));
      std::vector<LabeledVector> vectors;
      std::vector<std::string> selection;
      std::string line;
      while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto token = parse_token(line.substr(0, line.find_last_not_of(" \t\r") + 1));
        const WordVector v = word_vector(model, token);
        if (v.oov_empty) err << "warning: '" << token.surface << "' has no known units\n";
        vectors.push_back({token.surface, {v.values.begin(), v.values.end()}});
        selection.push_back(token.surface);
      }
      write_file(pca_out, format_projection_tsv(pca2(vectors, selection)));
      write_file(pca_out + ".manifest", pca_manifest.render());
    } else if (ll_cmd->parsed()) {
      const Model model = load_checkpoint_file(ll_model);
      const auto corpus = read_corpus_file(ll_corpus);
      const int window = ll_window.value_or(model.config().window);
      char buf[96];
      std::snprintf(buf, sizeof buf, "loglik=%.6f\npairs=%lld\n",
                    corpus_log_likelihood(model, corpus, window),
                    static_cast<long long>(count_context_pairs(model, corpus, window)));
      out << buf;
    } else if (exp_cmd->parsed()) {
      const Model model = load_checkpoint_file(exp_model);
      write_file(exp_out, export_vectors(model, parse_export_mode(exp_mode)));
      write_file(exp_out + ".manifest", exp_manifest.render());
    } else if (stats_cmd->parsed()) {
      const auto stats = compute_stats(read_corpus_file(stats_input, {stats_lenient}));
      out << "token_count=" << stats.token_count << "\nsentence_count=" << stats.sentence_count
          << '\n';
      char buf[96];
      for (const auto& [field, fraction] : stats.annotated_fraction_per_field) {
        std::snprintf(buf, sizeof buf, "annotated_%s=%.6f\n", field.c_str(), fraction);
        out << buf;
      }
    } else if (replay_cmd->parsed()) {
      const std::string text = read_file(replay_manifest);
      const auto fields = parse_manifest(text);
      const auto command = fields.find("command");
      if (command == fields.end() || command->second == "replay") {
        throw Error(ErrorCode::kInvalidConfig, "manifest names no replayable command");
      }
      std::vector<std::string> replay_args{command->second};
      for (const auto& [key, value] : manifest_entries(text)) {
        if (!replay_output.empty() && (key == "output" || key == "out")) continue;
        replay_args.push_back("--" + key + "=" + value);
      }
      if (!replay_output.empty()) {
        const bool file_output = command->second == "pca" || command->second == "export";
        replay_args.push_back((file_output ? "--out=" : "--output=") + replay_output);
      }
      return run(replay_args, out, err);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    err << "error: IoFailure: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace subgram::cli
