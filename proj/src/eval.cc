#include "subgram/eval.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "subgram/error.h"
#include "subgram/sgns.h"

namespace subgram {

WordVector word_vector(const Model& model, const AnnotatedToken& token) {
  WordVector result;
  result.values.assign(static_cast<std::size_t>(model.dim()), 0.0f);
  // A bare surface form of a known word stands for its stored analysis.
  const bool bare = !token.phonemic && !token.lemma && token.morph_tags.empty();
  const auto known = bare ? model.vocab().word_id(token.surface) : std::nullopt;
  const auto ids = model.known_unit_ids(
      known ? model.vocab().words()[static_cast<std::size_t>(*known)].analysis : token);
  if (ids.empty()) {
    result.oov_empty = true;
    return result;
  }
  compose_rows<float>(model.input(), ids, result.values);
  return result;
}

Matrix composed_word_vectors(const Model& model) {
  const Vocabulary& vocab = model.vocab();
  Matrix out(vocab.num_words(), static_cast<std::size_t>(model.dim()));
  for (std::size_t w = 0; w < vocab.num_words(); ++w) {
    const auto ids = model.known_unit_ids(vocab.words()[w].analysis);
    if (!ids.empty()) compose_rows<float>(model.input(), ids, out.row(w));
  }
  return out;
}

double cosine(std::span<const float> u, std::span<const float> v) {
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += static_cast<double>(u[i]) * v[i];
    uu += static_cast<double>(u[i]) * u[i];
    vv += static_cast<double>(v[i]) * v[i];
  }
  if (uu == 0.0 || vv == 0.0) return 0.0;
  return uv / (std::sqrt(uu) * std::sqrt(vv));
}

QueryResult nearest_neighbors(const Model& model, const AnnotatedToken& query, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidConfig, "k must be >= 1");
  const WordVector q = word_vector(model, query);
  if (q.oov_empty) {
    throw Error(ErrorCode::kOovEmpty, "query '" + query.surface + "' has no known units");
  }
  const Matrix words = composed_word_vectors(model);
  std::vector<Neighbor> all;
  for (std::size_t w = 0; w < model.vocab().num_words(); ++w) {
    const auto& surface = model.vocab().words()[w].surface;
    if (surface == query.surface) continue;
    all.push_back({surface, cosine(q.values, words.row(w))});
  }
  const auto better = [](const Neighbor& a, const Neighbor& b) {
    if (a.cosine != b.cosine) return a.cosine > b.cosine;
    return a.surface < b.surface;
  };
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(), better);
  all.resize(n);
  return {std::move(all)};
}

std::vector<double> softmax_distribution(const Model& model,
                                         std::span<const std::int32_t> focus_units) {
  const std::size_t dim = static_cast<std::size_t>(model.dim());
  std::vector<double> u(dim, 0.0);
  for (const auto id : focus_units) {
    const auto row = model.input().row(static_cast<std::size_t>(id));
    for (std::size_t i = 0; i < dim; ++i) u[i] += row[i];
  }
  for (auto& x : u) x /= static_cast<double>(focus_units.size());

  const std::size_t num_words = model.vocab().num_words();
  std::vector<double> scores(num_words);
  for (std::size_t w = 0; w < num_words; ++w) {
    const auto v = model.output().row(w);
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) s += u[i] * v[i];
    scores[w] = s;
  }
  const double max = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (auto& s : scores) {
    s = std::exp(s - max);
    z += s;
  }
  for (auto& s : scores) s /= z;
  return scores;
}

double softmax_probability(const Model& model, std::span<const std::int32_t> focus_units,
                           std::int32_t target_word) {
  return softmax_distribution(model, focus_units)[static_cast<std::size_t>(target_word)];
}

namespace {

// Calls fn(focus unit ids, context word id) for every fixed-window pair.
template <class Fn>
void for_each_context_pair(const Model& model, std::span<const Sentence> corpus, int window, Fn fn) {
  struct Kept {
    std::int32_t word;
    std::vector<std::int32_t> units;
  };
  std::vector<Kept> kept;
  for (const auto& sentence : corpus) {
    kept.clear();
    for (const auto& token : sentence.tokens) {
      if (const auto word = model.vocab().word_id(token.surface)) {
        kept.push_back({*word, model.known_unit_ids(token)});
      }
    }
    const auto w = static_cast<std::size_t>(window);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (kept[i].units.empty()) continue;
      const std::size_t first = i >= w ? i - w : 0;
      const std::size_t last = std::min(kept.size() - 1, i + w);
      for (std::size_t j = first; j <= last; ++j) {
        if (j != i) fn(kept[i].units, kept[j].word);
      }
    }
  }
}

}  // namespace

double corpus_log_likelihood(const Model& model, std::span<const Sentence> corpus, int window) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyCorpus, "no sentences to score");
  double total = 0.0;
  for_each_context_pair(model, corpus, window,
                        [&](std::span<const std::int32_t> units, std::int32_t context) {
                          total += std::log(softmax_probability(model, units, context));
                        });
  return total;
}

std::int64_t count_context_pairs(const Model& model, std::span<const Sentence> corpus, int window) {
  std::int64_t pairs = 0;
  for_each_context_pair(model, corpus, window,
                        [&](std::span<const std::int32_t>, std::int32_t) { ++pairs; });
  return pairs;
}

CoverageReport unit_coverage(std::span<const UnitKey> lr_units, const Vocabulary& hr_vocab,
                             std::span<const UnitKind> kinds) {
  CoverageReport report;
  for (const UnitKind kind : kinds) report[kind];
  const std::set<UnitKey> unique(lr_units.begin(), lr_units.end());
  for (const auto& key : unique) {
    if (!kinds.empty() && std::find(kinds.begin(), kinds.end(), key.kind) == kinds.end()) continue;
    auto& entry = report[key.kind];
    ++entry.lr_count;
    if (hr_vocab.unit_id(key)) ++entry.shared_count;
  }
  for (auto& [kind, entry] : report) {
    if (entry.lr_count == 0) {
      throw Error(ErrorCode::kEmptyKind,
                  "no low-resource units of kind " + std::string(unit_kind_name(kind)));
    }
    entry.fraction = static_cast<double>(entry.shared_count) / static_cast<double>(entry.lr_count);
  }
  return report;
}

}  // namespace subgram
