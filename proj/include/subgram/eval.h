#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "subgram/corpus.h"
#include "subgram/matrix.h"
#include "subgram/model.h"

namespace subgram {

struct WordVector {
  std::vector<float> values;
  // True when none of the token's units are in the unit table; values are 0.
  bool oov_empty = false;
};

// Mean of the input rows of the token's known units.  Annotations the token
// lacks are skipped rather than reported; a bare surface form that is in the
// word table is composed from that word's stored analysis.
WordVector word_vector(const Model& model, const AnnotatedToken& token);

// Composed vector of every vocabulary word from its stored analysis.
Matrix composed_word_vectors(const Model& model);

// 0 when either vector has zero norm.
double cosine(std::span<const float> u, std::span<const float> v);

struct Neighbor {
  std::string surface;
  double cosine = 0.0;
};

struct QueryResult {
  std::vector<Neighbor> neighbors;
};

// Top-k words by cosine, ties by surface, query surface excluded.
// Throws Error(kOovEmpty) when the query has no known units.
QueryResult nearest_neighbors(const Model& model, const AnnotatedToken& query, std::size_t k);

// Full-softmax p(target | focus) with log-sum-exp stabilization, in double.
double softmax_probability(const Model& model, std::span<const std::int32_t> focus_units,
                           std::int32_t target_word);
std::vector<double> softmax_distribution(const Model& model,
                                         std::span<const std::int32_t> focus_units);

// Sum over focus tokens and their fixed-window contexts of
// log p(context | focus).  Tokens missing from the word table are removed
// before windowing.  Throws Error(kEmptyCorpus).
double corpus_log_likelihood(const Model& model, std::span<const Sentence> corpus, int window);

// Number of (focus, context) pairs corpus_log_likelihood sums over.
std::int64_t count_context_pairs(const Model& model, std::span<const Sentence> corpus, int window);

struct KindCoverage {
  std::int64_t lr_count = 0;
  std::int64_t shared_count = 0;
  double fraction = 0.0;
};

using CoverageReport = std::map<UnitKind, KindCoverage>;

// Fraction of the low-resource unit keys of each kind that also exist in the
// high-resource unit table.  Throws Error(kEmptyKind) when a requested kind
// has no low-resource units; with no kinds requested, reports every kind
// present on the low-resource side.
CoverageReport unit_coverage(std::span<const UnitKey> lr_units, const Vocabulary& hr_vocab,
                             std::span<const UnitKind> kinds = {});

}  // namespace subgram
