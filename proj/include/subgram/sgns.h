#pragma once

// Negative-sampling skipgram arithmetic over a composed focus vector.
// Templated on the parameter type: training runs in float, gradient checks
// instantiate it with double.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "subgram/matrix.h"

namespace subgram {

enum class PairLabel { kPositive, kNegative };

struct PairLoss {
  double loss = 0.0;
  double gradient = 0.0;  // d loss / d score
};

inline constexpr double kSigmoidClamp = 30.0;

double sigmoid(double s);

// Positive: loss = -log sigma(s), g = sigma(s) - 1.
// Negative: loss = -log sigma(-s), g = sigma(s).
PairLoss pair_loss(double score, PairLabel label);

// Mean of the given input rows written into `out` (size = cols).
template <class Real>
void compose_rows(const DenseMatrix<Real>& input, std::span<const std::int32_t> unit_ids,
                  std::span<Real> out) {
  std::fill(out.begin(), out.end(), Real(0));
  for (const auto id : unit_ids) {
    const auto row = input.row(static_cast<std::size_t>(id));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += row[i];
  }
  const Real scale = Real(1) / static_cast<Real>(unit_ids.size());
  for (auto& x : out) x *= scale;
}

template <class Real>
Real dot(std::span<const Real> a, std::span<const Real> b) {
  Real s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class Real>
double score(const DenseMatrix<Real>& input, const DenseMatrix<Real>& output,
             std::span<const std::int32_t> unit_ids, std::int32_t word_id) {
  std::vector<Real> u(input.cols());
  compose_rows<Real>(input, unit_ids, u);
  return static_cast<double>(dot<Real>(u, output.row(static_cast<std::size_t>(word_id))));
}

template <class Real>
struct StepScratch {
  std::vector<Real> focus;
  std::vector<Real> focus_grad;
  std::vector<double> pair_grad;
};

// One focus/context term plus its negatives.  All pair gradients are taken
// at the pre-update parameters, so (before - after) / lr is the exact
// gradient even when ids repeat.  Input rows with frozen_rows[id] != 0 are
// left untouched.  Returns the summed loss.
template <class Real>
double sgns_step(DenseMatrix<Real>& input, DenseMatrix<Real>& output,
                 std::span<const std::int32_t> focus_units, std::int32_t context_word,
                 std::span<const std::int32_t> negatives, Real lr, StepScratch<Real>& scratch,
                 std::span<const std::uint8_t> frozen_rows = {}) {
  const std::size_t dim = input.cols();
  scratch.focus.resize(dim);
  scratch.focus_grad.assign(dim, Real(0));
  scratch.pair_grad.resize(1 + negatives.size());
  compose_rows<Real>(input, focus_units, scratch.focus);
  const std::span<const Real> u(scratch.focus);

  const auto target = [&](std::size_t j) {
    return static_cast<std::size_t>(j == 0 ? context_word : negatives[j - 1]);
  };

  double loss = 0.0;
  for (std::size_t j = 0; j <= negatives.size(); ++j) {
    const auto v = output.row(target(j));
    const double s = static_cast<double>(dot<Real>(u, v));
    const PairLoss pl = pair_loss(s, j == 0 ? PairLabel::kPositive : PairLabel::kNegative);
    loss += pl.loss;
    scratch.pair_grad[j] = pl.gradient;
    const Real g = static_cast<Real>(pl.gradient);
    for (std::size_t i = 0; i < dim; ++i) scratch.focus_grad[i] += g * v[i];
  }
  for (std::size_t j = 0; j <= negatives.size(); ++j) {
    auto v = output.row(target(j));
    const Real step = lr * static_cast<Real>(scratch.pair_grad[j]);
    for (std::size_t i = 0; i < dim; ++i) v[i] -= step * u[i];
  }
  const Real input_step = lr / static_cast<Real>(focus_units.size());
  for (const auto id : focus_units) {
    if (!frozen_rows.empty() && frozen_rows[static_cast<std::size_t>(id)]) continue;
    auto x = input.row(static_cast<std::size_t>(id));
    for (std::size_t i = 0; i < dim; ++i) x[i] -= input_step * scratch.focus_grad[i];
  }
  return loss;
}

template <class Real>
double sgns_step(DenseMatrix<Real>& input, DenseMatrix<Real>& output,
                 std::span<const std::int32_t> focus_units, std::int32_t context_word,
                 std::span<const std::int32_t> negatives, Real lr) {
  StepScratch<Real> scratch;
  return sgns_step<Real>(input, output, focus_units, context_word, negatives, lr, scratch);
}

// Loss of one focus/context term without touching parameters.
template <class Real>
double sgns_loss(const DenseMatrix<Real>& input, const DenseMatrix<Real>& output,
                 std::span<const std::int32_t> focus_units, std::int32_t context_word,
                 std::span<const std::int32_t> negatives) {
  double loss = pair_loss(score(input, output, focus_units, context_word), PairLabel::kPositive).loss;
  for (const auto n : negatives) {
    loss += pair_loss(score(input, output, focus_units, n), PairLabel::kNegative).loss;
  }
  return loss;
}

}  // namespace subgram
