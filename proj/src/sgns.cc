#include "subgram/sgns.h"

#include <algorithm>
#include <cmath>

namespace subgram {

double sigmoid(double s) {
  const double c = std::clamp(s, -kSigmoidClamp, kSigmoidClamp);
  return 1.0 / (1.0 + std::exp(-c));
}

PairLoss pair_loss(double score, PairLabel label) {
  const double c = std::clamp(score, -kSigmoidClamp, kSigmoidClamp);
  const double sig = sigmoid(c);
  if (label == PairLabel::kPositive) {
    return {std::log1p(std::exp(-c)), sig - 1.0};
  }
  return {std::log1p(std::exp(c)), sig};
}

}  // namespace subgram
