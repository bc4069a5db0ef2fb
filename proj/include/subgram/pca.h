#pragma once

#include <span>
#include <string>
#include <vector>

namespace subgram {

struct LabeledVector {
  std::string label;
  std::vector<double> values;
};

struct Projection {
  std::string label;
  double x = 0.0;
  double y = 0.0;
};

struct PcaOptions {
  double tolerance = 1e-9;
  int max_iterations = 1000;
};

// Dominant eigenvector of a symmetric matrix (row-major, n x n) by power
// iteration from a fixed start.  Returns the eigenvalue.
double power_iteration(std::span<const double> matrix, std::size_t n, std::vector<double>& vector,
                       const PcaOptions& options = {});

// Centers the selected vectors and projects them on the two leading
// principal directions.  Each direction's largest-magnitude loading is made
// positive.  Output follows the order of `selection`.
// Throws Error(kUnknownLabel), Error(kInvalidConfig) for fewer than three
// points or dimension < 2, and Error(kDegenerateVariance) when all points
// coincide.
std::vector<Projection> pca2(std::span<const LabeledVector> vectors,
                             std::span<const std::string> selection, const PcaOptions& options = {});

// label<TAB>x<TAB>y lines.
std::string format_projection_tsv(std::span<const Projection> points);

}  // namespace subgram
