#include "subgram/pca.h"

#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "subgram/error.h"
#include "subgram/rng.h"

namespace subgram {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (const double x : v) s += x * x;
  return std::sqrt(s);
}

void fix_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  }
  if (v[best] < 0) {
    for (auto& x : v) x = -x;
  }
}

}  // namespace

double power_iteration(std::span<const double> matrix, std::size_t n, std::vector<double>& vector,
                       const PcaOptions& options) {
  Rng rng(0x5eed);
  vector.resize(n);
  for (auto& x : vector) x = rng.uniform(-1.0, 1.0);
  double length = norm(vector);
  for (auto& x : vector) x /= length;

  std::vector<double> next(n);
  double eigenvalue = 0.0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j) s += matrix[i * n + j] * vector[j];
      next[i] = s;
    }
    length = norm(next);
    if (length == 0.0) return 0.0;  // vector lies in the null space
    double delta = 0.0;
    eigenvalue = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= length;
      eigenvalue += vector[i] * next[i] * length;
    }
    // Compare up to sign; negative eigenvalues flip the iterate.
    const double sign = eigenvalue < 0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) delta = std::max(delta, std::abs(next[i] * sign - vector[i]));
    vector.swap(next);
    if (delta < options.tolerance) break;
  }
  return eigenvalue;
}

std::vector<Projection> pca2(std::span<const LabeledVector> vectors,
                             std::span<const std::string> selection, const PcaOptions& options) {
  std::unordered_map<std::string, const LabeledVector*> by_label;
  for (const auto& v : vectors) by_label.emplace(v.label, &v);
  if (selection.size() < 3) throw Error(ErrorCode::kInvalidConfig, "PCA needs at least three points");

  std::vector<const LabeledVector*> points;
  for (const auto& label : selection) {
    const auto it = by_label.find(label);
    if (it == by_label.end()) throw Error(ErrorCode::kUnknownLabel, "no vector for '" + label + "'");
    points.push_back(it->second);
  }
  const std::size_t dim = points.front()->values.size();
  if (dim < 2) throw Error(ErrorCode::kInvalidConfig, "PCA needs dimension >= 2");
  for (const auto* p : points) {
    if (p->values.size() != dim) throw Error(ErrorCode::kDimensionMismatch, "vectors differ in dimension");
  }

  const double count = static_cast<double>(points.size());
  std::vector<double> mean(dim, 0.0);
  for (const auto* p : points) {
    for (std::size_t i = 0; i < dim; ++i) mean[i] += p->values[i];
  }
  for (auto& m : mean) m /= count;
  std::vector<std::vector<double>> centered;
  centered.reserve(points.size());
  for (const auto* p : points) {
    std::vector<double> c(dim);
    for (std::size_t i = 0; i < dim; ++i) c[i] = p->values[i] - mean[i];
    centered.push_back(std::move(c));
  }

  std::vector<double> cov(dim * dim, 0.0);
  for (const auto& c : centered) {
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j < dim; ++j) cov[i * dim + j] += c[i] * c[j];
    }
  }
  double trace = 0.0;
  for (std::size_t i = 0; i < dim; ++i) trace += cov[i * dim + i];
  if (trace == 0.0) throw Error(ErrorCode::kDegenerateVariance, "all selected points coincide");
  for (auto& x : cov) x /= count;

  std::vector<double> first, second;
  const double lambda1 = power_iteration(cov, dim, first, options);
  fix_sign(first);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) cov[i * dim + j] -= lambda1 * first[i] * first[j];
  }
  power_iteration(cov, dim, second, options);
  // Keep the second direction orthogonal to the first despite round-off.
  double overlap = 0.0;
  for (std::size_t i = 0; i < dim; ++i) overlap += first[i] * second[i];
  for (std::size_t i = 0; i < dim; ++i) second[i] -= overlap * first[i];
  const double length = norm(second);
  for (auto& x : second) x /= length;
  fix_sign(second);

  std::vector<Projection> out;
  out.reserve(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    double x = 0.0, y = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      x += centered[p][i] * first[i];
      y += centered[p][i] * second[i];
    }
    out.push_back({points[p]->label, x, y});
  }
  return out;
}

std::string format_projection_tsv(std::span<const Projection> points) {
  std::string out;
  char buf[96];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "\t%.6f\t%.6f\n", p.x, p.y);
    out += p.label;
    out += buf;
  }
  return out;
}

}  // namespace subgram
