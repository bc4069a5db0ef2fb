#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace subgram {

// Row-major dense matrix.
template <class Real>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<Real> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Real> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Real& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Real operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Real> data() { return data_; }
  std::span<const Real> data() const { return data_; }

  bool all_finite() const {
    for (const Real x : data_) {
      if (!std::isfinite(x)) return false;
    }
    return true;
  }

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Real> data_;
};

using Matrix = DenseMatrix<float>;

}  // namespace subgram
