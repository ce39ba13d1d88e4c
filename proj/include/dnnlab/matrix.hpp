#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dnnlab/errors.hpp"

namespace dnnlab {

// Dense real matrix, row-major. Row-major storage makes the flat parameter
// vector of the translation map a plain copy of the entries.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw ShapeError("Matrix: entry count does not match rows*cols");
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  // Row-major entries, the T-ordering of one weight block.
  const std::vector<double>& data() const { return data_; }

  // W x, accumulated left to right within each row.
  std::vector<double> apply(std::span<const double> x) const {
    if (x.size() != cols_) throw ShapeError("Matrix::apply: dimension mismatch");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double acc = 0.0;
      const double* row = data_.data() + i * cols_;
      for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * x[j];
      y[i] = acc;
    }
    return y;
  }

  Matrix mul(const Matrix& other) const {
    if (cols_ != other.rows_) throw ShapeError("Matrix::mul: dimension mismatch");
    Matrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t k = 0; k < cols_; ++k) {
        const double w = (*this)(i, k);
        if (w == 0.0) continue;
        for (std::size_t j = 0; j < other.cols_; ++j) {
          out(i, j) += w * other(k, j);
        }
      }
    }
    return out;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace dnnlab
