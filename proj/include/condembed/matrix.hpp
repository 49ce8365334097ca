#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace condembed {

/// Dense row-major matrix of doubles. Sized for rating-scale problems
/// (n up to a few hundred); no sparse storage.
class Matrix {
public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<double>> init) {
    rows_ = init.size();
    cols_ = rows_ == 0 ? 0 : init.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::size_t size() const noexcept { return data_.size(); }

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("Matrix +: shape mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] = a.data()[k] + b.data()[k];
  return out;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("Matrix -: shape mismatch");
  Matrix out(a.rows(), a.cols());
  for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] = a.data()[k] - b.data()[k];
  return out;
}

inline Matrix operator*(double s, const Matrix& a) {
  Matrix out(a.rows(), a.cols());
  for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] = s * a.data()[k];
  return out;
}

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Matrix *: shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline bool all_finite(const Matrix& m) {
  return std::all_of(m.data(), m.data() + m.size(),
                     [](double x) { return std::isfinite(x); });
}

/// Maximum absolute row sum (the infinity operator norm).
inline double max_row_sum_norm(const Matrix& m) {
  if (!m.square()) throw std::invalid_argument("max_row_sum_norm: matrix must be square");
  if (!all_finite(m)) throw std::domain_error("max_row_sum_norm: non-finite entry");
  double norm = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) row += std::abs(m(i, j));
    norm = std::max(norm, row);
  }
  return norm;
}

/// Kahan compensated accumulator; keeps long row sums exact to ~1 ulp.
struct KahanAccumulator {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }

  double value() const noexcept { return sum; }
};

}  // namespace condembed
