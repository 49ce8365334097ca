#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "condembed/matrix.hpp"

namespace condembed {

/// In-place LU factorization with partial pivoting. Small dense systems
/// only; shared by the matrix exponential (Pade solve) and the determinant
/// screen.
class LUDecomposition {
public:
  static LUDecomposition compute(Matrix a) {
    if (!a.square()) throw std::invalid_argument("LUDecomposition: matrix must be square");
    const std::size_t n = a.rows();
    LUDecomposition lu;
    lu.lu_ = std::move(a);
    lu.perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i) lu.perm_[i] = i;

    for (std::size_t col = 0; col < n; ++col) {
      std::size_t pivot = col;
      double best = std::abs(lu.lu_(col, col));
      for (std::size_t r = col + 1; r < n; ++r) {
        const double v = std::abs(lu.lu_(r, col));
        if (v > best) { best = v; pivot = r; }
      }
      if (pivot != col) {
        for (std::size_t j = 0; j < n; ++j) std::swap(lu.lu_(col, j), lu.lu_(pivot, j));
        std::swap(lu.perm_[col], lu.perm_[pivot]);
        lu.sign_ = -lu.sign_;
      }
      const double diag = lu.lu_(col, col);
      if (diag == 0.0) { lu.singular_ = true; continue; }
      for (std::size_t r = col + 1; r < n; ++r) {
        const double factor = lu.lu_(r, col) / diag;
        lu.lu_(r, col) = factor;
        for (std::size_t j = col + 1; j < n; ++j) lu.lu_(r, j) -= factor * lu.lu_(col, j);
      }
    }
    return lu;
  }

  bool singular() const noexcept { return singular_; }

  double determinant() const {
    double det = static_cast<double>(sign_);
    for (std::size_t i = 0; i < lu_.rows(); ++i) det *= lu_(i, i);
    return det;
  }

  /// Solve A X = B for X, column by column.
  Matrix solve(const Matrix& b) const {
    const std::size_t n = lu_.rows();
    if (b.rows() != n) throw std::invalid_argument("LUDecomposition::solve: shape mismatch");
    if (singular_) throw std::runtime_error("LUDecomposition::solve: singular matrix");
    Matrix x(n, b.cols());
    std::vector<double> col(n);
    for (std::size_t c = 0; c < b.cols(); ++c) {
      for (std::size_t i = 0; i < n; ++i) col[i] = b(perm_[i], c);
      for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) col[i] -= lu_(i, j) * col[j];
      for (std::size_t ii = n; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < n; ++j) col[ii] -= lu_(ii, j) * col[j];
        col[ii] /= lu_(ii, ii);
      }
      for (std::size_t i = 0; i < n; ++i) x(i, c) = col[i];
    }
    return x;
  }

private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  bool singular_ = false;
};

inline double determinant(const Matrix& m) { return LUDecomposition::compute(m).determinant(); }

}  // namespace condembed
