#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include "condembed/errors.hpp"
#include "condembed/matrix.hpp"

namespace condembed {

// Acceptance tolerances. Published transition matrices are typically rounded
// to four decimals, so row sums can be off by a few 1e-5; anything beyond
// 1e-6 indicates bad data rather than rounding.
inline constexpr double stochastic_row_sum_tol = 1e-6;
inline constexpr double stochastic_negative_tol = 1e-9;
inline constexpr double intensity_row_sum_tol = 1e-9;
inline constexpr double intensity_clamp_tol = 1e-12;

/// Row-stochastic square matrix. Construction validates entry ranges and
/// row sums, then renormalizes each row so downstream code can rely on
/// unit row sums to machine precision.
class StochasticMatrix {
public:
  explicit StochasticMatrix(Matrix m) : m_(std::move(m)) {
    if (!m_.square() || m_.rows() == 0)
      throw std::invalid_argument("StochasticMatrix: matrix must be square and nonempty");
    if (!all_finite(m_)) throw std::invalid_argument("StochasticMatrix: non-finite entry");
    const std::size_t n = m_.rows();
    for (std::size_t i = 0; i < n; ++i) {
      KahanAccumulator row;
      for (std::size_t j = 0; j < n; ++j) {
        double& p = m_(i, j);
        if (p < 0.0) {
          if (p < -stochastic_negative_tol)
            throw std::invalid_argument("StochasticMatrix: negative entry at row " +
                                        std::to_string(i));
          p = 0.0;
        }
        row.add(p);
      }
      const double sum = row.value();
      if (std::abs(sum - 1.0) > stochastic_row_sum_tol)
        throw std::invalid_argument("StochasticMatrix: row " + std::to_string(i) +
                                    " sums to " + std::to_string(sum));
      // Already-normalized rows are only clamped into [0,1] so validation
      // is idempotent bitwise; 1e-14 is far above post-division roundoff
      // and far below any real data deviation.
      if (std::abs(sum - 1.0) <= 1e-14) {
        for (std::size_t j = 0; j < n; ++j) m_(i, j) = std::min(m_(i, j), 1.0);
        continue;
      }
      max_renormalization_ = std::max(max_renormalization_, std::abs(sum - 1.0));
      for (std::size_t j = 0; j < n; ++j)
        m_(i, j) = std::clamp(m_(i, j) / sum, 0.0, 1.0);
    }
  }

  std::size_t n() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

  /// Largest |row sum - 1| observed before renormalization.
  double max_renormalization() const noexcept { return max_renormalization_; }

private:
  Matrix m_;
  double max_renormalization_ = 0.0;
};

inline StochasticMatrix validate_stochastic(Matrix raw) {
  return StochasticMatrix(std::move(raw));
}

/// Transition rate matrix: nonnegative off-diagonals, nonpositive diagonal,
/// zero row sums within tolerance. Off-diagonal entries in [-1e-12, 0) are
/// treated as roundoff and clamped to zero.
class IntensityMatrix {
public:
  explicit IntensityMatrix(Matrix m) : m_(std::move(m)) {
    if (!m_.square() || m_.rows() == 0)
      throw std::invalid_argument("IntensityMatrix: matrix must be square and nonempty");
    if (!all_finite(m_)) throw std::invalid_argument("IntensityMatrix: non-finite entry");
    const std::size_t n = m_.rows();
    for (std::size_t i = 0; i < n; ++i) {
      KahanAccumulator row;
      for (std::size_t j = 0; j < n; ++j) {
        double& q = m_(i, j);
        if (i == j) {
          if (q > 0.0) {
            if (q > intensity_clamp_tol)
              throw std::invalid_argument("IntensityMatrix: positive diagonal at row " +
                                          std::to_string(i));
            q = 0.0;
          }
        } else if (q < 0.0) {
          if (q < -intensity_clamp_tol)
            throw std::invalid_argument("IntensityMatrix: negative off-diagonal at (" +
                                        std::to_string(i) + "," + std::to_string(j) + ")");
          q = 0.0;
        }
        row.add(q);
      }
      if (std::abs(row.value()) > intensity_row_sum_tol)
        throw std::invalid_argument("IntensityMatrix: row " + std::to_string(i) +
                                    " sums to " + std::to_string(row.value()));
    }
  }

  std::size_t n() const noexcept { return m_.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }

private:
  Matrix m_;
};

/// Extremes of the diagonal of a stochastic matrix: delta = min p_ii,
/// Delta = max p_ii. Defined only when every diagonal entry is positive.
struct DiagonalExtremes {
  double delta;
  double Delta;
};

inline DiagonalExtremes diagonal_extremes(const StochasticMatrix& P) {
  double lo = 1.0, hi = 0.0;
  for (std::size_t i = 0; i < P.n(); ++i) {
    const double p = P(i, i);
    if (p <= 0.0)
      throw not_j1_embeddable("diagonal entry p[" + std::to_string(i) +
                              "][" + std::to_string(i) + "] is zero");
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  return {lo, hi};
}

}  // namespace condembed
