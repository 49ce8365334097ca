#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "condembed/errors.hpp"
#include "condembed/markov.hpp"
#include "condembed/matrix.hpp"

namespace condembed {

/// Closed-form generator approximation from the Jarrow-Lando-Turnbull credit
/// model: q_ii = ln p_ii, q_ij = p_ij ln(p_ii) / (p_ii - 1). Rows sum to
/// zero identically because the off-diagonal mass is 1 - p_ii. An absorbing
/// state (p_ii = 1) yields a zero row.
inline IntensityMatrix jlt(const StochasticMatrix& P) {
  const std::size_t n = P.n();
  Matrix Q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pii = P(i, i);
    if (pii <= 0.0)
      throw not_j1_embeddable("jlt: diagonal entry p[" + std::to_string(i) + "][" +
                              std::to_string(i) + "] is zero");
    if (pii == 1.0) continue;  // zero row
    const double d = pii - 1.0;
    const double factor = std::log1p(d) / d;  // -> 1 as p_ii -> 1
    for (std::size_t j = 0; j < n; ++j) Q(i, j) = (i == j) ? std::log1p(d) : P(i, j) * factor;
  }
  for (std::size_t i = 0; i < n; ++i) {
    KahanAccumulator row;
    for (std::size_t j = 0; j < n; ++j) row.add(Q(i, j));
    if (std::abs(row.value()) > 1e-12)
      throw std::logic_error("jlt: row sum deviates from zero beyond 1e-12");
  }
  return IntensityMatrix(std::move(Q));
}

}  // namespace condembed
