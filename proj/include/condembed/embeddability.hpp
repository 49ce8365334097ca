#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "condembed/lu.hpp"
#include "condembed/markov.hpp"
#include "condembed/matrix.hpp"

namespace condembed {

/// Goodman's necessary condition for classical embeddability:
/// prod_i p_ii >= det(P) > 0. Evaluated with 1e-12 slack on each
/// inequality since inputs are typically rounded published matrices.
struct GoodmanCheck {
  bool passes;
  double det;
  double diag_product;
};

inline GoodmanCheck goodman_check(const StochasticMatrix& P) {
  const double det = determinant(P.matrix());
  double product = 1.0;
  for (std::size_t i = 0; i < P.n(); ++i) product *= P(i, i);
  const bool passes = (product >= det - 1e-12) && (det > -1e-12);
  return {passes, det, product};
}

/// A stochastic matrix has a generator under the at-most-one-jump condition
/// exactly when every diagonal entry is positive.
inline bool j1_embeddable(const StochasticMatrix& P) {
  for (std::size_t i = 0; i < P.n(); ++i)
    if (!(P(i, i) > 0.0)) return false;
  return true;
}

/// Classical embeddability of the symmetric 2x2 family [[p, 1-p], [1-p, p]]:
/// embeddable iff p > 1/2, with unique generator
/// Q = ln(2p-1)/(2(p-1)) (P - I).
struct TwoStateEmbedding {
  bool embeddable;
  std::optional<IntensityMatrix> generator;
};

inline TwoStateEmbedding two_state_embeddable(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("two_state_embeddable: p must be in (0,1)");
  if (p <= 0.5) return {false, std::nullopt};
  const double k = std::log(2.0 * p - 1.0) / (2.0 * (p - 1.0));
  const double off = k * (1.0 - p);
  Matrix q{{-off, off}, {off, -off}};
  return {true, IntensityMatrix(std::move(q))};
}

/// Scalar inequalities behind the equal-diagonal norm comparisons:
///   (1)  1 + e^{2 - 2/p} - 2p > 0
///   (2)  1 - e^{1 - 1/p} < (4/3)(1 - p)
/// for all p in (0,1).
struct ScalarInequalities {
  bool ineq1;
  bool ineq2;
};

inline ScalarInequalities scalar_inequalities_check(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("scalar_inequalities_check: p must be in (0,1)");
  const bool first = 1.0 + std::exp(2.0 - 2.0 / p) - 2.0 * p > 0.0;
  const bool second = -std::expm1(1.0 - 1.0 / p) < 4.0 / 3.0 * (1.0 - p);
  return {first, second};
}

}  // namespace condembed
