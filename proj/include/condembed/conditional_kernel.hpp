#pragma once

#include <cmath>
#include <cstddef>

#include "condembed/markov.hpp"
#include "condembed/matrix.hpp"
#include "condembed/scalar_kernels.hpp"

namespace condembed {

/// Joint probabilities p*_ij = P(X_1 = j, at most one jump | X_0 = i) for a
/// chain with rate matrix Q. Diagonal entries equal e^{q_ii} (the chain
/// never leaves), so every row has strictly positive mass and sums to at
/// most one.
struct JointKernel {
  Matrix p_star;
};

inline JointKernel joint_kernel(const IntensityMatrix& Q) {
  const std::size_t n = Q.n();
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double qii = Q(i, i);
    for (std::size_t j = 0; j < n; ++j)
      p(i, j) = (i == j) ? std::exp(qii) : Q(i, j) * tau(qii, Q(j, j));
  }
  return {std::move(p)};
}

/// One-step transition matrix of the chain conditioned on at most one jump
/// in the unit interval: the joint kernel with each row normalized by its
/// total mass. Rows of the result are stochastic and keep a strictly
/// positive diagonal; an all-zero row of Q (absorbing state) maps to the
/// corresponding identity row.
inline StochasticMatrix conditional_transition_matrix(const IntensityMatrix& Q) {
  JointKernel kernel = joint_kernel(Q);
  const std::size_t n = Q.n();
  Matrix& p = kernel.p_star;
  for (std::size_t i = 0; i < n; ++i) {
    KahanAccumulator row;
    for (std::size_t j = 0; j < n; ++j) row.add(p(i, j));
    const double total = row.value();  // >= e^{q_ii} > 0
    for (std::size_t j = 0; j < n; ++j) p(i, j) /= total;
  }
  return StochasticMatrix(std::move(p));
}

}  // namespace condembed
