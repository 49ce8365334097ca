#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "condembed/errors.hpp"
#include "condembed/markov.hpp"
#include "condembed/matrix.hpp"
#include "condembed/scalar_kernels.hpp"

namespace condembed {

/// Fixed-point unknown: theta_i = e^{1 - q_ii}. For any stochastic matrix
/// with positive diagonal the solution lies in the box
/// [e^{1/Delta}, e^{1/delta}]^n, and theta_i >= e since q_ii <= 0.
using ThetaVector = std::vector<double>;

struct SolverConfig {
  /// Stopping rule: componentwise relative sup-norm of the damped theta
  /// update. Theta components grow like e^{1/delta}, so an absolute
  /// criterion would be meaningless for small diagonals; relative 1e-13
  /// leaves about two digits of headroom over the evaluation noise of the
  /// rho / Lambert W chain.
  double tolerance = 1e-13;
  std::size_t max_iterations = 10000;
  double damping = 1.0;  // theta <- (1-d) theta + d T(theta)

  /// Diagnostics: skip the equal-diagonal closed form and iterate anyway.
  bool force_fixed_point = false;
  /// Starting point override; defaults to theta_i = e^{1/p_ii}.
  std::optional<ThetaVector> initial_theta;

  void validate() const {
    if (!(tolerance >= 1e-15)) throw std::invalid_argument("SolverConfig: tolerance must be >= 1e-15");
    if (max_iterations == 0) throw std::invalid_argument("SolverConfig: max_iterations must be positive");
    if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("SolverConfig: damping must be in (0,1]");
  }
};

/// Lipschitz diagnostic for the fixed-point map on the feasible box, in the
/// sup norm: K = (1 + (1/delta - 1) C(alpha)) / (1 + 1/Delta) with
/// alpha = e^{1/delta - 1/Delta} and C(alpha) = -1 + (alpha+1)/(alpha-1) ln(alpha),
/// C(1) = 1 by continuity. K < 1 certifies a contraction; the iteration is
/// run regardless and K is reported as a diagnostic.
struct ContractionEstimate {
  double alpha;
  double C_alpha;
  double K;
  bool is_contraction;
};

inline ContractionEstimate contraction_estimate(const DiagonalExtremes& extremes) {
  const double a = 1.0 / extremes.delta - 1.0 / extremes.Delta;  // = ln(alpha) exactly
  const double alpha = std::exp(a);
  double C = 1.0;
  if (a > 0.0) {
    const double em = std::expm1(a);
    C = -1.0 + (em + 2.0) * (a / em);
  }
  const double K = (1.0 + (1.0 / extremes.delta - 1.0) * C) / (1.0 + 1.0 / extremes.Delta);
  return {alpha, C, K, K < 1.0};
}

inline ContractionEstimate contraction_estimate(const StochasticMatrix& P) {
  return contraction_estimate(diagonal_extremes(P));
}

/// Range the diagonal of the generator is confined to:
/// 1 - 1/delta <= q_ii <= 1 - 1/Delta.
inline std::pair<double, double> qii_bounds(const StochasticMatrix& P) {
  const DiagonalExtremes e = diagonal_extremes(P);
  return {1.0 - 1.0 / e.delta, 1.0 - 1.0 / e.Delta};
}

/// One sweep of the fixed-point map:
///   T_i(theta) = exp(W0((1/p_ii) sum_j p_ij rho(theta_i, theta_j))).
/// T is increasing componentwise and maps the feasible box into itself.
inline ThetaVector apply_T(const StochasticMatrix& P, const ThetaVector& theta) {
  const std::size_t n = P.n();
  if (theta.size() != n) throw std::invalid_argument("apply_T: theta size mismatch");
  for (std::size_t i = 0; i < n; ++i)
    if (!(theta[i] > 0.0) || !std::isfinite(theta[i]))
      throw std::invalid_argument("apply_T: theta must be positive and finite");

  ThetaVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    KahanAccumulator weighted;
    for (std::size_t j = 0; j < n; ++j) {
      const double pij = P(i, j);
      if (pij == 0.0) continue;
      weighted.add(pij * rho(theta[i], theta[j]));
    }
    out[i] = std::exp(lambert_w0(weighted.value() / P(i, i)));
  }
  return out;
}

enum class SolveMethod { closed_form, fixed_point };

struct SolveReport {
  IntensityMatrix generator;
  ThetaVector theta;
  std::size_t iterations;
  /// Relative sup-norm of theta - T(theta) at the returned theta.
  double residual;
  ContractionEstimate contraction;
  SolveMethod method;
  /// Absolute sup-norm of each damped update, in iteration order.
  std::vector<double> update_norms;
  /// Max deviation between 1 - ln(theta_i) and the diagonal recomputed as
  /// the negated off-diagonal row sum.
  double diag_gap;
};

namespace detail {

inline double relative_gap(const ThetaVector& a, const ThetaVector& b) {
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    gap = std::max(gap, std::abs(a[i] - b[i]) / std::max(a[i], b[i]));
  return gap;
}

struct IterationResult {
  ThetaVector theta;
  std::size_t iterations = 0;
  std::vector<double> update_norms;
  bool converged = false;
  double last_update = 0.0;
};

inline IterationResult iterate_theta(const StochasticMatrix& P, ThetaVector theta,
                                     const SolverConfig& cfg, double damping) {
  IterationResult result;
  result.update_norms.reserve(64);
  for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
    const ThetaVector mapped = apply_T(P, theta);
    ThetaVector next(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i)
      next[i] = (1.0 - damping) * theta[i] + damping * mapped[i];

    double update_abs = 0.0, update_rel = 0.0;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double d = std::abs(next[i] - theta[i]);
      update_abs = std::max(update_abs, d);
      update_rel = std::max(update_rel, d / next[i]);
    }
    result.update_norms.push_back(update_abs);
    theta = std::move(next);
    result.last_update = update_rel;
    if (update_rel < cfg.tolerance) {
      result.iterations = k;
      result.converged = true;
      break;
    }
  }
  result.theta = std::move(theta);
  if (!result.converged) result.iterations = cfg.max_iterations;
  return result;
}

inline Matrix generator_from_theta(const StochasticMatrix& P, const ThetaVector& theta,
                                   double* diag_gap_out) {
  const std::size_t n = P.n();
  Matrix Q(n, n);
  double diag_gap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    KahanAccumulator off_sum;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double qij = P(i, j) == 0.0
                             ? 0.0
                             : rho(theta[i], theta[j]) * P(i, j) / (theta[i] * P(i, i));
      Q(i, j) = qij;
      off_sum.add(qij);
    }
    // Diagonal recomputed from the off-diagonals so rows sum to zero
    // exactly; 1 - ln(theta_i) carries the solver tolerance.
    Q(i, i) = -off_sum.value();
    diag_gap = std::max(diag_gap, std::abs((1.0 - std::log(theta[i])) - Q(i, i)));
  }
  if (diag_gap_out) *diag_gap_out = diag_gap;
  return Q;
}

}  // namespace detail

/// Solve the conditional embedding problem: the unique rate matrix Q whose
/// chain, conditioned on at most one jump in the unit interval, reproduces
/// P as its one-step transition matrix. Requires a strictly positive
/// diagonal. Matrices with all diagonal entries equal use the closed form
/// Q = (1/p)(P - I); otherwise theta is found by damped fixed-point
/// iteration of T starting at theta_i = e^{1/p_ii}, retrying once with
/// damping 0.5 before reporting failure.
inline SolveReport j1_generator(const StochasticMatrix& P, const SolverConfig& cfg = {}) {
  cfg.validate();
  const std::size_t n = P.n();
  const DiagonalExtremes extremes = diagonal_extremes(P);  // throws on zero diagonal
  const ContractionEstimate contraction = contraction_estimate(extremes);

  if (!cfg.force_fixed_point && extremes.delta == extremes.Delta) {
    const double p = extremes.delta;
    ThetaVector theta(n, std::exp(1.0 / p));
    Matrix Q(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      KahanAccumulator off_sum;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        Q(i, j) = P(i, j) / p;
        off_sum.add(Q(i, j));
      }
      Q(i, i) = -off_sum.value();
    }
    const double residual = detail::relative_gap(theta, apply_T(P, theta));
    double diag_gap = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      diag_gap = std::max(diag_gap, std::abs((1.0 - 1.0 / p) - Q(i, i)));
    return SolveReport{IntensityMatrix(std::move(Q)), std::move(theta), 0,      residual,
                       contraction,                   SolveMethod::closed_form, {}, diag_gap};
  }

  ThetaVector start(n);
  if (cfg.initial_theta) {
    if (cfg.initial_theta->size() != n)
      throw std::invalid_argument("SolverConfig: initial_theta size mismatch");
    start = *cfg.initial_theta;
  } else {
    for (std::size_t i = 0; i < n; ++i) start[i] = std::exp(1.0 / P(i, i));
  }

  detail::IterationResult run = detail::iterate_theta(P, start, cfg, cfg.damping);
  if (!run.converged && cfg.damping != 0.5)
    run = detail::iterate_theta(P, start, cfg, 0.5);
  if (!run.converged)
    throw non_convergence("fixed-point iteration did not reach tolerance " +
                              std::to_string(cfg.tolerance) + " in " +
                              std::to_string(cfg.max_iterations) + " iterations",
                          run.last_update, run.iterations);

  const double residual = detail::relative_gap(run.theta, apply_T(P, run.theta));
  double diag_gap = 0.0;
  Matrix Q = detail::generator_from_theta(P, run.theta, &diag_gap);
  return SolveReport{IntensityMatrix(std::move(Q)),
                     std::move(run.theta),
                     run.iterations,
                     residual,
                     contraction,
                     SolveMethod::fixed_point,
                     std::move(run.update_norms),
                     diag_gap};
}

}  // namespace condembed
