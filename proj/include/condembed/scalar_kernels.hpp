#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace condembed {

/// Relative argument gap below which tau and rho switch from their closed
/// forms to short Taylor expansions. The closed forms divide by x - y and
/// cancel catastrophically as the arguments coincide; the expansions are
/// accurate to well under 1e-13 relative inside the switch region.
struct StableThreshold {
  double relative_switch;

  constexpr explicit StableThreshold(double s = 1e-6) : relative_switch(s) {
    if (!(s > 0.0 && s < 1e-3))
      throw std::invalid_argument("StableThreshold: relative_switch must lie in (0, 1e-3)");
  }
};

/// Divided-difference exponential kernel
///
///   tau(x, y) = (e^x - e^y) / (x - y),   tau(x, x) = e^x,
///
/// the average of e^t over the segment joining x and y. Evaluated as
/// e^max * (-expm1(min - max)) / (max - min), which is cancellation-free,
/// and as e^((x+y)/2) * sinh(h)/h with h = (x-y)/2 expanded in even powers
/// once the gap is small. Both routes are symmetric in (x, y) bitwise.
inline double tau(double x, double y, StableThreshold threshold = StableThreshold{}) {
  if (!std::isfinite(x) || !std::isfinite(y))
    throw std::domain_error("tau: non-finite argument");
  if (x == y) return std::exp(x);

  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  const double gap = hi - lo;
  const double scale = std::max({std::abs(x), std::abs(y), 1.0});
  if (gap <= threshold.relative_switch * scale) {
    const double h = 0.5 * gap;
    const double h2 = h * h;
    const double sinhc = 1.0 + h2 / 6.0 * (1.0 + h2 / 20.0 * (1.0 + h2 / 42.0));
    return std::exp(0.5 * (x + y)) * sinhc;
  }
  return std::exp(hi) * (-std::expm1(lo - hi)) / gap;
}

/// Logarithmic-mean-type kernel on the positive quadrant
///
///   rho(x, y) = x y (ln x - ln y) / (x - y),   rho(x, x) = x,
///
/// related to tau by rho(x, y) * tau(1 - ln x, 1 - ln y) = e. Computed as
/// max * f(min/max) with f(1+s) = (1+s) log1p(s)/s, switching to the series
/// f(1+s) = 1 + s/2 - s^2/6 + s^3/12 - s^4/20 near s = 0. The result is
/// clamped into [min, max], the range rho is confined to.
inline double rho(double x, double y, StableThreshold threshold = StableThreshold{}) {
  if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
    throw std::domain_error("rho: arguments must be positive and finite");
  if (x == y) return x;

  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  const double s = (lo - hi) / hi;  // in (-1, 0)
  double f;
  if (-s <= threshold.relative_switch) {
    f = 1.0 + s * (0.5 + s * (-1.0 / 6.0 + s * (1.0 / 12.0 + s * (-1.0 / 20.0))));
  } else {
    f = (1.0 + s) * std::log1p(s) / s;
  }
  return std::clamp(hi * f, lo, hi);
}

/// Principal branch of the Lambert W function restricted to t >= 0, i.e.
/// the unique w >= 0 with w e^w = t. Halley iteration from a
/// branch-appropriate starting point; converges to a few ulp in under ten
/// steps everywhere on the nonnegative axis.
inline double lambert_w0(double t) {
  if (!std::isfinite(t) || t < 0.0)
    throw std::domain_error("lambert_w0: argument must be finite and nonnegative");
  if (t == 0.0) return 0.0;

  double w;
  if (t < 2.718281828459045) {
    w = std::log1p(t);
  } else {
    const double lt = std::log(t);
    w = lt - std::log(lt);  // exact at t = e
  }

  for (int iter = 0; iter < 50; ++iter) {
    const double ew = std::exp(w);
    const double residual = w * ew - t;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * residual / (2.0 * wp1);
    const double step = residual / denom;
    w -= step;
    if (std::abs(step) <= 1e-16 * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace condembed
