#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

namespace covertsim {

/// Gaussian tail probability Q(x) = Pr(N(0,1) > x).
inline double q_function(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

/// log Q(x), finite for every finite x.
///
/// For x >= 8 the tail is evaluated through the Laplace continued fraction
/// Q(x) = phi(x) / (x + 1/(x + 2/(x + 3/(x + ...)))), which keeps
/// exp(a) * Q(b) products computable as exp(a + log Q(b)) when a is huge.
inline double log_q_function(double x) {
  if (std::isnan(x)) return x;
  if (x == std::numeric_limits<double>::infinity()) {
    return -std::numeric_limits<double>::infinity();
  }
  if (x < -8.0) return std::log1p(-q_function(-x));
  if (x < 8.0) return std::log(q_function(x));

  constexpr int kTerms = 60;
  double tail = x;
  for (int n = kTerms; n >= 1; --n) tail = x + n / tail;
  constexpr double kLogSqrt2Pi = 0.91893853320467274178;
  return -0.5 * x * x - kLogSqrt2Pi - std::log(tail);
}

/// Inverse of Q on [0, 1]; Q^{-1}(0) = +inf and Q^{-1}(1) = -inf.
inline double q_inverse(double p) {
  if (p <= 0.0) return std::numeric_limits<double>::infinity();
  if (p >= 1.0) return -std::numeric_limits<double>::infinity();
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

}  // namespace covertsim
