#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "covertsim/config.hpp"
#include "covertsim/errors.hpp"
#include "covertsim/special.hpp"

// Willie-side closed forms for the energy detector facing K on-off
// cooperators at full power.

namespace covertsim {

/// Covertness constant c_eps = (1/eps^2 - 8 + 16 eps^2) / (2 pi).
inline double c_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.25)) {
    throw DomainError("c_epsilon: epsilon must lie in (0, 0.25)");
  }
  const double e2 = epsilon * epsilon;
  return (1.0 / e2 - 8.0 + 16.0 * e2) / (2.0 * std::numbers::pi);
}

/// Detection error probability P_FA + P_MD at threshold `gamma` with the
/// aggregate cooperator interference replaced by its Gaussian (CLT) limit
/// and Alice's term kept exponential.
inline double dep_analytic(double gamma, Count K, double P_a, double P_max, double sigma_w2) {
  if (!(P_a > 0.0)) throw DomainError("dep_analytic: P_a must be > 0 (H1 transmits)");
  if (K < 1) throw DomainError("dep_analytic: K must be >= 1");
  if (!(P_max > 0.0)) throw DomainError("dep_analytic: P_max must be > 0");
  const double k = static_cast<double>(K);
  const double sqrt_k = std::sqrt(k);
  const double g_bar = gamma - sigma_w2;
  const double exponent =
      k * (P_max * P_max + 2.0 * P_a * P_max) / (2.0 * P_a * P_a) - g_bar / P_a;
  const double q_arg = sqrt_k * (P_max + P_a) / P_a - g_bar / (P_max * sqrt_k);
  return 1.0 - std::exp(exponent + log_q_function(q_arg));
}

/// Threshold minimizing the detection error probability: K P_max + sigma_w^2.
inline double optimal_threshold(Count K, double P_max, double sigma_w2) {
  return static_cast<double>(K) * P_max + sigma_w2;
}

struct MinDep {
  double zeta = 0.0;
  // Set outside K P_max^2 > 2 P_a^2, where the erfc bound behind the
  // closed form is not justified.
  bool approximate = false;
};

/// Minimum detection error probability
/// 1 - 1 / (sqrt(pi) (sqrt(X) + sqrt(X + 4/pi))), X = K P_max^2 / (2 P_a^2).
///
/// K = 0 returns 0: with no interference and a known noise floor the
/// asymptotic statistic separates the hypotheses perfectly.
/// P_a = 0 returns 1 (nothing to detect).
inline MinDep min_dep(Count K, double P_a, double P_max) {
  if (K < 0) throw DomainError("min_dep: K must be >= 0");
  if (P_a < 0.0) throw DomainError("min_dep: P_a must be >= 0");
  if (!(P_max > 0.0)) throw DomainError("min_dep: P_max must be > 0");
  if (P_a == 0.0) return {1.0, false};
  if (K == 0) return {0.0, false};
  const double k = static_cast<double>(K);
  const double x = k * P_max * P_max / (2.0 * P_a * P_a);
  const double zeta =
      1.0 - 1.0 / (std::sqrt(std::numbers::pi) * (std::sqrt(x) + std::sqrt(x + 4.0 / std::numbers::pi)));
  return {zeta, !(k * P_max * P_max > 2.0 * P_a * P_a)};
}

/// dep_analytic evaluated at optimal_threshold, before the erfc bound:
/// 1 - exp(X) Q(sqrt(2X)) = 1 - exp(X) erfc(sqrt(X)) / 2.
inline double min_dep_exact(Count K, double P_a, double P_max) {
  if (K < 1) throw DomainError("min_dep_exact: K must be >= 1");
  if (!(P_a > 0.0)) throw DomainError("min_dep_exact: P_a must be > 0");
  const double x = static_cast<double>(K) * P_max * P_max / (2.0 * P_a * P_a);
  return 1.0 - std::exp(x + log_q_function(std::sqrt(2.0 * x)));
}

/// Cooperator count P_a^2 c_eps / P_max^2 before rounding up.
inline double k_min_real(double P_a, double P_max, double epsilon) {
  if (P_a < 0.0) throw DomainError("k_min: P_a must be >= 0");
  if (!(P_max > 0.0)) throw DomainError("k_min: P_max must be > 0");
  return P_a * P_a * c_epsilon(epsilon) / (P_max * P_max);
}

/// Fewest cooperators keeping min_dep >= 1 - eps.
inline Count k_min(double P_a, double P_max, double epsilon) {
  const double k = k_min_real(P_a, P_max, epsilon);
  if (k >= static_cast<double>(std::numeric_limits<Count>::max())) {
    throw InfeasibleCover("k_min: cooperator count overflows");
  }
  return static_cast<Count>(std::ceil(k));
}

/// Indices of the k weakest users toward Bob, ordered by (gain, index).
inline std::vector<std::size_t> select_cooperators(std::span<const double> gains_mb, Count k) {
  if (k < 0) throw DomainError("select_cooperators: k must be >= 0");
  if (static_cast<std::size_t>(k) > gains_mb.size()) {
    throw InfeasibleCover("select_cooperators: k = " + std::to_string(k) + " exceeds M = " +
                          std::to_string(gains_mb.size()));
  }
  std::vector<std::size_t> order(gains_mb.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gains_mb[a] < gains_mb[b]; });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

/// Activation threshold Bob broadcasts: the k-th smallest gain toward Bob.
/// k = 0 yields -inf so nobody activates.
inline double activation_threshold(std::span<const double> gains_mb, Count k) {
  if (k < 0) throw DomainError("activation_threshold: k must be >= 0");
  if (k == 0) return -std::numeric_limits<double>::infinity();
  if (static_cast<std::size_t>(k) > gains_mb.size()) {
    throw InfeasibleCover("activation_threshold: k = " + std::to_string(k) + " exceeds M = " +
                          std::to_string(gains_mb.size()));
  }
  std::vector<double> sorted(gains_mb.begin(), gains_mb.end());
  auto kth = sorted.begin() + (k - 1);
  std::nth_element(sorted.begin(), kth, sorted.end());
  return *kth;
}

}  // namespace covertsim
