#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "covertsim/config.hpp"
#include "covertsim/errors.hpp"
#include "covertsim/search.hpp"
#include "covertsim/special.hpp"

// Cooperator power allocation: the Gaussian-approximation detection error,
// the interference-power floor it implies, the relaxed linear program and
// the deployed on-off rule.

namespace covertsim {

struct PowerProfile {
  std::vector<double> powers;
  double omega = 0.0;   // sum of P_m^2
  double omega1 = 0.0;  // sum of P_m
};

inline PowerProfile make_profile(std::vector<double> powers) {
  PowerProfile p;
  p.powers = std::move(powers);
  for (double v : p.powers) {
    p.omega += v * v;
    p.omega1 += v;
  }
  return p;
}

/// Interference Bob sees from a profile: sum_m P_m |h_mb|^2.
inline double bob_interference(const PowerProfile& profile, std::span<const double> gains_mb) {
  double total = 0.0;
  for (std::size_t m = 0; m < profile.powers.size(); ++m) total += profile.powers[m] * gains_mb[m];
  return total;
}

/// zeta = alpha + Q((P_a - sqrt(Omega) Q^{-1}(alpha)) / sqrt(Omega + P_a^2)),
/// the detection error at false-alarm level alpha when both hypotheses are
/// replaced by Gaussians with matched moments.
inline double dep_gaussian(double alpha, double Omega, double P_a) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("dep_gaussian: alpha must lie in [0, 1]");
  if (Omega < 0.0) throw DomainError("dep_gaussian: Omega must be >= 0");
  if (!(P_a > 0.0)) throw DomainError("dep_gaussian: P_a must be > 0");
  const double shift = Omega == 0.0 ? 0.0 : std::sqrt(Omega) * q_inverse(alpha);
  return alpha + q_function((P_a - shift) / std::sqrt(Omega + P_a * P_a));
}

struct GaussianMinDep {
  double zeta_min = 0.0;
  double alpha_star = 0.0;
};

/// Minimum of dep_gaussian over alpha: golden-section search, checked
/// against a dense grid in case the curve is not unimodal.
inline GaussianMinDep min_dep_gaussian(double Omega, double P_a) {
  constexpr double kLo = 1e-9;
  constexpr double kHi = 1.0 - 1e-9;
  constexpr std::size_t kGridPoints = 10000;
  auto f = [&](double a) { return dep_gaussian(a, Omega, P_a); };

  ScalarOptimum best = golden_section_minimize(f, kLo, kHi, 1e-9);
  std::size_t best_cell = kGridPoints;
  const auto grid = linspace(kLo, kHi, kGridPoints);
  double grid_best = best.value;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = f(grid[i]);
    if (v < grid_best) {
      grid_best = v;
      best_cell = i;
    }
  }
  if (best_cell != kGridPoints) {
    const double lo = grid[best_cell == 0 ? 0 : best_cell - 1];
    const double hi = grid[std::min(best_cell + 1, grid.size() - 1)];
    ScalarOptimum local = golden_section_minimize(f, lo, hi, 1e-12);
    best = local.value < grid_best ? local : ScalarOptimum{grid[best_cell], grid_best};
  }
  return {best.value, best.x};
}

/// Smallest interference power Omega keeping min_dep_gaussian >= 1 - eps,
/// by bisection (min_dep_gaussian increases with Omega).
inline double omega_floor(double P_a, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.25)) throw DomainError("omega_floor: epsilon must lie in (0, 0.25)");
  const double target = 1.0 - epsilon;
  auto gap = [&](double omega) { return min_dep_gaussian(omega, P_a).zeta_min - target; };
  if (gap(0.0) >= 0.0) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  while (gap(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw NoSolution("omega_floor: target 1 - eps is not reachable");
  }
  while (hi - lo > 1e-7 * hi) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) < 0.0 ? lo : hi) = mid;
  }
  return hi;
}

/// Linear relaxation budget sum_m P_m >= sqrt(M delta); by Cauchy-Schwarz
/// any profile meeting it also meets sum_m P_m^2 >= delta.
inline double relaxed_budget(Count M, double delta) {
  return std::sqrt(static_cast<double>(M) * delta);
}

/// Exact optimum of
///   min sum_m P_m |h_mb|^2  s.t.  sum_m P_m >= budget, 0 <= P_m <= P_max.
/// Greedy fill in ascending gain order; the marginal user takes the
/// fractional remainder.
inline PowerProfile lp_optimal_profile(std::span<const double> gains_mb, double budget, double P_max) {
  const double capacity = static_cast<double>(gains_mb.size()) * P_max;
  if (budget > capacity * (1.0 + 1e-12)) {
    throw InfeasibleCover("lp_optimal_profile: budget " + std::to_string(budget) +
                          " exceeds M * P_max = " + std::to_string(capacity));
  }
  std::vector<std::size_t> order(gains_mb.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return gains_mb[a] < gains_mb[b]; });

  std::vector<double> powers(gains_mb.size(), 0.0);
  double remaining = std::max(budget, 0.0);
  for (std::size_t idx : order) {
    if (remaining <= 0.0) break;
    const double p = std::min(P_max, remaining);
    powers[idx] = p;
    remaining -= p;
  }
  return make_profile(std::move(powers));
}

/// On-off rule: full power iff |h_mb|^2 <= tau.
inline PowerProfile onoff_profile(std::span<const double> gains_mb, double tau, double P_max) {
  std::vector<double> powers(gains_mb.size(), 0.0);
  for (std::size_t m = 0; m < gains_mb.size(); ++m) {
    if (gains_mb[m] <= tau) powers[m] = P_max;
  }
  return make_profile(std::move(powers));
}

}  // namespace covertsim
