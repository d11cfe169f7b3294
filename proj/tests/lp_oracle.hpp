#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

// Brute-force reference for
//   min sum_m P_m g_m  s.t.  sum_m P_m >= budget, P_m in {0, step, ..., P_max}.
// Dynamic program over the running power sum in units of `step`; every
// grid profile is covered, so this is exhaustive over the grid.
struct GridLpResult {
  double objective = std::numeric_limits<double>::infinity();
  std::vector<double> powers;
};

inline GridLpResult grid_lp_optimum(std::span<const double> gains, double budget, double P_max,
                                    double step = 0.01) {
  const auto levels = static_cast<int>(std::lround(P_max / step));
  const auto need = static_cast<int>(std::ceil(budget / step - 1e-9));
  const auto M = gains.size();
  const double inf = std::numeric_limits<double>::infinity();
  // cost[m][s]: best objective using users m.. with s more units still required (capped at 0).
  std::vector<std::vector<double>> cost(M + 1, std::vector<double>(need + 1, inf));
  std::vector<std::vector<int>> choice(M + 1, std::vector<int>(need + 1, 0));
  cost[M][0] = 0.0;
  for (std::size_t m = M; m-- > 0;) {
    for (int s = 0; s <= need; ++s) {
      for (int u = 0; u <= levels; ++u) {
        const int rest = std::max(0, s - u);
        const double c = cost[m + 1][rest] + u * step * gains[m];
        if (c < cost[m][s]) {
          cost[m][s] = c;
          choice[m][s] = u;
        }
      }
    }
  }
  GridLpResult out;
  out.objective = cost[0][need];
  if (out.objective == inf) return out;
  int s = need;
  for (std::size_t m = 0; m < M; ++m) {
    const int u = choice[m][s];
    out.powers.push_back(u * step);
    s = std::max(0, s - u);
  }
  return out;
}

/// True when, in ascending-gain order, the profile is full power, then at
/// most one entry strictly between 0 and P_max, then zeros.
inline bool is_sorted_prefix(std::span<const double> gains, std::span<const double> powers, double P_max,
                             double tol = 1e-12) {
  std::vector<std::size_t> order(gains.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return gains[a] < gains[b] || (gains[a] == gains[b] && a < b);
  });
  int stage = 0;  // 0: full, 1: after the fractional entry, 2: zeros
  for (std::size_t idx : order) {
    const double p = powers[idx];
    const bool full = std::abs(p - P_max) <= tol;
    const bool zero = std::abs(p) <= tol;
    if (full) {
      if (stage != 0) return false;
    } else if (zero) {
      stage = 2;
    } else {
      if (stage != 0) return false;
      stage = 1;
    }
  }
  return true;
}
