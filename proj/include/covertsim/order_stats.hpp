#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "covertsim/config.hpp"
#include "covertsim/errors.hpp"
#include "covertsim/rng.hpp"

namespace covertsim {

/// Moments of S = sum of the K smallest of M unit-exponential variates.
///
/// By the Renyi representation S = sum_j deltas[j] * y_j with y_j iid
/// Exp(1) and deltas[j] = (K - j) / (M - j) for j = 0..K-1.
struct OrderMoments {
  double mu = 0.0;
  double xi2 = 0.0;
  std::vector<double> deltas;

  double xi() const { return std::sqrt(xi2); }
};

inline OrderMoments order_stat_moments(Count M, Count K) {
  if (M < 1) throw DomainError("order_stat_moments: M must be >= 1");
  if (K < 0) throw DomainError("order_stat_moments: K must be >= 0");
  if (K > M) {
    throw InfeasibleCover("order_stat_moments: K = " + std::to_string(K) +
                          " exceeds M = " + std::to_string(M));
  }
  OrderMoments out;
  out.deltas.reserve(static_cast<std::size_t>(K));
  for (Count j = 0; j < K; ++j) {
    const double d = static_cast<double>(K - j) / static_cast<double>(M - j);
    out.deltas.push_back(d);
    out.mu += d;
    out.xi2 += d * d;
  }
  return out;
}

/// Closed-form approximation mu ~ K(K+1)/(2M), accurate for K << M.
inline double mu_approximation(Count M, Count K) {
  return static_cast<double>(K) * static_cast<double>(K + 1) / (2.0 * static_cast<double>(M));
}

/// One draw of the sum of the K smallest of M unit exponentials, through
/// the Renyi representation (K exponential draws, no sorting).
inline double sample_sum_k_smallest(Count M, Count K, RandomStream& rng) {
  if (K < 1) throw DomainError("sample_sum_k_smallest: K must be >= 1");
  if (K > M) throw InfeasibleCover("sample_sum_k_smallest: K exceeds M");
  double sum = 0.0;
  for (Count j = 0; j < K; ++j) {
    sum += static_cast<double>(K - j) / static_cast<double>(M - j) * rng.exponential(1.0);
  }
  return sum;
}

/// Sum of the k smallest entries; reorders `values` in place.
inline double sum_of_smallest(std::span<double> values, Count k) {
  if (k <= 0) return 0.0;
  if (static_cast<std::size_t>(k) > values.size()) {
    throw InfeasibleCover("sum_of_smallest: k exceeds the number of values");
  }
  auto kth = values.begin() + (k - 1);
  std::nth_element(values.begin(), kth, values.end());
  return std::accumulate(values.begin(), kth + 1, 0.0);
}

}  // namespace covertsim
