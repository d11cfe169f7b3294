#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "covertsim/config.hpp"
#include "covertsim/errors.hpp"
#include "covertsim/order_stats.hpp"
#include "covertsim/rng.hpp"
#include "covertsim/search.hpp"

// Stochastic oracles for the closed forms. Trials are cut into fixed-size
// chunks; chunk c draws from substream (substream_base + c), so results do
// not depend on how many worker threads run the chunks.

namespace covertsim {

struct GammaGrid {
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 0;
};

struct SimulationParams {
  std::int64_t trials = 1'000'000;
  std::optional<GammaGrid> gamma_grid;
  std::optional<std::int64_t> finite_N;  // codeword length; unset = N -> infinity
  std::uint64_t seed = 42;
  std::uint64_t substream_base = 0;
};

inline void validate(const SimulationParams& p) {
  if (p.trials < 1000) throw ConfigError("trials must be >= 1000");
  if (p.gamma_grid) {
    if (p.gamma_grid->points < 2) throw ConfigError("gamma_grid needs at least 2 points");
    if (!(p.gamma_grid->min < p.gamma_grid->max)) throw ConfigError("gamma_grid needs min < max");
  }
  if (p.finite_N && *p.finite_N < 1) throw ConfigError("finite_N must be >= 1");
}

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t substream_base = 0;
};

inline constexpr std::int64_t kChunkTrials = 1 << 15;

/// Runs fn(stream, begin, end) for every chunk of [0, trials).
template <typename Fn>
void for_each_chunk(const SimulationParams& p, Fn&& fn) {
  const std::int64_t chunks = (p.trials + kChunkTrials - 1) / kChunkTrials;
  auto run = [&](std::int64_t c) {
    RandomStream stream(p.seed, p.substream_base + static_cast<std::uint64_t>(c));
    const std::int64_t begin = c * kChunkTrials;
    fn(stream, begin, std::min(begin + kChunkTrials, p.trials));
  };
  const auto workers = static_cast<std::int64_t>(std::min<std::uint64_t>(
      std::max(1u, std::thread::hardware_concurrency()), static_cast<std::uint64_t>(chunks)));
  if (workers <= 1) {
    for (std::int64_t c = 0; c < chunks; ++c) run(c);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::int64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::int64_t c = next++; c < chunks; c = next++) run(c);
    });
  }
}

/// chi^2_{2N} / (2N): sum of 2N squared normals up to N = 1000, the
/// equivalent Gamma(N, 1/N) draw above.
inline double sample_chi2_ratio(std::int64_t N, RandomStream& rng) {
  if (N <= 1000) {
    double s = 0.0;
    for (std::int64_t i = 0; i < 2 * N; ++i) {
      const double z = rng.normal();
      s += z * z;
    }
    return s / (2.0 * static_cast<double>(N));
  }
  return rng.gamma(static_cast<double>(N), 1.0 / static_cast<double>(N));
}

/// Willie's energy statistic under both hypotheses, one pair per trial,
/// stored sorted so any threshold is evaluated by binary search.
struct DetectorSamples {
  std::vector<double> h0;
  std::vector<double> h1;
  // Asymptotic mode reuses the H0 draw inside H1 (T1 >= T0), so the
  // false-alarm and miss events are disjoint and their sum is Bernoulli.
  bool disjoint_events = true;

  std::int64_t trials() const { return static_cast<std::int64_t>(h0.size()); }

  double false_alarm(double gamma) const {
    const auto above = h0.end() - std::upper_bound(h0.begin(), h0.end(), gamma);
    return static_cast<double>(above) / static_cast<double>(h0.size());
  }

  double miss(double gamma) const {
    const auto below = std::upper_bound(h1.begin(), h1.end(), gamma) - h1.begin();
    return static_cast<double>(below) / static_cast<double>(h1.size());
  }

  /// (zeta_hat, std_error) at threshold gamma.
  std::pair<double, double> zeta_at(double gamma) const {
    const double fa = false_alarm(gamma);
    const double md = miss(gamma);
    const double n = static_cast<double>(h0.size());
    const double zeta = fa + md;
    const double var = disjoint_events ? zeta * (1.0 - zeta) / n
                                       : (fa * (1.0 - fa) + md * (1.0 - md)) / n;
    return {zeta, std::sqrt(std::max(var, 0.0))};
  }
};

inline DetectorSamples sample_detector_statistics(Count K, double P_a, const SystemConfig& config,
                                                  const SimulationParams& params) {
  validate(params);
  if (K < 0) throw DomainError("sample_detector_statistics: K must be >= 0");
  DetectorSamples out;
  out.disjoint_events = !params.finite_N.has_value();
  out.h0.resize(static_cast<std::size_t>(params.trials));
  out.h1.resize(static_cast<std::size_t>(params.trials));
  for_each_chunk(params, [&](RandomStream& rng, std::int64_t begin, std::int64_t end) {
    for (std::int64_t t = begin; t < end; ++t) {
      double interference = 0.0;
      for (Count i = 0; i < K; ++i) interference += config.P_max * rng.exponential(config.lambda_w);
      double t0 = interference + config.sigma_w2;
      double t1 = t0 + P_a * rng.exponential(config.lambda_w);
      if (params.finite_N) {
        t0 *= sample_chi2_ratio(*params.finite_N, rng);
        t1 *= sample_chi2_ratio(*params.finite_N, rng);
      }
      out.h0[static_cast<std::size_t>(t)] = t0;
      out.h1[static_cast<std::size_t>(t)] = t1;
    }
  });
  std::sort(out.h0.begin(), out.h0.end());
  std::sort(out.h1.begin(), out.h1.end());
  return out;
}

/// Empirical detection error probability P_FA + P_MD at threshold gamma.
inline McEstimate simulate_dep(double gamma, Count K, double P_a, const SystemConfig& config,
                               const SimulationParams& params) {
  const DetectorSamples samples = sample_detector_statistics(K, P_a, config, params);
  const auto [zeta, se] = samples.zeta_at(gamma);
  return {zeta, se, params.trials, params.seed, params.substream_base};
}

struct MinDepEstimate {
  double gamma_hat = 0.0;
  double zeta_hat = 0.0;
  double std_error = 0.0;
  std::vector<double> gammas;
  std::vector<double> zetas;
};

/// Empirical minimum of the detection error over params.gamma_grid, every
/// grid point scored on the same draws. Ties go to the smaller threshold.
inline MinDepEstimate simulate_min_dep(Count K, double P_a, const SystemConfig& config,
                                       const SimulationParams& params) {
  if (!params.gamma_grid) throw DomainError("simulate_min_dep: gamma_grid is required");
  const DetectorSamples samples = sample_detector_statistics(K, P_a, config, params);
  MinDepEstimate out;
  out.gammas = linspace(params.gamma_grid->min, params.gamma_grid->max, params.gamma_grid->points);
  out.zetas.reserve(out.gammas.size());
  std::size_t best = 0;
  for (std::size_t i = 0; i < out.gammas.size(); ++i) {
    out.zetas.push_back(samples.zeta_at(out.gammas[i]).first);
    if (out.zetas[i] < out.zetas[best]) best = i;
  }
  out.gamma_hat = out.gammas[best];
  out.zeta_hat = out.zetas[best];
  out.std_error = samples.zeta_at(out.gamma_hat).second;
  return out;
}

enum class OrderSampler {
  kSort,   // draw all M gains, keep the k smallest
  kRenyi,  // k weighted exponentials (sample_sum_k_smallest)
};

/// Achieved covert-link rate log2(1 + SINR) per trial, sorted.
struct LinkRateSamples {
  std::vector<double> rates;

  double connection_at(double R) const {
    const auto ok = rates.end() - std::lower_bound(rates.begin(), rates.end(), R);
    return static_cast<double>(ok) / static_cast<double>(rates.size());
  }
};

inline LinkRateSamples sample_link_rates(double P_a, Count k, const SystemConfig& config,
                                         const SimulationParams& params,
                                         OrderSampler sampler = OrderSampler::kSort) {
  validate(params);
  if (k < 0) throw DomainError("sample_link_rates: k must be >= 0");
  if (k > config.M) throw InfeasibleCover("sample_link_rates: k exceeds M");
  LinkRateSamples out;
  out.rates.resize(static_cast<std::size_t>(params.trials));
  const double signal = P_a * config.h_ab2;
  for_each_chunk(params, [&](RandomStream& rng, std::int64_t begin, std::int64_t end) {
    std::vector<double> gains(static_cast<std::size_t>(config.M));
    for (std::int64_t t = begin; t < end; ++t) {
      double sum = 0.0;
      if (k > 0) {
        if (sampler == OrderSampler::kSort) {
          for (auto& g : gains) g = rng.exponential(config.lambda_b);
          sum = sum_of_smallest(gains, k);
        } else {
          sum = config.lambda_b * sample_sum_k_smallest(config.M, k, rng);
        }
      }
      const double sinr = signal / (config.P_max * sum + config.sigma_b2);
      out.rates[static_cast<std::size_t>(t)] = std::log1p(sinr) / std::numbers::ln2;
    }
  });
  std::sort(out.rates.begin(), out.rates.end());
  return out;
}

inline McEstimate simulate_connection(double R, double P_a, Count k, const SystemConfig& config,
                                      const SimulationParams& params,
                                      OrderSampler sampler = OrderSampler::kSort) {
  const LinkRateSamples samples = sample_link_rates(P_a, k, config, params, sampler);
  const double p = samples.connection_at(R);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(params.trials)), params.trials,
          params.seed, params.substream_base};
}

struct ThroughputPoint {
  double R = 0.0;
  double connection_hat = 0.0;
  double eta_hat = 0.0;
  double std_error = 0.0;  // of eta_hat
};

/// R * empirical connection probability over R_grid, one set of draws.
inline std::vector<ThroughputPoint> simulate_throughput_curve(double P_a, Count k,
                                                              const SystemConfig& config,
                                                              std::span<const double> R_grid,
                                                              const SimulationParams& params,
                                                              OrderSampler sampler = OrderSampler::kSort) {
  const LinkRateSamples samples = sample_link_rates(P_a, k, config, params, sampler);
  const double n = static_cast<double>(params.trials);
  std::vector<ThroughputPoint> out;
  out.reserve(R_grid.size());
  for (double R : R_grid) {
    const double p = samples.connection_at(R);
    out.push_back({R, p, R * p, R * std::sqrt(p * (1.0 - p) / n)});
  }
  return out;
}

}  // namespace covertsim
