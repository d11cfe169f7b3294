#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "covertsim/config.hpp"
#include "covertsim/detection.hpp"
#include "covertsim/errors.hpp"
#include "covertsim/order_stats.hpp"
#include "covertsim/search.hpp"
#include "covertsim/special.hpp"

namespace covertsim {

/// Intermediates of the connection-probability and covert-rate closed forms.
///
/// mu and xi are the order-statistic moments for unit-mean gains; theta
/// and kappa fold in lambda_b, so they describe the configured channel.
struct DerivedCoefficients {
  double mu = 0.0;
  double xi = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
  double psi = 0.0;
  double c_eps = 0.0;
};

inline DerivedCoefficients derived_coefficients(double P_a, Count k, const SystemConfig& config) {
  if (k < 1) throw DomainError("derived_coefficients: needs at least one cooperator");
  const OrderMoments moments = order_stat_moments(config.M, k);
  DerivedCoefficients d;
  d.mu = moments.mu;
  d.xi = moments.xi();
  const double spread = config.lambda_b * d.xi * config.P_max;
  d.theta = (config.lambda_b * d.mu * config.P_max + config.sigma_b2) / spread;
  d.kappa = P_a * config.h_ab2 / spread;
  d.psi = 2.0 * std::log(std::sqrt(2.0 * std::numbers::pi) / (2.0 * d.theta));
  d.c_eps = c_epsilon(config.epsilon);
  return d;
}

namespace detail {

inline double connection_probability(double R, double P_a, Count k, const OrderMoments& moments,
                                     const SystemConfig& config) {
  if (R <= 0.0) return 1.0;
  const double r = std::expm1(R * std::numbers::ln2);
  const double signal = P_a * config.h_ab2;
  if (k == 0) return signal / config.sigma_b2 >= r ? 1.0 : 0.0;
  const double spread = config.lambda_b * moments.xi() * config.P_max;
  const double arg =
      (config.lambda_b * moments.mu * config.P_max + config.sigma_b2 - signal / r) / spread;
  return q_function(arg);
}

}  // namespace detail

/// Pr(log2(1 + SINR) >= R) with the k weakest users interfering at P_max
/// and their summed gain replaced by a Gaussian with the order-statistic
/// moments. k = 0 reduces to a deterministic SNR test.
inline double connection_probability(double R, double P_a, Count k, const SystemConfig& config) {
  return detail::connection_probability(R, P_a, k, order_stat_moments(config.M, k), config);
}

struct RateOptimum {
  double R = 0.0;
  double eta = 0.0;
  std::string method;
};

/// Throughput-maximizing covert rate log2(1 + kappa / (theta + sqrt(-psi))).
/// Defined only where psi < 0, i.e. theta > sqrt(2 pi) / 2.
inline RateOptimum max_covert_rate(double P_a, Count k, const SystemConfig& config) {
  const DerivedCoefficients d = derived_coefficients(P_a, k, config);
  if (!(d.psi < 0.0)) {
    throw DomainError("max_covert_rate: requires theta > sqrt(2 pi)/2 (psi < 0); theta = " +
                      std::to_string(d.theta));
  }
  const double root = std::sqrt(-d.psi);
  const double R = std::log1p(d.kappa / (d.theta + root)) / std::numbers::ln2;
  return {R, R * q_function(-root), "closed-form"};
}

struct RateGrid {
  double upper = 1.0;
  std::size_t points = 10000;
};

/// R range (0, log2(1 + P_a |h_ab|^2 / sigma_b^2)]: no rate above the
/// interference-free capacity can connect.
inline RateGrid default_rate_grid(double P_a, const SystemConfig& config) {
  return {std::log1p(P_a * config.h_ab2 / config.sigma_b2) / std::numbers::ln2, 10000};
}

/// Grid maximization of R * connection_probability(R) plus one
/// golden-section pass inside the winning cell's neighbours.
inline RateOptimum numeric_rate_argmax(double P_a, Count k, const SystemConfig& config,
                                       const RateGrid& grid) {
  if (grid.points < 2 || !(grid.upper > 0.0)) throw DomainError("numeric_rate_argmax: bad grid");
  const OrderMoments moments = order_stat_moments(config.M, k);
  auto eta = [&](double R) {
    return R * detail::connection_probability(R, P_a, k, moments, config);
  };

  std::vector<double> rates(grid.points);
  std::vector<double> values(grid.points);
  for (std::size_t i = 0; i < grid.points; ++i) {
    rates[i] = grid.upper * static_cast<double>(i + 1) / static_cast<double>(grid.points);
    values[i] = eta(rates[i]);
  }
  const std::size_t best = argmax_first(values);
  RateOptimum out{rates[best], values[best], "numeric-grid"};

  const double lo = best == 0 ? 0.0 : rates[best - 1];
  const double hi = best + 1 < rates.size() ? rates[best + 1] : rates[best];
  const ScalarOptimum refined = golden_section_maximize(eta, lo, hi, 1e-12 * grid.upper);
  if (refined.value > out.eta) out = {refined.x, refined.value, "numeric-grid+golden"};
  return out;
}

struct ThroughputResult {
  Count K_min = 0;
  std::optional<DerivedCoefficients> coefficients;
  double R_max = 0.0;
  double eta_max = 0.0;
  double connection_at_rmax = 0.0;
  std::string method;
};

/// Peak throughput for Alice power P_a with K_min cooperators:
/// log2(1 + kappa/(theta + sqrt(-psi))) * Q(-sqrt(-psi)).
///
/// Outside psi < 0 this throws unless `allow_numeric_fallback`, in which
/// case the rate comes from numeric_rate_argmax and `method` says so.
inline ThroughputResult max_throughput(double P_a, const SystemConfig& config,
                                       bool allow_numeric_fallback = false) {
  if (!(P_a >= 0.0 && P_a <= config.P_max)) {
    throw DomainError("max_throughput: P_a must lie in [0, P_max]");
  }
  ThroughputResult out;
  out.K_min = k_min(P_a, config.P_max, config.epsilon);
  if (out.K_min > config.M) {
    throw InfeasibleCover("max_throughput: K_min = " + std::to_string(out.K_min) +
                          " exceeds M = " + std::to_string(config.M));
  }
  if (P_a == 0.0) {
    out.method = "no-transmission";
    return out;
  }
  out.coefficients = derived_coefficients(P_a, out.K_min, config);
  const DerivedCoefficients& d = *out.coefficients;
  if (d.psi < 0.0) {
    const double root = std::sqrt(-d.psi);
    out.R_max = std::log1p(d.kappa / (d.theta + root)) / std::numbers::ln2;
    out.eta_max = out.R_max * q_function(-root);
    out.method = "closed-form";
  } else if (allow_numeric_fallback) {
    const RateOptimum opt = numeric_rate_argmax(P_a, out.K_min, config, default_rate_grid(P_a, config));
    out.R_max = opt.R;
    out.eta_max = opt.eta;
    out.method = "numeric-fallback";
  } else {
    throw DomainError("max_throughput: requires theta > sqrt(2 pi)/2 (psi < 0); theta = " +
                      std::to_string(d.theta));
  }
  out.connection_at_rmax = connection_probability(out.R_max, P_a, out.K_min, config);
  return out;
}

/// Throughput per unit of total transmit power (Alice plus cooperators).
inline double energy_efficiency(double P_a, const SystemConfig& config,
                                bool allow_numeric_fallback = false) {
  if (!(P_a > 0.0)) throw DomainError("energy_efficiency: P_a must be > 0");
  const ThroughputResult t = max_throughput(P_a, config, allow_numeric_fallback);
  return t.eta_max / (static_cast<double>(t.K_min) * config.P_max + P_a);
}

struct DesignSolution {
  double P_a_star = 0.0;
  Count K_min = 0;
  std::optional<double> tau;  // per channel draw
  double gamma_star = 0.0;
  double zeta_min = 0.0;
  bool zeta_min_approximate = false;
  double R_max = 0.0;
  double eta_max = 0.0;
  double E_eff = 0.0;
  double total_power = 0.0;
  std::map<std::string, std::string> method_tags;
};

enum class DesignObjective { kThroughput, kEnergyEfficiency };

/// Fills every dependent field of a design at Alice power P_a.
inline DesignSolution evaluate_design(double P_a, const SystemConfig& config) {
  const ThroughputResult t = max_throughput(P_a, config, true);
  DesignSolution s;
  s.P_a_star = P_a;
  s.K_min = t.K_min;
  s.gamma_star = optimal_threshold(t.K_min, config.P_max * config.lambda_w, config.sigma_w2);
  const MinDep md = min_dep(t.K_min, P_a, config.P_max);
  s.zeta_min = md.zeta;
  s.zeta_min_approximate = md.approximate;
  s.R_max = t.R_max;
  s.eta_max = t.eta_max;
  s.total_power = static_cast<double>(t.K_min) * config.P_max + P_a;
  s.E_eff = P_a > 0.0 ? t.eta_max / s.total_power : 0.0;
  s.method_tags = {
      {"K_min", "ceil(P_a^2 c_eps / P_max^2)"},
      {"gamma_star", "K_min P_max lambda_w + sigma_w2"},
      {"zeta_min", md.approximate ? "erfc-bound (approximate regime)" : "erfc-bound"},
      {"R_max", t.method},
      {"eta_max", t.method},
  };
  return s;
}

namespace detail {

inline double design_objective(double P_a, const SystemConfig& config, DesignObjective objective) {
  try {
    const ThroughputResult t = max_throughput(P_a, config, true);
    // At a band edge the covertness margin is exactly zero in real
    // arithmetic; reject points that round below it.
    if (min_dep(t.K_min, P_a, config.P_max).zeta < 1.0 - config.epsilon) {
      return -std::numeric_limits<double>::infinity();
    }
    if (objective == DesignObjective::kThroughput) return t.eta_max;
    return t.eta_max / (static_cast<double>(t.K_min) * config.P_max + P_a);
  } catch (const InfeasibleCover&) {
    return -std::numeric_limits<double>::infinity();
  }
}

}  // namespace detail

inline constexpr std::size_t kPaGridPoints = 2001;

/// One-dimensional search over Alice's power: 2001-point uniform grid on
/// (0, P_max], the right edge of every K_min band the grid crosses, then
/// golden-section refinement around the best candidate.
/// The objective jumps down wherever ceil() adds a cooperator, so a pure
/// golden-section search over the whole range is not safe.
inline DesignSolution optimize_pa(const SystemConfig& config, DesignObjective objective) {
  validate(config);
  std::vector<double> grid(kPaGridPoints);
  std::vector<double> values(kPaGridPoints);
  for (std::size_t i = 0; i < kPaGridPoints; ++i) {
    grid[i] = config.P_max * static_cast<double>(i + 1) / static_cast<double>(kPaGridPoints);
    values[i] = detail::design_objective(grid[i], config, objective);
  }
  const std::size_t best = argmax_first(values);
  if (best == values.size()) {
    throw InfeasibleCover("optimize_pa: every P_a on the grid needs more than M = " +
                          std::to_string(config.M) + " cooperators");
  }

  double P_a = grid[best];
  double best_value = values[best];
  std::string how = "grid-2001";

  // Within a band of constant K_min both objectives rise with P_a, so each
  // band peaks at its right edge, which the grid can miss by up to a step.
  // Score the exact edge of every band the grid crosses.
  const double c_eps = c_epsilon(config.epsilon);
  for (std::size_t i = 0; i + 1 < kPaGridPoints; ++i) {
    const Count k = k_min(grid[i], config.P_max, config.epsilon);
    if (k == k_min(grid[i + 1], config.P_max, config.epsilon)) continue;
    double edge = config.P_max * std::sqrt(static_cast<double>(k) / c_eps);
    while (edge > grid[i] && (k_min(edge, config.P_max, config.epsilon) > k ||
                              min_dep(k, edge, config.P_max).zeta < 1.0 - config.epsilon)) {
      edge = std::nextafter(edge, 0.0);
    }
    const double v = detail::design_objective(edge, config, objective);
    if (v > best_value) {
      best_value = v;
      P_a = edge;
      how = "grid-2001+band-edge";
    }
  }
  const auto cell = static_cast<std::size_t>(
      std::lower_bound(grid.begin(), grid.end(), P_a) - grid.begin());
  const double lo = cell == 0 ? 0.0 : grid[cell - 1];
  const double hi = cell + 1 < grid.size() ? grid[cell + 1] : grid[cell];
  auto f = [&](double x) {
    if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
    return detail::design_objective(x, config, objective);
  };
  const ScalarOptimum refined = golden_section_maximize(f, lo, hi, 1e-12 * config.P_max);
  if (refined.value > best_value) {
    P_a = refined.x;
    how += "+golden";
  }

  DesignSolution s = evaluate_design(P_a, config);
  s.method_tags["P_a_star"] = how;
  s.method_tags["objective"] =
      objective == DesignObjective::kThroughput ? "throughput" : "energy-efficiency";
  return s;
}

inline DesignSolution optimize_pa_throughput(const SystemConfig& config) {
  return optimize_pa(config, DesignObjective::kThroughput);
}

inline DesignSolution optimize_pa_energy(const SystemConfig& config) {
  return optimize_pa(config, DesignObjective::kEnergyEfficiency);
}

// Closed-form approximations obtained with mu ~ K(K+1)/(2M), log(1+r) ~ r
// and the ceiling dropped.

/// Upsilon = (sqrt(24 M sigma_b^2 / P_max + 1) - 1) / 6.
inline double upsilon(const SystemConfig& config) {
  return (std::sqrt(24.0 * static_cast<double>(config.M) * config.sigma_b2 / config.P_max + 1.0) - 1.0) /
         6.0;
}

inline double pa_star_closed_form(const SystemConfig& config) {
  const double c = c_epsilon(config.epsilon);
  return std::min(config.P_max * std::sqrt(upsilon(config) / c), config.P_max);
}

inline Count k_star_closed_form(const SystemConfig& config) {
  const double u = upsilon(config);
  const double c = c_epsilon(config.epsilon);
  return static_cast<Count>(std::ceil(u <= c ? u : c));
}

/// Covert-constraint level 1 - eps below which the approximate optimum
/// saturates at P_a = P_max: xi = 1 - (-rho + sqrt(rho^2 + 16)) / 8 with
/// rho = sqrt(2 pi Upsilon).
inline double cross_point(const SystemConfig& config) {
  const double rho = std::sqrt(2.0 * std::numbers::pi * upsilon(config));
  return 1.0 - (-rho + std::sqrt(rho * rho + 16.0)) / 8.0;
}

/// eta_max ~ P_a |h_ab|^2 / (2 ln 2 (P_max K(K+1)/(2M) + sigma_b^2)).
inline double throughput_simplified(double P_a, const SystemConfig& config) {
  if (P_a <= 0.0) return 0.0;
  const Count K = k_min(P_a, config.P_max, config.epsilon);
  const double interference = config.P_max * mu_approximation(config.M, K);
  return P_a * config.h_ab2 / (2.0 * std::numbers::ln2 * (interference + config.sigma_b2));
}

}  // namespace covertsim
