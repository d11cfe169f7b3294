#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "covertsim/errors.hpp"

namespace covertsim {

using Count = std::int64_t;

/// Scenario parameters shared by every module.
///
/// Powers are linear units. sigma_w2 is never stated for the reference
/// figures; 1 is assumed. lambda_b and lambda_w are the Rayleigh power-gain
/// means toward Bob and Willie (unit in the reference model).
struct SystemConfig {
  Count M = 500;
  double P_max = 1.0;
  double sigma_b2 = 1.0;
  double sigma_w2 = 1.0;
  double lambda_b = 1.0;
  double lambda_w = 1.0;
  double epsilon = 0.05;
  double h_ab2 = 1.0;
};

inline void validate(const SystemConfig& c) {
  auto positive = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw ConfigError(std::string(name) + " must be a finite positive number");
    }
  };
  if (c.M < 1) throw ConfigError("M must be >= 1");
  positive(c.P_max, "P_max");
  positive(c.sigma_b2, "sigma_b2");
  positive(c.sigma_w2, "sigma_w2");
  positive(c.lambda_b, "lambda_b");
  positive(c.lambda_w, "lambda_w");
  if (!(c.epsilon > 0.0 && c.epsilon < 0.25)) {
    throw ConfigError("epsilon must lie in (0, 0.25)");
  }
  if (!(std::isfinite(c.h_ab2) && c.h_ab2 >= 0.0)) {
    throw ConfigError("h_ab2 must be a finite nonnegative number");
  }
}

}  // namespace covertsim
