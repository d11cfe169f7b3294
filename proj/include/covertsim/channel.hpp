#pragma once

#include <cstdint>
#include <vector>

#include "covertsim/config.hpp"
#include "covertsim/rng.hpp"

namespace covertsim {

/// One quasi-static realization of the power gains on Alice's band.
struct ChannelDraw {
  std::vector<double> gains_mb;  // user m -> Bob
  std::vector<double> gains_mw;  // user m -> Willie
  double gain_aw = 0.0;          // Alice -> Willie
  std::uint64_t seed_tag = 0;    // substream that produced the draw
};

/// Rayleigh fading: |h|^2 is exponential with mean lambda.
inline ChannelDraw sample_channel_draw(const SystemConfig& config, RandomStream& rng) {
  ChannelDraw draw;
  draw.seed_tag = rng.substream();
  const auto m = static_cast<std::size_t>(config.M);
  draw.gains_mb.resize(m);
  draw.gains_mw.resize(m);
  for (auto& g : draw.gains_mb) g = rng.exponential(config.lambda_b);
  for (auto& g : draw.gains_mw) g = rng.exponential(config.lambda_w);
  draw.gain_aw = rng.exponential(config.lambda_w);
  return draw;
}

}  // namespace covertsim
