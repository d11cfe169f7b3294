#include <algorithm>
#include <cmath>
#include <vector>

#include <catch_amalgamated.hpp>

#include "covertsim/channel.hpp"
#include "covertsim/config.hpp"
#include "covertsim/order_stats.hpp"
#include "covertsim/rng.hpp"

using namespace covertsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Moments {
  double mean = 0.0;
  double var = 0.0;
};

template <typename Draw>
Moments sample_moments(int n, Draw&& draw) {
  double s = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = draw();
    s += v;
    s2 += v * v;
  }
  const double mean = s / n;
  return {mean, (s2 - n * mean * mean) / (n - 1)};
}

}  // namespace

TEST_CASE("config validation") {
  SystemConfig c;
  CHECK_NOTHROW(validate(c));
  auto rejects = [](auto mutate) {
    SystemConfig bad;
    mutate(bad);
    CHECK_THROWS_AS(validate(bad), ConfigError);
  };
  rejects([](SystemConfig& x) { x.M = 0; });
  rejects([](SystemConfig& x) { x.P_max = 0.0; });
  rejects([](SystemConfig& x) { x.sigma_b2 = -1.0; });
  rejects([](SystemConfig& x) { x.sigma_w2 = 0.0; });
  rejects([](SystemConfig& x) { x.lambda_b = 0.0; });
  rejects([](SystemConfig& x) { x.lambda_w = std::nan(""); });
  rejects([](SystemConfig& x) { x.epsilon = 0.0; });
  rejects([](SystemConfig& x) { x.epsilon = 0.25; });
  rejects([](SystemConfig& x) { x.h_ab2 = -0.1; });
  c.h_ab2 = 0.0;
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("substream seeds are distinct and stable") {
  CHECK(substream_seed(42, 0) == substream_seed(42, 0));
  CHECK(substream_seed(42, 0) != substream_seed(42, 1));
  CHECK(substream_seed(42, 0) != substream_seed(43, 0));
  RandomStream a(42, 7);
  RandomStream b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.exponential(1.0) == b.exponential(1.0));
}

TEST_CASE("distinct substreams are uncorrelated") {
  RandomStream a(42, 0);
  RandomStream b(42, 1);
  const int n = 100000;
  double sab = 0.0;
  for (int i = 0; i < n; ++i) sab += a.normal() * b.normal();
  CHECK(std::abs(sab / n) < 4.0 / std::sqrt(n));
}

TEST_CASE("channel draw shape and means") {
  SystemConfig c;
  c.M = 1;
  RandomStream rng(42, 0);
  const ChannelDraw one = sample_channel_draw(c, rng);
  CHECK(one.gains_mb.size() == 1);
  CHECK(one.gains_mw.size() == 1);
  CHECK(one.seed_tag == 0);

  c.M = 1000;
  c.lambda_w = 2.5;
  RandomStream stream(42, 3);
  double sum_b = 0.0;
  double sum_w = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ChannelDraw d = sample_channel_draw(c, stream);
    REQUIRE(d.gains_mb.size() == 1000);
    CHECK(std::all_of(d.gains_mb.begin(), d.gains_mb.end(), [](double g) { return g >= 0.0; }));
    for (double g : d.gains_mb) sum_b += g;
    for (double g : d.gains_mw) sum_w += g;
  }
  CHECK_THAT(sum_b / 1e6, WithinAbs(1.0, 0.01));
  CHECK_THAT(sum_w / 1e6, WithinAbs(2.5, 0.025));
}

TEST_CASE("channel draw is reproducible") {
  SystemConfig c;
  RandomStream r1(42, 0);
  RandomStream r2(42, 0);
  const ChannelDraw a = sample_channel_draw(c, r1);
  const ChannelDraw b = sample_channel_draw(c, r2);
  CHECK(a.gains_mb == b.gains_mb);
  CHECK(a.gains_mw == b.gains_mw);
  CHECK(a.gain_aw == b.gain_aw);
}

TEST_CASE("order statistic moments, small cases") {
  const OrderMoments full = order_stat_moments(2, 2);
  CHECK(full.mu == 2.0);
  CHECK(full.xi2 == 2.0);
  CHECK(full.deltas == std::vector<double>{1.0, 1.0});

  const OrderMoments empty = order_stat_moments(17, 0);
  CHECK(empty.mu == 0.0);
  CHECK(empty.xi2 == 0.0);

  const OrderMoments min2 = order_stat_moments(2, 1);
  CHECK(min2.mu == 0.5);

  CHECK_THROWS_AS(order_stat_moments(5, 6), InfeasibleCover);
  CHECK_THROWS_AS(order_stat_moments(5, -1), DomainError);
}

TEST_CASE("order statistic moments against the mean approximation") {
  const OrderMoments m = order_stat_moments(500, 43);
  CHECK_THAT(mu_approximation(500, 43), WithinAbs(1.892, 1e-12));
  CHECK_THAT(m.mu, WithinRel(1.892, 0.05));
}

TEST_CASE("order statistic moment invariants") {
  for (Count M : {1, 2, 7, 50, 500}) {
    for (Count K = 0; K <= std::min<Count>(M, 60); ++K) {
      const OrderMoments m = order_stat_moments(M, K);
      double mu = 0.0;
      double xi2 = 0.0;
      for (std::size_t j = 0; j < m.deltas.size(); ++j) {
        mu += m.deltas[j];
        xi2 += m.deltas[j] * m.deltas[j];
        CHECK(m.deltas[j] > 0.0);
        CHECK(m.deltas[j] <= 1.0);
        if (j > 0) CHECK(m.deltas[j] <= m.deltas[j - 1]);
      }
      CHECK_THAT(m.mu, WithinAbs(mu, 1e-12));
      CHECK_THAT(m.xi2, WithinAbs(xi2, 1e-12));
      if (K >= 1) CHECK(m.mu > order_stat_moments(M, K - 1).mu);
      if (K >= 1) CHECK(order_stat_moments(M + 1, K).mu < m.mu);
    }
  }
}

TEST_CASE("Renyi sampler degenerate and small cases") {
  RandomStream rng(42, 0);
  const int n = 200000;
  const Moments all = sample_moments(n, [&] { return sample_sum_k_smallest(5, 5, rng); });
  CHECK_THAT(all.mean, WithinAbs(5.0, 4.0 * std::sqrt(5.0 / n)));
  const Moments min2 = sample_moments(n, [&] { return sample_sum_k_smallest(2, 1, rng); });
  CHECK_THAT(min2.mean, WithinAbs(0.5, 4.0 * 0.5 / std::sqrt(n)));
  CHECK_THROWS_AS(sample_sum_k_smallest(5, 0, rng), DomainError);
  CHECK_THROWS_AS(sample_sum_k_smallest(5, 6, rng), InfeasibleCover);
}

TEST_CASE("Renyi sampler mean for M = 500, K = 43") {
  RandomStream rng(42, 1);
  const int n = 1000000;
  const Moments m = sample_moments(n, [&] { return sample_sum_k_smallest(500, 43, rng); });
  const OrderMoments exact = order_stat_moments(500, 43);
  CHECK_THAT(m.mean, WithinAbs(exact.mu, 3.0 * exact.xi() / std::sqrt(n)));
}

TEST_CASE("Renyi sampler matches sorting") {
  const int n = 100000;
  std::uint64_t sub = 100;
  for (auto [M, K] : {std::pair<Count, Count>{1, 1}, {3, 2}, {10, 4}, {25, 25}, {50, 7}, {50, 30}}) {
    RandomStream a(42, sub++);
    RandomStream b(42, sub++);
    const Moments renyi = sample_moments(n, [&] { return sample_sum_k_smallest(M, K, a); });
    std::vector<double> gains(static_cast<std::size_t>(M));
    const Moments sorted = sample_moments(n, [&] {
      for (auto& g : gains) g = b.exponential(1.0);
      return sum_of_smallest(gains, K);
    });
    const double se_mean = std::sqrt((renyi.var + sorted.var) / n);
    CHECK_THAT(renyi.mean, WithinAbs(sorted.mean, 4.0 * se_mean));
    // Variance of a sample variance ~ (m4 - var^2)/n; bound m4 by a generous 9 var^2.
    const double se_var = std::sqrt(8.0 * (renyi.var * renyi.var + sorted.var * sorted.var) / n);
    CHECK_THAT(renyi.var, WithinAbs(sorted.var, 4.0 * se_var));
  }
}

TEST_CASE("sum of smallest") {
  std::vector<double> v{5.0, 1.0, 4.0, 2.0, 3.0};
  CHECK(sum_of_smallest(v, 0) == 0.0);
  CHECK(sum_of_smallest(v, 2) == 3.0);
  CHECK(sum_of_smallest(v, 5) == 15.0);
  CHECK_THROWS_AS(sum_of_smallest(v, 6), InfeasibleCover);
}
