#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <catch_amalgamated.hpp>

#include "covertsim/detection.hpp"
#include "covertsim/rng.hpp"
#include "covertsim/special.hpp"

using namespace covertsim;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("c_epsilon") {
  CHECK_THAT(c_epsilon(0.05), WithinAbs(62.396, 0.001));
  CHECK_THAT(c_epsilon(0.03), WithinAbs(175.56, 0.01));
  double prev = c_epsilon(0.001);
  for (double e = 0.002; e < 0.25; e += 0.001) {
    const double v = c_epsilon(e);
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
  CHECK_THROWS_AS(c_epsilon(0.0), DomainError);
  CHECK_THROWS_AS(c_epsilon(0.25), DomainError);
  CHECK_THROWS_AS(c_epsilon(-0.1), DomainError);
}

TEST_CASE("dep_analytic reference points") {
  CHECK_THAT(dep_analytic(1e6 + 1.0, 10, 1.0, 1.0, 1.0), WithinAbs(1.0, 1e-6));
  CHECK_THAT(dep_analytic(64.0, 63, 1.0, 1.0, 1.0), WithinAbs(0.9502, 0.0005));
  CHECK_THROWS_AS(dep_analytic(5.0, 10, 0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(dep_analytic(5.0, 0, 1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("dep_analytic at the optimal threshold") {
  // Substituting gamma* collapses the closed form to 1 - e^X Q(sqrt(2X)).
  for (Count K : {5, 15, 63, 400}) {
    for (double P_a : {0.1, 0.5, 1.0}) {
      const double X = static_cast<double>(K) / (2.0 * P_a * P_a);
      const double expected = 1.0 - std::exp(X + log_q_function(std::sqrt(2.0 * X)));
      CHECK_THAT(dep_analytic(optimal_threshold(K, 1.0, 1.0), K, P_a, 1.0, 1.0), WithinAbs(expected, 1e-12));
      CHECK_THAT(min_dep_exact(K, P_a, 1.0), WithinAbs(expected, 1e-12));
    }
  }
}

TEST_CASE("dep_analytic stays in [0, 1] without overflow") {
  for (Count K : {1, 3, 10, 63, 500}) {
    for (double P_a : {1e-3, 0.05, 0.3, 1.0, 2.0}) {
      for (double g = 0.0; g <= 3.0 * K + 1.0; g += 0.25 * K + 0.1) {
        const double z = dep_analytic(g, K, P_a, 1.0, 1.0);
        CHECK(std::isfinite(z));
        CHECK(z >= -1e-12);
        CHECK(z <= 1.0 + 1e-12);
      }
    }
  }
}

TEST_CASE("optimal threshold") {
  CHECK(optimal_threshold(25, 1.0, 1.0) == 26.0);
  CHECK_THAT(optimal_threshold(15, 0.1, 0.5), WithinAbs(2.0, 1e-15));
}

TEST_CASE("optimal threshold is within 1e-3 of the grid minimum") {
  // Known to fail at K = 10 and 25: the closed form bottoms out near
  // gamma = K + 2 P_max + sigma_w2, not at K P_max + sigma_w2.
  for (Count K : {10, 25, 63}) {
    double best = 1.0;
    const double hi = 1.0 + 3.0 * static_cast<double>(K);
    for (int i = 0; i < 10000; ++i) {
      const double g = 1.0 + (hi - 1.0) * i / 9999.0;
      best = std::min(best, dep_analytic(g, K, 1.0, 1.0, 1.0));
    }
    CHECK(dep_analytic(optimal_threshold(K, 1.0, 1.0), K, 1.0, 1.0, 1.0) <= best + 1e-3);
  }
}

TEST_CASE("optimal threshold gap to the grid minimum shrinks with K") {
  double prev_gap = 1.0;
  for (Count K : {10, 25, 63, 150, 400}) {
    double best = 1.0;
    const double hi = 1.0 + 3.0 * static_cast<double>(K);
    for (int i = 0; i < 10000; ++i) best = std::min(best, dep_analytic(1.0 + (hi - 1.0) * i / 9999.0, K, 1.0, 1.0, 1.0));
    const double gap = dep_analytic(optimal_threshold(K, 1.0, 1.0), K, 1.0, 1.0, 1.0) - best;
    CHECK(gap >= -1e-12);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-4);
}

TEST_CASE("min_dep closed form") {
  const MinDep m = min_dep(63, 1.0, 1.0);
  CHECK_THAT(m.zeta, WithinAbs(0.95016, 1e-4));
  CHECK_FALSE(m.approximate);
  CHECK_THAT(min_dep(63, 1.0, 1.0).zeta, WithinAbs(min_dep_exact(63, 1.0, 1.0), 5e-4));
  CHECK(min_dep(43, 0.83, 1.0).zeta >= 0.95);
  CHECK(min_dep(42, 0.83, 1.0).zeta < 0.95);
  CHECK(min_dep(1000000, 1e-4, 1.0).zeta > 1.0 - 1e-6);
  CHECK(min_dep(0, 0.5, 1.0).zeta == 0.0);
  CHECK(min_dep(1, 1.0, 1.0).approximate);
  CHECK(min_dep(2, 1.0, 1.0).approximate);
  CHECK_FALSE(min_dep(3, 1.0, 1.0).approximate);
  CHECK_THROWS_AS(min_dep(-1, 0.5, 1.0), DomainError);
}

TEST_CASE("min_dep is monotone in K and P_a") {
  for (double P_a : {0.1, 0.5, 0.83, 1.0}) {
    for (Count K = 1; K < 300; ++K) CHECK(min_dep(K + 1, P_a, 1.0).zeta > min_dep(K, P_a, 1.0).zeta);
  }
  for (Count K : {1, 15, 63}) {
    for (double P_a = 0.05; P_a < 1.0; P_a += 0.05) {
      CHECK(min_dep(K, P_a + 0.05, 1.0).zeta < min_dep(K, P_a, 1.0).zeta);
    }
  }
}

TEST_CASE("k_min pins") {
  CHECK(k_min(0.83, 1.0, 0.05) == 43);
  CHECK(k_min(1.0, 1.0, 0.05) == 63);
  CHECK(k_min(0.0, 1.0, 0.05) == 0);
  CHECK(k_min(2.0 / 3.0, 1.0, 0.05) == 28);
  CHECK(k_min(0.67, 1.0, 0.05) == 29);
}

TEST_CASE("k_min minimality over the validity regime") {
  for (double e = 0.01; e < 0.2; e += 0.0137) {
    for (double ratio = 0.05; ratio <= 1.0; ratio += 0.0311) {
      const Count k = k_min(ratio, 1.0, e);
      if (static_cast<double>(k) <= 2.0 * ratio * ratio) continue;  // X <= 1
      CHECK(min_dep(k, ratio, 1.0).zeta >= 1.0 - e);
      if (k >= 1) CHECK(min_dep(k - 1, ratio, 1.0).zeta < 1.0 - e);
    }
  }
}

TEST_CASE("k_min scales quadratically before the ceiling") {
  for (double e : {0.01, 0.05, 0.1, 0.2}) {
    for (double P_a : {0.1, 0.37, 0.5}) {
      CHECK_THAT(k_min_real(2.0 * P_a, 1.0, e), WithinRel(4.0 * k_min_real(P_a, 1.0, e), 1e-13));
      const Count k = k_min(P_a, 1.0, e);
      const Count k2 = k_min(2.0 * P_a, 1.0, e);
      CHECK(k2 >= 4 * k - 3);
      CHECK(k2 <= 4 * k);
    }
  }
}

TEST_CASE("activation threshold") {
  CHECK(activation_threshold(std::vector<double>{0.1, 0.5, 0.9}, 2) == 0.5);
  CHECK(activation_threshold(std::vector<double>{0.9, 0.1, 0.5}, 2) == 0.5);
  CHECK(activation_threshold(std::vector<double>{0.9, 0.1, 0.5}, 0) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(activation_threshold(std::vector<double>{0.9, 0.1}, 3), InfeasibleCover);
}

TEST_CASE("activation threshold activates exactly k users") {
  RandomStream rng(42, 0);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto M = static_cast<std::size_t>(1 + trial % 40);
    std::vector<double> gains(M);
    for (auto& g : gains) g = rng.exponential(1.0);
    const Count k = static_cast<Count>(trial % (M + 1));
    const double tau = activation_threshold(gains, k);
    Count active = 0;
    for (double g : gains) active += g <= tau;
    CHECK(active == k);
    const auto chosen = select_cooperators(gains, k);
    CHECK(static_cast<Count>(chosen.size()) == k);
    for (std::size_t idx : chosen) CHECK(gains[idx] <= tau);
  }
}

TEST_CASE("select_cooperators breaks ties by index") {
  const std::vector<double> gains{0.3, 0.1, 0.3, 0.3, 0.2};
  CHECK(select_cooperators(gains, 3) == std::vector<std::size_t>{1, 4, 0});
  CHECK(select_cooperators(gains, 4) == std::vector<std::size_t>{1, 4, 0, 2});
}
