#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace covertsim {

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section minimization of `f` on [lo, hi]; stops when the bracket
/// is narrower than `tol`. Returns the best point evaluated.
template <typename F>
ScalarOptimum golden_section_minimize(F&& f, double lo, double hi, double tol,
                                      int max_iterations = 200) {
  constexpr double kInvPhi = 0.61803398874989484820;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  ScalarOptimum best = fc <= fd ? ScalarOptimum{c, fc} : ScalarOptimum{d, fd};

  for (int i = 0; i < max_iterations && (b - a) > tol; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      if (fc < best.value) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      if (fd < best.value) best = {d, fd};
    }
  }
  return best;
}

template <typename F>
ScalarOptimum golden_section_maximize(F&& f, double lo, double hi, double tol,
                                      int max_iterations = 200) {
  auto r = golden_section_minimize([&](double x) { return -f(x); }, lo, hi, tol, max_iterations);
  return {r.x, -r.value};
}

/// `points` equally spaced values on [lo, hi] (both ends included).
inline std::vector<double> linspace(double lo, double hi, std::size_t points) {
  std::vector<double> out;
  if (points == 0) return out;
  if (points == 1) return {lo};
  out.reserve(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out.push_back(lo + step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

/// Index of the largest value; ties go to the smallest index. NaN is skipped.
/// Returns values.size() when nothing is finite or +inf.
inline std::size_t argmax_first(const std::vector<double>& values) {
  std::size_t best = values.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i]) || values[i] == -std::numeric_limits<double>::infinity()) continue;
    if (best == values.size() || values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace covertsim
