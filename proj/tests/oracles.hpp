#pragma once

// Test-only oracles, independent of the jet implementation: nested central
// finite differences with Richardson extrapolation.

#include <array>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using ScalarFn = std::function<double(const std::vector<double>&)>;

// Central difference for d^mi f at `point`, peeling one variable at a time.
inline double central_fd(const ScalarFn& f, std::vector<double> point,
                         std::array<int, 3> mi, double h) {
  int var = -1;
  for (int k = 0; k < 3; ++k)
    if (mi[k] > 0) {
      var = k;
      break;
    }
  if (var < 0) return f(point);
  std::array<int, 3> lower = mi;
  lower[var] -= 1;
  auto up = point, dn = point;
  up[var] += h;
  dn[var] -= h;
  return (central_fd(f, up, lower, h) - central_fd(f, dn, lower, h)) / (2.0 * h);
}

// Richardson step: central differences carry an h^2 error series.
inline double richardson_fd(const ScalarFn& f, const std::vector<double>& point,
                            std::array<int, 3> mi, double h) {
  const double d_h = central_fd(f, point, mi, h);
  const double d_h2 = central_fd(f, point, mi, h / 2.0);
  return (4.0 * d_h2 - d_h) / 3.0;
}

inline std::mt19937& rng() {
  static std::mt19937 gen(20240817u);
  return gen;
}

inline double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> d(lo, hi);
  return d(rng());
}

}  // namespace oracle
