#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "nlheat/grid.hpp"

namespace nlheat::testing {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform values in [lo, hi], reproducible per seed.
inline ScalarField random_field(const TorusGrid& grid, std::uint64_t seed, double lo = -1.0,
                                double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  ScalarField u(grid);
  for (double& v : u.values()) v = dist(rng);
  return u;
}

inline ScalarField sine_bump(const TorusGrid& grid, double amp, int mode = 1) {
  return ScalarField::sample(grid, [&](double x, double y) {
    double s = std::sin(kTwoPi * mode * x / grid.period(0));
    if (grid.dim() == 2) s += std::sin(kTwoPi * mode * y / grid.period(1));
    return 1.0 + amp * s;
  });
}

}  // namespace nlheat::testing
