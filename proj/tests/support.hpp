#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rbe/relkin.hpp"

namespace rbe::test {

// |p| log-uniform on [1e-3, 1e2], isotropic direction
inline Vec3 random_momentum(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = std::pow(10.0, -3.0 + 5.0 * u(rng));
  const double z = 2.0 * u(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * u(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * s * std::cos(phi), r * s * std::sin(phi), r * z};
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const Vec3 v{n(rng), n(rng), n(rng)};
  return v / norm(v);
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace rbe::test
