#pragma once

#include <algorithm>
#include <random>
#include <string>

#include <Eigen/Core>

#include "asymint/riccati.hpp"
#include "asymint/spectra.hpp"

namespace support {

// (x-2)(x-1)(x+1)(x+2)
inline asymint::Quartic test_quartic() { return {0.0, -5.0, 0.0, 4.0}; }
inline asymint::CharacteristicData test_data() { return asymint::characteristic_data(test_quartic()); }

inline asymint::Perturbations perturbations(const std::string& r0, const std::string& r1 = "0",
                                            const std::string& r2 = "0", const std::string& r3 = "0") {
  return {asymint::parse(r0), asymint::parse(r1), asymint::parse(r2), asymint::parse(r3)};
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Four distinct reals in [lo, hi], sorted decreasing, pairwise gaps >= min_gap.
inline Eigen::Vector4d random_roots(std::mt19937_64& rng, double lo = -5.0, double hi = 5.0, double min_gap = 0.1) {
  for (;;) {
    Eigen::Vector4d v;
    for (int k = 0; k < 4; ++k) v(k) = uniform(rng, lo, hi);
    std::sort(v.data(), v.data() + 4, std::greater<>());
    if (v(0) - v(1) >= min_gap && v(1) - v(2) >= min_gap && v(2) - v(3) >= min_gap) return v;
  }
}

// Roots with no zero shifted difference problems and a bounded spread, for kernel tests.
inline Eigen::Vector3d random_gamma(std::mt19937_64& rng, double min_gap = 0.2) {
  for (;;) {
    Eigen::Vector3d g;
    for (int k = 0; k < 3; ++k) g(k) = uniform(rng, -4.0, 4.0);
    std::sort(g.data(), g.data() + 3, std::greater<>());
    if (g(0) - g(1) < min_gap || g(1) - g(2) < min_gap) continue;
    if ((g.array().abs() < min_gap).any()) continue;
    return g;
  }
}

}  // namespace support
