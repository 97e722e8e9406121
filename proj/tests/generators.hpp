#pragma once

// Seeded random inputs for property tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "blipfield/core.hpp"

namespace blipfield::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Sign sign() { return integer(0, 1) ? Sign::plus : Sign::minus; }
  cplx complex(double radius) {
    const double r = radius * std::sqrt(uniform(0.0, 1.0));
    const double th = uniform(0.0, 2.0 * 3.141592653589793);
    return std::polar(r, th);
  }

  /// Normalized Gaussian well inside the grid, resolvable, random carrier.
  BlipWavepacket packet(const SpatialGrid& grid, double k_max = 3.0) {
    const double sigma = uniform(4.0 * grid.dx(), grid.length() / 40.0);
    const double margin = 7.0 * sigma;
    const double x0 = uniform(grid.x_min() + margin, grid.x_max() - margin);
    return gaussian_packet(grid, {x0, sigma, uniform(-k_max, k_max)}, sign());
  }

  /// Superposition of a few random Gaussians with random complex weights.
  BlipWavepacket mixture(const SpatialGrid& grid, Sign s) {
    BlipWavepacket out(grid, s, Polarization::H);
    const int parts = integer(1, 3);
    for (int p = 0; p < parts; ++p) {
      const BlipWavepacket g = packet(grid);
      const cplx w = complex(1.0);
      for (std::size_t j = 0; j < out.amp.size(); ++j) out.amp[j] += w * g.amp[j];
    }
    return out;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace blipfield::testing
