#pragma once

// Signed unitary position <-> momentum transforms and the regularization
// operator R, applied either as a spectral multiplier or a real-space kernel.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "blipfield/core.hpp"
#include "blipfield/detail/fft.hpp"

namespace blipfield {

enum class RegularizationMode { spectral, realspace };

struct RegularizationSpec {
  Units units{};
  double epsilon = 0.0;  // spectral damping exp(-epsilon |k|)
  RegularizationMode mode = RegularizationMode::spectral;

  void validate() const {
    units.validate();
    require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorCode::regulator,
            "epsilon must be finite and non-negative");
    require(mode == RegularizationMode::spectral || epsilon > 0.0, ErrorCode::regulator,
            "the real-space kernel needs epsilon > 0");
  }
};

namespace detail {

inline cplx unit_phase(double theta) { return {std::cos(theta), std::sin(theta)}; }

inline void require_lattice_origin(const SpatialGrid& grid) {
  const double cells = grid.x_min() / grid.dx();
  require(std::abs(cells - std::round(cells)) <= 1e-9 * std::max(1.0, std::abs(cells)),
          ErrorCode::invalid_argument,
          "grid origin must be a whole number of cells from x = 0");
}

}  // namespace detail

/// psi~_s(k) = (2 pi)^(-1/2) sum_j dx exp(-i s k x_j) psi_s(x_j), unitary on the grid.
inline MomentumWavepacket to_momentum(const BlipWavepacket& psi) {
  detail::require_lattice_origin(psi.grid);
  const MomentumGrid kg(psi.grid);
  const std::size_t n = psi.grid.size();
  const double sgn = static_cast<double>(value(psi.s));
  const auto dir = psi.s == Sign::plus ? detail::FftDirection::forward
                                       : detail::FftDirection::backward;
  const auto bins = detail::dft(psi.amp, dir);
  const double scale = psi.grid.dx() / std::sqrt(2.0 * std::numbers::pi);
  MomentumWavepacket out(psi.grid, psi.s, psi.lambda);
  for (std::size_t m = 0; m < n; ++m) {
    out.amp[m] = scale * detail::unit_phase(-sgn * kg.k(m) * psi.grid.x_min()) * bins[kg.fft_bin(m)];
  }
  return out;
}

/// Inverse of to_momentum.
inline BlipWavepacket to_position(const MomentumWavepacket& psit) {
  detail::require_lattice_origin(psit.grid);
  const MomentumGrid kg = psit.k_grid();
  const std::size_t n = psit.grid.size();
  const double sgn = static_cast<double>(value(psit.s));
  std::vector<cplx> bins(n);
  for (std::size_t m = 0; m < n; ++m) {
    bins[kg.fft_bin(m)] = psit.amp[m] * detail::unit_phase(sgn * kg.k(m) * psit.grid.x_min());
  }
  const auto dir = psit.s == Sign::plus ? detail::FftDirection::backward
                                        : detail::FftDirection::forward;
  auto values = detail::dft(bins, dir);
  const double scale = kg.dk() / std::sqrt(2.0 * std::numbers::pi);
  for (auto& v : values) v *= scale;
  return BlipWavepacket(psit.grid, psit.s, psit.lambda, std::move(values));
}

/// Omega(k) = sqrt(2 hbar |k| / (eps0 A c)).
inline double omega(double k, const Units& units = {}) {
  return std::sqrt(units.omega0_sq() * std::abs(k));
}

/// Multiplies the s-signed spectrum by f(k).
template <class F>
MomentumWavepacket apply_multiplier(MomentumWavepacket psit, F&& f) {
  const MomentumGrid kg = psit.k_grid();
  for (std::size_t m = 0; m < psit.amp.size(); ++m) psit.amp[m] *= f(kg.k(m));
  return psit;
}

/// Real-space kernel of R for x != x', -sqrt(hbar / (4 pi eps0 A c)) |delta|^(-3/2).
inline double kernel_realspace(double delta, const Units& units = {}) {
  require(delta != 0.0, ErrorCode::coincidence, "kernel is singular at zero separation");
  require(std::isfinite(delta), ErrorCode::invalid_argument, "separation must be finite");
  const double amplitude = std::sqrt(units.hbar / (4.0 * std::numbers::pi * units.eps0 * units.area * units.c));
  return -amplitude * std::pow(std::abs(delta), -1.5);
}

/// Kernel of the damped multiplier Omega(k) exp(-eps |k|):
/// Omega0 / (2 sqrt(pi)) Re[(eps - i delta)^(-3/2)]. Finite at delta = 0.
inline double kernel_regularized(double delta, double eps, const Units& units = {}) {
  require(std::isfinite(eps) && eps > 0.0, ErrorCode::regulator, "epsilon must be positive");
  require(std::isfinite(delta), ErrorCode::invalid_argument, "separation must be finite");
  const double omega0 = std::sqrt(units.omega0_sq());
  return omega0 / (2.0 * std::sqrt(std::numbers::pi)) * std::pow(cplx(eps, -delta), -1.5).real();
}

/// Circular real-space convolution with the regularized kernel at
/// minimum-image separations. The sampled kernel is offset so its lattice sum
/// vanishes, matching Omega(0) = 0.
inline BlipWavepacket regularize_realspace(const BlipWavepacket& psi, double eps,
                                           const Units& units = {}) {
  const std::size_t n = psi.grid.size();
  const double dx = psi.grid.dx();
  std::vector<double> kern(n);
  double total = 0.0;
  for (std::size_t d = 0; d < n; ++d) {
    const double delta = psi.grid.periodic_delta(0.0, static_cast<double>(d) * dx);
    kern[d] = kernel_regularized(delta, eps, units);
    total += kern[d];
  }
  const double offset = total / static_cast<double>(n);
  for (auto& v : kern) v -= offset;

  BlipWavepacket out(psi.grid, psi.s, psi.lambda);
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc{};
    for (std::size_t j = 0; j < n; ++j) acc += kern[(i + n - j) % n] * psi.amp[j];
    out.amp[i] = acc * dx;
  }
  return out;
}

/// R[psi]: field amplitude density. Spectral mode applies
/// Omega(k) exp(-eps |k|) exactly on the grid.
inline BlipWavepacket regularize(const BlipWavepacket& psi, const RegularizationSpec& spec) {
  spec.validate();
  if (spec.mode == RegularizationMode::realspace)
    return regularize_realspace(psi, spec.epsilon, spec.units);
  const double eps = spec.epsilon;
  const Units units = spec.units;
  return to_position(apply_multiplier(to_momentum(psi), [&](double k) {
    return omega(k, units) * std::exp(-eps * std::abs(k));
  }));
}

}  // namespace blipfield
