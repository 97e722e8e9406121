#pragma once

// Time evolution in the blip and standard models and the coherent-state
// expectation values of field, energy and position.

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "blipfield/core.hpp"
#include "blipfield/spectral.hpp"

namespace blipfield {

/// blip: exp(-i k c t) on the s-signed spectrum, a rigid shift by s c t.
/// standard: exp(-i |k| c t) on the plain spectrum.
enum class PropagatorKind { blip, standard };

namespace detail {

/// Cyclic shift so that out[j] = in[j - cells].
inline std::vector<cplx> cyclic_shift(const std::vector<cplx>& in, long long cells) {
  const auto n = static_cast<long long>(in.size());
  const long long r = ((cells % n) + n) % n;
  std::vector<cplx> out(in.size());
  for (long long j = 0; j < n; ++j) out[static_cast<std::size_t>((j + r) % n)] = in[static_cast<std::size_t>(j)];
  return out;
}

/// True, with the count, when the displacement is a whole number of cells.
inline bool whole_cells(double displacement, double dx, long long& cells) {
  const double u = displacement / dx;
  const double r = std::round(u);
  if (std::abs(u - r) > 1e-9 * std::max(1.0, std::abs(u))) return false;
  cells = static_cast<long long>(r);
  return true;
}

}  // namespace detail

inline MomentumWavepacket evolve(MomentumWavepacket psit, double t, PropagatorKind kind,
                                 const Units& units = {}) {
  require(std::isfinite(t), ErrorCode::invalid_argument, "time must be finite");
  const double ct = units.c * t;
  if (kind == PropagatorKind::blip)
    return apply_multiplier(std::move(psit), [ct](double k) { return detail::unit_phase(-k * ct); });
  return apply_multiplier(std::move(psit),
                          [ct](double k) { return detail::unit_phase(-std::abs(k) * ct); });
}

/// Blip: psi(x, t) = psi(x - s c t, 0); whole-cell displacements are exact
/// index shifts. Standard: the multiplier is even in k, so s plays no role.
inline BlipWavepacket evolve(const BlipWavepacket& psi, double t, PropagatorKind kind,
                             const Units& units = {}) {
  require(std::isfinite(t), ErrorCode::invalid_argument, "time must be finite");
  if (t == 0.0) return psi;
  if (kind == PropagatorKind::blip) {
    long long cells = 0;
    const double shift = static_cast<double>(value(psi.s)) * units.c * t;
    if (detail::whole_cells(shift, psi.grid.dx(), cells))
      return BlipWavepacket(psi.grid, psi.s, psi.lambda, detail::cyclic_shift(psi.amp, cells));
  }
  return to_position(evolve(to_momentum(psi), t, kind, units));
}

/// Probability mass farther than c t + 3 dx (periodic distance) from the
/// initial support interval. Refuses packets that are not localized.
inline double light_cone_leakage(const BlipWavepacket& psi0, double t, PropagatorKind kind,
                                 const Units& units = {}) {
  require(std::isfinite(t) && t >= 0.0, ErrorCode::invalid_argument, "time must be >= 0");
  const Localization loc = localize(psi0);
  const BlipWavepacket psi = evolve(psi0, t, kind, units);
  const double reach = loc.radius + units.c * t + 3.0 * psi.grid.dx();
  return mass_outside(psi, loc.center, reach);
}

inline double mean_position(const BlipWavepacket& psi, double t, PropagatorKind kind,
                            const Units& units = {}) {
  return mean_position(evolve(psi, t, kind, units));
}

/// Real field expectation values for polarization H: the y-component of E
/// and the z-component of B on the packet's grid.
struct FieldProfile {
  std::vector<double> E;
  std::vector<double> B;
};

/// E = Re[alpha c R[psi_t]], B = s Re[alpha R[psi_t]] (the Hermitian part of
/// the complex observables).
inline FieldProfile field_expectation(const BlipWavepacket& psi, CoherentAmplitude alpha,
                                      const RegularizationSpec& spec, double t,
                                      PropagatorKind kind = PropagatorKind::blip) {
  spec.validate();
  const BlipWavepacket field = regularize(evolve(psi, t, kind, spec.units), spec);
  const double sgn = static_cast<double>(value(psi.s));
  FieldProfile out{std::vector<double>(field.amp.size()), std::vector<double>(field.amp.size())};
  for (std::size_t j = 0; j < field.amp.size(); ++j) {
    const double re = (alpha.alpha * field.amp[j]).real();
    out.E[j] = spec.units.c * re;
    out.B[j] = sgn * re;
  }
  return out;
}

/// Coherent excitation alpha on wavepacket psi. Several excitations with the
/// same s and polarization share one coherent displacement.
struct Excitation {
  BlipWavepacket psi;
  CoherentAmplitude alpha;
};

/// Normal-ordered coherent expectation
/// (eps0 A c^2 / 4) sum_s integral dk |Omega(k) b(k) + Omega(-k) b*(-k)|^2,
/// b = transform of the alpha-weighted superposition in each s sector.
inline double energy_expectation(const std::vector<Excitation>& excitations,
                                 const Units& units = {}) {
  units.validate();
  if (excitations.empty()) return 0.0;
  const SpatialGrid grid = excitations.front().psi.grid;
  double total = 0.0;
  for (Sign s : {Sign::plus, Sign::minus}) {
    for (Polarization pol : {Polarization::H, Polarization::V}) {
      BlipWavepacket beta(grid, s, pol);
      bool any = false;
      for (const auto& e : excitations) {
        require(e.psi.grid == grid, ErrorCode::invalid_argument, "excitations need a common grid");
        if (e.psi.s != s || e.psi.lambda != pol) continue;
        any = true;
        for (std::size_t j = 0; j < beta.amp.size(); ++j) beta.amp[j] += e.alpha.alpha * e.psi.amp[j];
      }
      if (!any) continue;
      const MomentumWavepacket bt = to_momentum(beta);
      const MomentumGrid kg = bt.k_grid();
      double acc = 0.0;
      for (std::size_t m = 0; m < kg.size(); ++m) {
        const double w = omega(kg.k(m), units);
        acc += std::norm(w * bt.amp[m] + w * std::conj(bt.amp[kg.reflected(m)]));
      }
      total += acc * kg.dk();
    }
  }
  return 0.25 * units.eps0 * units.area * units.c * units.c * total;
}

inline double energy_expectation(const BlipWavepacket& psi, CoherentAmplitude alpha,
                                 const Units& units = {}) {
  return energy_expectation(std::vector<Excitation>{{psi, alpha}}, units);
}

/// Two coherent excitations at carriers +k0 and -k0 standing in for sharp
/// modes; both share position x0, sign s and polarization H.
struct ModePair {
  double k0 = 1.0;
  CoherentAmplitude alpha_pos{};
  CoherentAmplitude alpha_neg{};
  double sigma = 0.05;  // spectral width of each packet
  double x0 = 0.0;
  Sign s = Sign::plus;

  void validate() const {
    require(std::isfinite(k0) && k0 != 0.0, ErrorCode::invalid_argument, "k0 must be nonzero");
    require(std::isfinite(sigma) && sigma > 0.0 && sigma <= std::abs(k0) / 20.0,
            ErrorCode::invalid_argument, "mode pair needs 0 < sigma <= |k0|/20");
  }

  /// The +k0 packet and its complex conjugate, which carries -k0.
  std::pair<BlipWavepacket, BlipWavepacket> packets(const SpatialGrid& grid) const {
    validate();
    BlipWavepacket pos = gaussian_packet(grid, {x0, 0.5 / sigma, k0}, s, Polarization::H);
    BlipWavepacket neg = pos;
    for (auto& a : neg.amp) a = std::conj(a);
    return {std::move(pos), std::move(neg)};
  }

  std::vector<Excitation> excitations(const SpatialGrid& grid) const {
    auto [pos, neg] = packets(grid);
    return {{std::move(pos), alpha_pos}, {std::move(neg), alpha_neg}};
  }
};

inline FieldProfile field_expectation(const ModePair& pair, const SpatialGrid& grid,
                                      const RegularizationSpec& spec, double t) {
  spec.validate();
  auto [pos, neg] = pair.packets(grid);
  BlipWavepacket beta(grid, pair.s, Polarization::H);
  for (std::size_t j = 0; j < beta.amp.size(); ++j)
    beta.amp[j] = pair.alpha_pos.alpha * pos.amp[j] + pair.alpha_neg.alpha * neg.amp[j];
  // beta already carries the coherent weights.
  return field_expectation(beta, CoherentAmplitude{1.0}, spec, t);
}

inline double energy_expectation(const ModePair& pair, const SpatialGrid& grid,
                                 const Units& units = {}) {
  return energy_expectation(pair.excitations(grid), units);
}

}  // namespace blipfield
