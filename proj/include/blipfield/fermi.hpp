#pragma once

// Beam splitter followed by two detectors: click probabilities in the blip
// and standard models and the delayed-ratio causality diagnostics.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "blipfield/core.hpp"
#include "blipfield/dynamics.hpp"
#include "blipfield/parallel.hpp"
#include "blipfield/spectral.hpp"

namespace blipfield {

/// Detector 1 covers [L1, L1 + width], detector 2 covers [L2, L2 + width],
/// both measured along the unfolded propagation axis.
struct ExperimentGeometry {
  double L1 = 10.0;
  double L2 = 40.0;
  double width = 12.0;

  void validate(const SpatialGrid& grid) const {
    require(std::isfinite(L1) && std::isfinite(L2) && std::isfinite(width),
            ErrorCode::invalid_argument, "geometry must be finite");
    require(0.0 < L1 && L1 < L2, ErrorCode::invalid_argument, "geometry needs 0 < L1 < L2");
    require(width > 2.0 * grid.dx(), ErrorCode::resolution, "detector width must exceed 2 dx");
    require(L2 + width <= grid.x_max(), ErrorCode::boundary, "detector 2 lies beyond the grid");
  }
};

/// Closed run of grid cells [first, first + count).
struct DetectorWindow {
  std::size_t first = 0;
  std::size_t count = 0;
};

struct DetectorWindows {
  DetectorWindow d1;
  DetectorWindow d2;
  long long offset_cells = 0;  // d2.first - d1.first
};

/// Windows snapped outward to whole cells, with a common cell count so that
/// detector 2 is an exact translate of detector 1.
inline DetectorWindows detector_windows(const SpatialGrid& grid, const ExperimentGeometry& g) {
  g.validate(grid);
  constexpr double tol = 1e-9;
  auto lo = [&](double a) { return std::floor((a - grid.x_min()) / grid.dx() + tol); };
  auto hi = [&](double b) { return std::ceil((b - grid.x_min()) / grid.dx() - tol); };
  const double lo1 = lo(g.L1), lo2 = lo(g.L2);
  const double count = std::max(hi(g.L1 + g.width) - lo1, hi(g.L2 + g.width) - lo2) + 1.0;
  require(lo1 >= 0.0 && lo2 + count <= static_cast<double>(grid.size()), ErrorCode::boundary,
          "detector windows must lie inside the grid");
  DetectorWindows w;
  w.d1 = {static_cast<std::size_t>(lo1), static_cast<std::size_t>(count)};
  w.d2 = {static_cast<std::size_t>(lo2), static_cast<std::size_t>(count)};
  w.offset_cells = static_cast<long long>(lo2 - lo1);
  return w;
}

inline double window_mass(const BlipWavepacket& psi, DetectorWindow w) {
  double acc = 0.0;
  for (std::size_t j = w.first; j < w.first + w.count; ++j) acc += std::norm(psi.amp[j]);
  return acc * psi.grid.dx();
}

/// Output ports of a 50:50 splitter: b on the horizontal register, c on the
/// vertical one.
struct BeamSplitterOutput {
  BlipWavepacket b;
  BlipWavepacket c;
};

/// a -> (b + i c) / sqrt(2).
inline BeamSplitterOutput beam_split(const BlipWavepacket& in) {
  const double r = 1.0 / std::numbers::sqrt2;
  BlipWavepacket b(in.grid, in.s, Polarization::H);
  BlipWavepacket c(in.grid, in.s, Polarization::V);
  for (std::size_t j = 0; j < in.amp.size(); ++j) {
    b.amp[j] = r * in.amp[j];
    c.amp[j] = cplx(0.0, r) * in.amp[j];
  }
  return {std::move(b), std::move(c)};
}

/// Model amplitude of psi at position x and time t. Standard:
/// (2 pi)^(-1/2) sum_k dk exp(i (k x - c |k| t)) psi~_k; blip: psi(x - s c t)
/// evaluated by band-limited interpolation.
inline cplx transition_amplitude(PropagatorKind model, const BlipWavepacket& psi, double x,
                                 double t, const Units& units = {}) {
  require(std::isfinite(x) && std::isfinite(t), ErrorCode::invalid_argument,
          "position and time must be finite");
  const MomentumWavepacket spec = evolve(to_momentum(psi), t, model, units);
  const MomentumGrid kg = spec.k_grid();
  const double sgn = static_cast<double>(value(psi.s));
  cplx acc{};
  for (std::size_t m = 0; m < kg.size(); ++m) acc += spec.amp[m] * detail::unit_phase(sgn * kg.k(m) * x);
  return acc * kg.dk() / std::sqrt(2.0 * std::numbers::pi);
}

/// Model amplitude on every grid point.
inline BlipWavepacket transition_amplitudes(PropagatorKind model, const BlipWavepacket& psi,
                                            double t, const Units& units = {}) {
  return evolve(psi, t, model, units);
}

/// Detector 1 sees the c register: coherent_prefactor(alpha) * window mass of c.
inline double p1_click(PropagatorKind model, const BeamSplitterOutput& out,
                       const ExperimentGeometry& g, CoherentAmplitude alpha, double t1,
                       const Units& units = {}) {
  require(std::isfinite(t1) && t1 >= 0.0, ErrorCode::invalid_argument, "t1 must be >= 0");
  const DetectorWindows w = detector_windows(out.c.grid, g);
  const double pref = coherent_prefactor(alpha);
  if (pref == 0.0) return 0.0;
  return pref * window_mass(transition_amplitudes(model, out.c, t1, units), w.d1);
}

/// Detector 2 sees the b register: (|c_2|^2 / 2) / coherent_prefactor(alpha)
/// * window mass of b. Undefined for the vacuum.
inline double p2_click(PropagatorKind model, const BeamSplitterOutput& out,
                       const ExperimentGeometry& g, CoherentAmplitude alpha, double t2,
                       const Units& units = {}) {
  require(std::isfinite(t2) && t2 >= 0.0, ErrorCode::invalid_argument, "t2 must be >= 0");
  const double pref = coherent_prefactor(alpha);
  require(pref > 0.0, ErrorCode::undefined_conditional,
          "detector 2 probability is conditional on a click and undefined for alpha = 0");
  const DetectorWindows w = detector_windows(out.b.grid, g);
  return 0.5 * two_photon_weight(alpha) / pref *
         window_mass(transition_amplitudes(model, out.b, t2, units), w.d2);
}

/// (1/2) coherent_prefactor(alpha) * window-1 mass of the model amplitude of psi.
inline double p1_click(PropagatorKind model, const BlipWavepacket& psi,
                       const ExperimentGeometry& g, CoherentAmplitude alpha, double t1,
                       const Units& units = {}) {
  return p1_click(model, beam_split(psi), g, alpha, t1, units);
}

/// (|c_2|^2 / 4) / coherent_prefactor(alpha) * window-2 mass of the model amplitude of psi.
inline double p2_click(PropagatorKind model, const BlipWavepacket& psi,
                       const ExperimentGeometry& g, CoherentAmplitude alpha, double t2,
                       const Units& units = {}) {
  return p2_click(model, beam_split(psi), g, alpha, t2, units);
}

struct ExperimentResult {
  std::vector<double> t1, p1, t2, p2, ratio;
  double delay = 0.0;         // t2 - t1 for the ratio series, from the snapped windows
  double ratio_spread = 0.0;  // (max - min) / mean of ratio
  double arrival_time = 0.0;  // earliest causal arrival of the support at detector 2
  std::vector<double> early_t2, early_p2;
  double early_click_mass = 0.0;  // max of early_p2
  bool formula_faithful_only = false;  // |alpha| > 2: conditioning corrections not modelled
};

inline constexpr std::size_t kEarlySamples = 32;

/// Both probability series, the delayed ratio P2(t1 + delay) / P1(t1) and the
/// largest detector-2 probability before light from the initial support
/// could arrive. Blip-model times are snapped to whole cells.
inline ExperimentResult causality_report(PropagatorKind model, const BlipWavepacket& psi,
                                         const ExperimentGeometry& g, CoherentAmplitude alpha,
                                         const std::vector<double>& t1_samples,
                                         const Units& units = {}) {
  units.validate();
  require(t1_samples.size() >= 3, ErrorCode::invalid_argument, "need at least 3 t1 samples");
  const DetectorWindows w = detector_windows(psi.grid, g);
  const Localization loc = localize(psi);
  const double dx = psi.grid.dx();
  const double cell_time = dx / units.c;

  ExperimentResult r;
  r.formula_faithful_only = std::abs(alpha.alpha) > 2.0;
  r.delay = static_cast<double>(w.offset_cells) * cell_time;
  for (double t : t1_samples) {
    require(std::isfinite(t) && t >= 0.0, ErrorCode::invalid_argument, "t1 samples must be >= 0");
    r.t1.push_back(model == PropagatorKind::blip ? std::round(t / cell_time) * cell_time : t);
  }

  const BeamSplitterOutput out = beam_split(psi);
  // Validates alpha before any sweep work.
  (void)p2_click(model, out, g, alpha, 0.0, units);

  const std::size_t n = r.t1.size();
  const auto rows = parallel_map(n, [&](std::size_t i) {
    const double t2 = r.t1[i] + r.delay;
    return std::array<double, 2>{p1_click(model, out, g, alpha, r.t1[i], units),
                                 p2_click(model, out, g, alpha, t2, units)};
  });
  for (std::size_t i = 0; i < n; ++i) {
    r.t2.push_back(r.t1[i] + r.delay);
    r.p1.push_back(rows[i][0]);
    r.p2.push_back(rows[i][1]);
    require(rows[i][0] > 0.0, ErrorCode::invalid_argument,
            "t1 sample with zero detector-1 probability has no ratio");
    r.ratio.push_back(rows[i][1] / rows[i][0]);
  }
  const auto [mn, mx] = std::minmax_element(r.ratio.begin(), r.ratio.end());
  double mean = 0.0;
  for (double v : r.ratio) mean += v;
  mean /= static_cast<double>(n);
  r.ratio_spread = mean != 0.0 ? (*mx - *mn) / std::abs(mean) : 0.0;

  const double window2_start = psi.grid.x(w.d2.first);
  r.arrival_time = std::max(0.0, (window2_start - (loc.center + loc.radius)) / units.c);
  if (r.arrival_time > 0.0) {
    for (std::size_t k = 0; k < kEarlySamples; ++k)
      r.early_t2.push_back(r.arrival_time * static_cast<double>(k) / static_cast<double>(kEarlySamples));
    r.early_p2 = parallel_map(kEarlySamples, [&](std::size_t k) {
      return p2_click(model, out, g, alpha, r.early_t2[k], units);
    });
    r.early_click_mass = *std::max_element(r.early_p2.begin(), r.early_p2.end());
  }
  return r;
}

}  // namespace blipfield
