#pragma once

// Mirror images, regularized zero-point kernels, Casimir energies and forces
// in one and three dimensions, folded cavity fields and the image-index
// substitution oracle.

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "blipfield/core.hpp"
#include "blipfield/dynamics.hpp"
#include "blipfield/numerics.hpp"
#include "blipfield/parallel.hpp"
#include "blipfield/spectral.hpp"

namespace blipfield {

/// Mirrors at x = -D/2 and x = D/2.
struct CavitySpec {
  double D = 1.0;
  int n_img = 8;              // images with |n| <= n_img in truncated image sums
  long long m_max = 1000000;  // last term of the zeta partial sums
  double eps = 0.0;           // regulator of real-space kernels
  Units units{};

  void validate() const {
    units.validate();
    require(std::isfinite(D) && D > 0.0, ErrorCode::invalid_argument, "cavity width must be > 0");
    require(n_img >= 1, ErrorCode::invalid_argument, "image truncation must be >= 1");
    require(m_max >= 1, ErrorCode::invalid_argument, "sum truncation must be >= 1");
    require(std::isfinite(eps) && eps >= 0.0, ErrorCode::regulator, "regulator must be >= 0");
    require(eps == 0.0 || eps < D / 10.0, ErrorCode::regulator, "regulator must be below D/10");
  }
};

/// D-dependent zero-point correction. The D-independent free-field part
/// (the m = 0 image term) is never summed; divergent_free_part records that
/// it exists.
struct CasimirResult {
  double energy_correction = 0.0;  // energy (1D) or energy per area (3D)
  double force = 0.0;              // force (1D) or pressure (3D)
  double truncation_error_estimate = 0.0;        // tail added to energy_correction
  double force_truncation_error_estimate = 0.0;  // tail added to force
  bool divergent_free_part = true;
};

/// (x + 2 n D, (2 n - 1) D - x): the image reached by an even and by an odd
/// number of reflections.
inline std::pair<double, double> image_positions_1d(double x, long long n, double D) {
  require(std::isfinite(D) && D > 0.0, ErrorCode::invalid_argument, "cavity width must be > 0");
  require(std::isfinite(x) && std::abs(x) < 0.5 * D, ErrorCode::outside_cavity,
          "point must lie strictly between the mirrors");
  const double nd = static_cast<double>(n);
  return {x + 2.0 * nd * D, (2.0 * nd - 1.0) * D - x};
}

/// 4 integral dk |k| exp(-eps |k|) exp(i k delta) = 8 (eps^2 - delta^2) / (eps^2 + delta^2)^2.
inline double kernel1d(double delta, double eps) {
  require(std::isfinite(eps) && eps > 0.0, ErrorCode::regulator, "kernel needs eps > 0");
  require(std::isfinite(delta), ErrorCode::invalid_argument, "separation must be finite");
  const double e2 = eps * eps;
  const double d2 = delta * delta;
  return 8.0 * (e2 - d2) / ((e2 + d2) * (e2 + d2));
}

/// (16/9) integral d^3k |k| exp(-eps |k|) exp(i k.delta)
///   = (16/9) (4 pi / delta) Im[2 / (eps - i delta)^3].
inline double kernel3d(double delta, double eps) {
  require(std::isfinite(eps) && eps > 0.0, ErrorCode::regulator, "kernel needs eps > 0");
  require(std::isfinite(delta), ErrorCode::invalid_argument, "separation must be finite");
  const double d = std::abs(delta);
  constexpr double pre = 16.0 / 9.0 * 4.0 * std::numbers::pi;
  if (d < 1e-6 * eps) return pre * 6.0 / (eps * eps * eps * eps);  // delta -> 0 limit
  const cplx z(eps, -d);
  return pre / d * (2.0 / (z * z * z)).imag();
}

namespace detail {

/// sum_{m=1}^{M} m^(-p), compensated, ascending m.
inline double zeta_partial(long long m_max, int p) {
  KahanSum s;
  for (long long m = 1; m <= m_max; ++m) {
    const double md = static_cast<double>(m);
    double term = 1.0;
    for (int i = 0; i < p; ++i) term /= md;
    s += term;
  }
  return s.value();
}

}  // namespace detail

/// E = -(hbar c / 2 pi D) sum_{m>=1} m^-2 and F = -dE/dD = E / D, with the
/// integral tail 1/M added to the partial sum.
inline CasimirResult casimir_1d(const CavitySpec& spec) {
  spec.validate();
  require(spec.m_max >= 10, ErrorCode::invalid_argument, "casimir sums need m_max >= 10");
  const double hc = spec.units.hbar * spec.units.c;
  const double tail = 1.0 / static_cast<double>(spec.m_max);
  const double sum = detail::zeta_partial(spec.m_max, 2) + tail;
  const double e_scale = hc / (2.0 * std::numbers::pi * spec.D);
  CasimirResult r;
  r.energy_correction = -e_scale * sum;
  r.force = -e_scale / spec.D * sum;
  r.truncation_error_estimate = e_scale * tail;
  r.force_truncation_error_estimate = e_scale / spec.D * tail;
  return r;
}

/// E/A = -(hbar c / 8 pi^2 D^3) sum m^-4 and P = -d(E/A)/dD = 3 (E/A) / D,
/// with the integral tail 1/(3 M^3).
inline CasimirResult casimir_3d(const CavitySpec& spec) {
  spec.validate();
  require(spec.m_max >= 10, ErrorCode::invalid_argument, "casimir sums need m_max >= 10");
  const double hc = spec.units.hbar * spec.units.c;
  const double m = static_cast<double>(spec.m_max);
  const double tail = 1.0 / (3.0 * m * m * m);
  const double sum = detail::zeta_partial(spec.m_max, 4) + tail;
  const double e_scale = hc / (8.0 * std::numbers::pi * std::numbers::pi * spec.D * spec.D * spec.D);
  CasimirResult r;
  r.energy_correction = -e_scale * sum;
  r.force = -3.0 * e_scale / spec.D * sum;
  r.truncation_error_estimate = e_scale * tail;
  r.force_truncation_error_estimate = 3.0 * e_scale / spec.D * tail;
  return r;
}

/// Regulated image-kernel energy (hbar c / 8 pi) D sum_{m != 0} kernel1d(2 m D, eps),
/// with the large-m tail of the -8/delta^2 law added beyond m_max.
inline double casimir_1d_regulated(double D, double eps, long long m_max, const Units& units = {}) {
  require(D > 0.0 && m_max >= 1, ErrorCode::invalid_argument, "need D > 0 and m_max >= 1");
  KahanSum s;
  for (long long m = 1; m <= m_max; ++m) s += 2.0 * kernel1d(2.0 * static_cast<double>(m) * D, eps);
  s += 2.0 * (-2.0 / (D * D)) / static_cast<double>(m_max);
  return units.hbar * units.c / (8.0 * std::numbers::pi) * D * s.value();
}

/// Regulated image-kernel energy per area (9 hbar c / 2 (4 pi)^3) D sum_{m != 0} kernel3d(2 m D, eps).
inline double casimir_3d_regulated(double D, double eps, long long m_max, const Units& units = {}) {
  require(D > 0.0 && m_max >= 1, ErrorCode::invalid_argument, "need D > 0 and m_max >= 1");
  KahanSum s;
  for (long long m = 1; m <= m_max; ++m) s += 2.0 * kernel3d(2.0 * static_cast<double>(m) * D, eps);
  const double M = static_cast<double>(m_max);
  const double limit_coeff = -128.0 * std::numbers::pi / (9.0 * 16.0 * D * D * D * D);
  s += 2.0 * limit_coeff / (3.0 * M * M * M);
  const double four_pi = 4.0 * std::numbers::pi;
  return 9.0 * units.hbar * units.c / (2.0 * four_pi * four_pi * four_pi) * D * s.value();
}

/// eps -> 0 limit of f(eps) from a geometric ladder, extrapolating in eps^2.
template <class F>
double regulator_limit(F&& f, std::span<const double> eps_ladder) {
  require(eps_ladder.size() >= 2, ErrorCode::regulator, "eps ladder needs at least two rungs");
  std::vector<double> values;
  values.reserve(eps_ladder.size());
  for (double e : eps_ladder) {
    require(std::isfinite(e) && e > 0.0, ErrorCode::regulator, "eps ladder entries must be > 0");
    values.push_back(f(e));
  }
  return richardson_limit(eps_ladder, values, 2.0);
}

/// Grid for cavity-field work: two cavity widths starting at the left mirror,
/// so the interior occupies the first half and its mirror image the second.
inline SpatialGrid cavity_grid(double D, std::size_t points) {
  require(std::isfinite(D) && D > 0.0, ErrorCode::invalid_argument, "cavity width must be > 0");
  return SpatialGrid(2.0 * D, points, -0.5 * D);
}

enum class FieldComponent { E, B };
enum class FoldedRoute { image_sum, periodic };

struct FoldedFieldProfile {
  std::vector<double> x;
  std::vector<double> value;
};

namespace detail {

inline void require_cavity_packet(const BlipWavepacket& psi, double D) {
  const SpatialGrid expect = cavity_grid(D, psi.grid.size());
  require(psi.grid == expect, ErrorCode::invalid_argument,
          "cavity packets live on cavity_grid(D, N)");
  const double total = norm_sq(psi);
  double outside = std::norm(psi.amp[0]);
  for (std::size_t j = psi.amp.size() / 2; j < psi.amp.size(); ++j) outside += std::norm(psi.amp[j]);
  outside *= psi.grid.dx();
  require(outside <= kSupportTail * std::max(total, 1e-300), ErrorCode::outside_cavity,
          "packet mass outside the cavity exceeds the support tail");
}

}  // namespace detail

/// Folded field over the full 2D period from the exact spectral image sum:
/// the interior source moves with s, its mirror copy with -s, and the
/// periodic regularization adds every image. E carries -1 per reflection.
inline FoldedFieldProfile folded_field_period(const BlipWavepacket& psi, CoherentAmplitude alpha,
                                              const CavitySpec& spec, double t, FieldComponent obs) {
  spec.validate();
  detail::require_cavity_packet(psi, spec.D);
  const std::size_t n = psi.grid.size();
  BlipWavepacket mirrored(psi.grid, flip(psi.s), psi.lambda);
  for (std::size_t j = 0; j < n; ++j) mirrored.amp[j] = psi.amp[(n - j) % n];
  const RegularizationSpec reg{spec.units, spec.eps, RegularizationMode::spectral};
  const BlipWavepacket direct = regularize(evolve(psi, t, PropagatorKind::blip, spec.units), reg);
  const BlipWavepacket image = regularize(evolve(mirrored, t, PropagatorKind::blip, spec.units), reg);
  const double sgn = static_cast<double>(value(psi.s));
  FoldedFieldProfile out;
  for (std::size_t j = 0; j < n; ++j) {
    const double a = (alpha.alpha * direct.amp[j]).real();
    const double b = (alpha.alpha * image.amp[j]).real();
    out.x.push_back(psi.grid.x(j));
    out.value.push_back(obs == FieldComponent::E ? spec.units.c * (a - b) : sgn * (a + b));
  }
  return out;
}

/// Scale of one image's contribution at separation r: c |alpha| sqrt(hbar / 4 pi eps0 A c)
/// * integral |psi| dx, multiplied by r^(-3/2).
inline double image_field_scale(const BlipWavepacket& psi, CoherentAmplitude alpha, const Units& u) {
  double l1 = 0.0;
  for (const auto& a : psi.amp) l1 += std::abs(a);
  l1 *= psi.grid.dx();
  return u.c * std::abs(alpha.alpha) *
         std::sqrt(u.hbar / (4.0 * std::numbers::pi * u.eps0 * u.area * u.c)) * l1;
}

/// Bound on the images dropped beyond n_img: scale * sum_{n > n_img} ((2n - 1) D)^(-3/2).
inline double image_tail_bound(const BlipWavepacket& psi, CoherentAmplitude alpha,
                               const CavitySpec& spec) {
  KahanSum s;
  constexpr long long terms = 200000;
  for (long long n = spec.n_img + 1; n <= spec.n_img + terms; ++n)
    s += std::pow((2.0 * static_cast<double>(n) - 1.0) * spec.D, -1.5);
  // Integral remainder of the power law beyond the last explicit term.
  const double last = (2.0 * static_cast<double>(spec.n_img + terms) - 1.0) * spec.D;
  s += std::pow(last, -0.5) / spec.D;
  return image_field_scale(psi, alpha, spec.units) * s.value();
}

/// Folded field at interior grid points (-D/2, D/2).
/// image_sum: sum over |n| <= n_img of the regularized kernel (needs eps > 0)
/// applied to the even image at x + 2nD and the odd image at (2n - 1)D - x.
/// periodic: every image, via folded_field_period.
inline FoldedFieldProfile folded_field_profile(const BlipWavepacket& psi, CoherentAmplitude alpha,
                                               const CavitySpec& spec, double t, FieldComponent obs,
                                               FoldedRoute route = FoldedRoute::periodic) {
  spec.validate();
  detail::require_cavity_packet(psi, spec.D);
  const std::size_t n = psi.grid.size();
  const std::size_t half = n / 2;
  FoldedFieldProfile out;
  if (route == FoldedRoute::periodic) {
    const FoldedFieldProfile full = folded_field_period(psi, alpha, spec, t, obs);
    out.x.assign(full.x.begin() + 1, full.x.begin() + static_cast<std::ptrdiff_t>(half));
    out.value.assign(full.value.begin() + 1, full.value.begin() + static_cast<std::ptrdiff_t>(half));
    return out;
  }
  require(spec.eps > 0.0, ErrorCode::regulator, "the image-sum route needs eps > 0");
  const double dx = psi.grid.dx();
  const double sct = static_cast<double>(value(psi.s)) * spec.units.c * t;
  const double sgn = static_cast<double>(value(psi.s));
  // F(y) = sum_j R_eps(y - x_j) psi_j dx over the interior source.
  auto F = [&](double y) {
    cplx acc{};
    for (std::size_t j = 1; j < half; ++j)
      acc += kernel_regularized(y - psi.grid.x(j), spec.eps, spec.units) * psi.amp[j];
    return acc * dx;
  };
  const std::vector<std::size_t> idx = [&] {
    std::vector<std::size_t> v;
    for (std::size_t i = 1; i < half; ++i) v.push_back(i);
    return v;
  }();
  out.x.reserve(idx.size());
  for (std::size_t i : idx) out.x.push_back(psi.grid.x(i));
  out.value = parallel_map(idx.size(), [&](std::size_t k) {
    const double x = out.x[k];
    cplx even_sum{}, odd_sum{};
    for (long long m = -spec.n_img; m <= spec.n_img; ++m) {
      const double md = static_cast<double>(m);
      even_sum += F(x + 2.0 * md * spec.D - sct);
      odd_sum += F((2.0 * md - 1.0) * spec.D - x - sct);
    }
    const double a = (alpha.alpha * even_sum).real();
    const double b = (alpha.alpha * odd_sum).real();
    return obs == FieldComponent::E ? spec.units.c * (a - b) : sgn * (a + b);
  });
  return out;
}

/// Index-substitution check on G(a, b) = exp(-a^2 - b^2): the cavity double
/// sum over (n, m) of the odd and even image pairs against the reduced single
/// sum over m on the real line. quadrature_points is the number of Gauss
/// nodes per cavity width (a multiple of 20). Returns |LHS - RHS| / |RHS|.
inline double appendix_c_oracle(double D, int n_trunc, int quadrature_points) {
  require(std::isfinite(D) && D > 0.0, ErrorCode::invalid_argument, "D must be > 0");
  require(n_trunc >= 1, ErrorCode::invalid_argument, "N_trunc must be >= 1");
  require(quadrature_points >= 20 && quadrature_points % 20 == 0, ErrorCode::invalid_argument,
          "quadrature_points must be a positive multiple of 20");
  using Rule = boost::math::quadrature::gauss<double, 20>;
  // Composite nodes on [a, b] split into `panels` equal panels.
  auto nodes = [](double a, double b, int panels) {
    std::vector<std::pair<double, double>> out;
    const auto& abs = Rule::abscissa();
    const auto& wts = Rule::weights();
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * h;
      const double half = 0.5 * h;
      for (std::size_t i = 0; i < abs.size(); ++i) {
        if (abs[i] == 0.0) {
          out.emplace_back(mid, half * wts[i]);
        } else {
          out.emplace_back(mid - half * abs[i], half * wts[i]);
          out.emplace_back(mid + half * abs[i], half * wts[i]);
        }
      }
    }
    return out;
  };
  const int per_width = quadrature_points / 20;
  const auto cav = nodes(-0.5 * D, 0.5 * D, per_width);
  const int N = n_trunc;
  auto g = [](double a) { return std::exp(-a * a); };

  // LHS: G is separable, so each (n, m) double sum is a square of a single sum.
  KahanSum lhs;
  for (const auto& [x, wx] : cav) {
    for (const auto& [xp, wxp] : cav) {
      double odd = 0.0, even = 0.0;
      for (int n = -N; n <= N; ++n) {
        odd += g(x + xp + (2.0 * n - 1.0) * D);
        even += g(x - xp + 2.0 * n * D);
      }
      lhs += wx * wxp * (odd * odd + even * even);
    }
  }

  const double reach = (2.0 * N + 1.0) * D;
  const auto line = nodes(-reach, reach, per_width * (4 * N + 2));
  KahanSum rhs;
  for (const auto& [x, wx] : line) {
    for (const auto& [xp, wxp] : cav) {
      const double w = x - xp;
      double acc = 0.0;
      for (int m = -N; m <= N; ++m) acc += g(w + 2.0 * m * D);
      rhs += wx * wxp * g(w) * acc;
    }
  }
  return std::abs(lhs.value() - rhs.value()) / std::abs(rhs.value());
}

}  // namespace blipfield
