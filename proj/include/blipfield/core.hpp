#pragma once

// Units, grids, wavepackets and coherent-state coefficient algebra.

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "blipfield/error.hpp"

namespace blipfield {

using cplx = std::complex<double>;

/// Physical constants carried by every formula. Natural units by default.
struct Units {
  double hbar = 1.0;
  double c = 1.0;
  double eps0 = 1.0;
  double area = 1.0;  // transverse area A of the one-dimensional field

  void validate() const {
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    require(positive(hbar) && positive(c) && positive(eps0) && positive(area),
            ErrorCode::invalid_argument, "units must be finite and strictly positive");
    require(std::isfinite(omega0_sq()), ErrorCode::invalid_argument,
            "2*hbar/(eps0*area*c) overflows");
  }

  /// Squared field-amplitude scale 2*hbar/(eps0*A*c).
  double omega0_sq() const noexcept { return 2.0 * hbar / (eps0 * area * c); }
};

enum class Sign : int { plus = 1, minus = -1 };
enum class Polarization { H, V };

constexpr int value(Sign s) noexcept { return static_cast<int>(s); }
constexpr Sign flip(Sign s) noexcept { return s == Sign::plus ? Sign::minus : Sign::plus; }

/// Uniform periodic grid x_j = x_min + j*dx, j in [0, N), N a power of two.
class SpatialGrid {
 public:
  SpatialGrid(double length, std::size_t points)
      : SpatialGrid(length, points, -0.5 * length) {}

  SpatialGrid(double length, std::size_t points, double x_min)
      : length_(length), points_(points), x_min_(x_min) {
    require(std::isfinite(length) && length > 0.0, ErrorCode::invalid_argument,
            "grid length must be positive");
    require(points >= 4 && std::has_single_bit(points), ErrorCode::invalid_argument,
            "grid size must be a power of two >= 4, got " + std::to_string(points));
    require(std::isfinite(x_min), ErrorCode::invalid_argument, "grid origin must be finite");
    dx_ = length_ / static_cast<double>(points_);
  }

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return points_; }
  double dx() const noexcept { return dx_; }
  double x_min() const noexcept { return x_min_; }
  double x_max() const noexcept { return x_min_ + length_; }
  double x(std::size_t j) const noexcept { return x_min_ + static_cast<double>(j) * dx_; }
  double center() const noexcept { return x_min_ + 0.5 * length_; }
  double dk() const noexcept { return 2.0 * std::numbers::pi / length_; }

  /// Signed distance from a to b folded into [-L/2, L/2).
  double periodic_delta(double a, double b) const noexcept {
    double d = std::fmod(b - a, length_);
    if (d >= 0.5 * length_) d -= length_;
    if (d < -0.5 * length_) d += length_;
    return d;
  }

  friend bool operator==(const SpatialGrid&, const SpatialGrid&) = default;

 private:
  double length_;
  std::size_t points_;
  double x_min_;
  double dx_ = 0.0;
};

/// Wavenumbers conjugate to a SpatialGrid, stored in ascending order:
/// k_m = (m - N/2 + 1) dk, so k covers (-pi/dx, pi/dx] and k_{N/2-1} = 0.
class MomentumGrid {
 public:
  explicit MomentumGrid(const SpatialGrid& grid) : points_(grid.size()), dk_(grid.dk()) {}

  std::size_t size() const noexcept { return points_; }
  double dk() const noexcept { return dk_; }
  std::size_t zero_index() const noexcept { return points_ / 2 - 1; }
  double k(std::size_t m) const noexcept {
    return (static_cast<double>(m) - static_cast<double>(zero_index())) * dk_;
  }

  /// Index of -k_m. The Nyquist wavenumber is its own reflection.
  std::size_t reflected(std::size_t m) const noexcept {
    return m == points_ - 1 ? m : points_ - 2 - m;
  }

  /// Bin of the unnormalized DFT that carries k_m.
  std::size_t fft_bin(std::size_t m) const noexcept {
    return (m + points_ - zero_index()) % points_;
  }

 private:
  std::size_t points_;
  double dk_;
};

/// Probability amplitude psi_{s,lambda}(x) sampled on a spatial grid.
struct BlipWavepacket {
  SpatialGrid grid;
  Sign s = Sign::plus;
  Polarization lambda = Polarization::H;
  std::vector<cplx> amp;

  BlipWavepacket(SpatialGrid g, Sign sign, Polarization pol)
      : grid(g), s(sign), lambda(pol), amp(g.size(), cplx{}) {}
  BlipWavepacket(SpatialGrid g, Sign sign, Polarization pol, std::vector<cplx> a)
      : grid(g), s(sign), lambda(pol), amp(std::move(a)) {
    require(amp.size() == grid.size(), ErrorCode::invalid_argument,
            "amplitude array does not match grid size");
  }
};

/// Spectral amplitudes on the conjugate wavenumber grid. For the standard
/// (positive-frequency) model the plain spectrum is stored with s = plus.
struct MomentumWavepacket {
  SpatialGrid grid;  // spatial grid this spectrum is conjugate to
  Sign s = Sign::plus;
  Polarization lambda = Polarization::H;
  std::vector<cplx> amp;

  MomentumWavepacket(SpatialGrid g, Sign sign, Polarization pol)
      : grid(g), s(sign), lambda(pol), amp(g.size(), cplx{}) {}
  MomentumWavepacket(SpatialGrid g, Sign sign, Polarization pol, std::vector<cplx> a)
      : grid(g), s(sign), lambda(pol), amp(std::move(a)) {
    require(amp.size() == grid.size(), ErrorCode::invalid_argument,
            "amplitude array does not match grid size");
  }

  MomentumGrid k_grid() const { return MomentumGrid(grid); }
};

struct CoherentAmplitude {
  cplx alpha{};
};

inline double norm_sq(std::span<const cplx> amp, double cell) {
  double acc = 0.0;
  for (const auto& a : amp) acc += std::norm(a);
  return acc * cell;
}

inline double norm_sq(const BlipWavepacket& p) { return norm_sq(p.amp, p.grid.dx()); }
inline double norm_sq(const MomentumWavepacket& p) { return norm_sq(p.amp, p.grid.dk()); }

/// L2 distance between two amplitude arrays sampled on the same cells.
inline double l2_distance(std::span<const cplx> a, std::span<const cplx> b, double cell) {
  require(a.size() == b.size(), ErrorCode::invalid_argument, "size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc * cell);
}

/// Position coordinate used for moments. The seam sample x_0 is equidistant
/// from both ends of the periodic cell and is assigned the cell centre.
inline double moment_coordinate(const SpatialGrid& grid, std::size_t j) noexcept {
  return j == 0 ? grid.center() : grid.x(j);
}

inline double mean_position(const BlipWavepacket& p) {
  double mass = 0.0;
  double first = 0.0;
  for (std::size_t j = 0; j < p.amp.size(); ++j) {
    const double w = std::norm(p.amp[j]);
    mass += w;
    first += w * moment_coordinate(p.grid, j);
  }
  require(mass > 0.0, ErrorCode::invalid_argument, "mean position of an empty packet");
  return first / mass;
}

inline double mean_wavenumber(const MomentumWavepacket& p) {
  const MomentumGrid kg = p.k_grid();
  double mass = 0.0;
  double first = 0.0;
  for (std::size_t m = 0; m < p.amp.size(); ++m) {
    const double w = std::norm(p.amp[m]);
    mass += w;
    first += w * kg.k(m);
  }
  require(mass > 0.0, ErrorCode::invalid_argument, "mean wavenumber of an empty spectrum");
  return first / mass;
}

/// Mass outside the periodic interval [center - radius, center + radius].
inline double mass_outside(const BlipWavepacket& p, double center, double radius) {
  double acc = 0.0;
  for (std::size_t j = 0; j < p.amp.size(); ++j) {
    if (std::abs(p.grid.periodic_delta(center, p.grid.x(j))) > radius) acc += std::norm(p.amp[j]);
  }
  return acc * p.grid.dx();
}

/// A centre and radius outside of which at most `tail_tolerance` of the
/// packet mass lies.
struct Localization {
  double center = 0.0;
  double radius = 0.0;
};

/// Default tail fraction defining a packet's effective support.
inline constexpr double kSupportTail = 1e-12;

/// Smallest support radius about the mean position that leaves at most
/// tail_tolerance (relative) of the mass outside. Packets that need more than
/// a quarter of the periodic cell are not localized.
inline Localization localize(const BlipWavepacket& p, double tail_tolerance = kSupportTail) {
  const double total = norm_sq(p);
  require(total > 0.0, ErrorCode::not_localized, "empty packet has no support");
  const double center = mean_position(p);
  std::vector<std::pair<double, double>> by_distance;
  by_distance.reserve(p.amp.size());
  for (std::size_t j = 0; j < p.amp.size(); ++j) {
    by_distance.emplace_back(std::abs(p.grid.periodic_delta(center, p.grid.x(j))),
                             std::norm(p.amp[j]) * p.grid.dx());
  }
  std::sort(by_distance.begin(), by_distance.end());
  // Walk inwards from the farthest sample while the tail stays under budget.
  const double budget = tail_tolerance * total;
  double tail = 0.0;
  double radius = 0.0;
  for (auto it = by_distance.rbegin(); it != by_distance.rend(); ++it) {
    if (tail + it->second > budget) {
      radius = it->first;
      break;
    }
    tail += it->second;
  }
  require(radius <= 0.25 * p.grid.length(), ErrorCode::not_localized,
          "packet mass is spread over more than half the grid (support radius " +
              std::to_string(radius) + ")");
  return {center, radius};
}

struct GaussianSpec {
  double x0 = 0.0;
  double sigma = 1.0;  // position standard deviation of |psi|^2
  double k0 = 0.0;     // carrier wavenumber
};

/// Normalized Gaussian packet psi ~ exp(-(x-x0)^2 / 4 sigma^2) exp(i k0 x).
inline BlipWavepacket gaussian_packet(const SpatialGrid& grid, const GaussianSpec& g,
                                      Sign s = Sign::plus, Polarization lambda = Polarization::H) {
  require(std::isfinite(g.x0) && std::isfinite(g.sigma) && std::isfinite(g.k0),
          ErrorCode::invalid_argument, "gaussian parameters must be finite");
  require(g.sigma > 2.0 * grid.dx(), ErrorCode::resolution,
          "sigma " + std::to_string(g.sigma) + " is not resolvable at dx " +
              std::to_string(grid.dx()));
  require(g.x0 - 6.0 * g.sigma >= grid.x_min() && g.x0 + 6.0 * g.sigma <= grid.x_max(),
          ErrorCode::boundary, "packet support x0 +/- 6 sigma leaves the grid");

  BlipWavepacket p(grid, s, lambda);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.x(j);
    const double u = (x - g.x0) / g.sigma;
    p.amp[j] = std::exp(-0.25 * u * u) * cplx(std::cos(g.k0 * x), std::sin(g.k0 * x));
  }
  const double scale = 1.0 / std::sqrt(norm_sq(p));
  for (auto& a : p.amp) a *= scale;
  return p;
}

struct SpectralGaussianSpec {
  double k0 = 0.0;
  double sigma_k = 1.0;      // standard deviation of |psi~|^2 in k
  double x0 = 0.0;           // centre of the corresponding position packet
  bool one_sided = false;    // keep only k > 0 (standard-model forward light)
};

/// Normalized Gaussian spectrum psi~(k) ~ exp(-(k-k0)^2 / 4 sigma_k^2) exp(-i s k x0).
/// With one_sided the spectrum is truncated to k > 0, which destroys
/// localization in position space.
inline MomentumWavepacket gaussian_spectrum(const SpatialGrid& grid, const SpectralGaussianSpec& g,
                                            Sign s = Sign::plus,
                                            Polarization lambda = Polarization::H) {
  require(g.sigma_k > 0.0 && std::isfinite(g.sigma_k) && std::isfinite(g.k0) &&
              std::isfinite(g.x0),
          ErrorCode::invalid_argument, "spectral gaussian parameters must be finite, sigma_k > 0");
  const MomentumGrid kg(grid);
  require(g.sigma_k > 2.0 * kg.dk(), ErrorCode::resolution, "sigma_k not resolvable on k grid");
  MomentumWavepacket p(grid, s, lambda);
  for (std::size_t m = 0; m < kg.size(); ++m) {
    const double k = kg.k(m);
    if (g.one_sided && k <= 0.0) continue;
    const double u = (k - g.k0) / g.sigma_k;
    const double phase = -static_cast<double>(value(s)) * k * g.x0;
    p.amp[m] = std::exp(-0.25 * u * u) * cplx(std::cos(phase), std::sin(phase));
  }
  const double n = norm_sq(p);
  require(n > 0.0, ErrorCode::resolution, "spectrum has no support on the k grid");
  const double scale = 1.0 / std::sqrt(n);
  for (auto& a : p.amp) a *= scale;
  return p;
}

/// sum_{n>=0} |c_{n+1}|^2 / (2^n n!) for coherent coefficients
/// c_n = exp(-|alpha|^2/2) alpha^n, in closed form.
inline double coherent_prefactor(CoherentAmplitude a) {
  const double n = std::norm(a.alpha);
  return n * std::exp(-0.5 * n);
}

/// |c_2|^2 = exp(-|alpha|^2) |alpha|^4.
inline double two_photon_weight(CoherentAmplitude a) {
  const double n = std::norm(a.alpha);
  return std::exp(-n) * n * n;
}

}  // namespace blipfield
