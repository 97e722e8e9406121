#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "blipfield/dynamics.hpp"
#include "generators.hpp"

using namespace blipfield;

namespace {

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double peak(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Band-limited interpolant of psi at arbitrary x by direct summation.
cplx interpolate(const BlipWavepacket& psi, const MomentumWavepacket& spec, double x) {
  const MomentumGrid kg(psi.grid);
  const double s = static_cast<double>(value(psi.s));
  cplx acc{};
  for (std::size_t m = 0; m < kg.size(); ++m) acc += spec.amp[m] * std::polar(1.0, s * kg.k(m) * x);
  return acc * kg.dk() / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

TEST(Evolve, ZeroTimeIsIdentity) {
  const SpatialGrid g(64.0, 1024);
  const auto p = gaussian_packet(g, {1.0, 2.0, 0.5});
  for (auto kind : {PropagatorKind::blip, PropagatorKind::standard})
    EXPECT_EQ(max_abs_diff(evolve(p, 0.0, kind).amp, p.amp), 0.0);
  const auto t = to_momentum(p);
  for (auto kind : {PropagatorKind::blip, PropagatorKind::standard})
    EXPECT_EQ(max_abs_diff(evolve(t, 0.0, kind).amp, t.amp), 0.0);
}

TEST(Evolve, BlipSevenCellShift) {
  const SpatialGrid g(64.0, 1024);
  const auto p = gaussian_packet(g, {0.0, 1.0, 2.0});
  const double t = 7.0 * g.dx();
  const auto shifted = evolve(p, t, PropagatorKind::blip);
  // Spectral route, independent of the index shift.
  const auto spectral = to_position(evolve(to_momentum(p), t, PropagatorKind::blip));
  const std::size_t n = g.size();
  double err = 0.0, err_spec = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    err = std::max(err, std::abs(shifted.amp[(j + 7) % n] - p.amp[j]));
    err_spec = std::max(err_spec, std::abs(spectral.amp[(j + 7) % n] - p.amp[j]));
  }
  EXPECT_LT(err, 1e-10);
  EXPECT_LT(err_spec, 1e-10);
}

TEST(Evolve, StandardModelSplitsSymmetricPacket) {
  const SpatialGrid g(256.0, 4096);
  const double sigma = 1.0;
  const auto p = gaussian_packet(g, {0.0, sigma, 0.0});
  const auto q = evolve(p, sigma, PropagatorKind::standard);
  EXPECT_LT(1.0 - mass_outside(q, 0.0, sigma), 1.0 - mass_outside(p, 0.0, sigma));
  // Distance of |q| to every whole-cell translate of |p|.
  const std::size_t n = g.size();
  double best = 1e300;
  for (long d = -200; d <= 200; ++d) {
    const auto shift = static_cast<std::size_t>(d + static_cast<long>(n));
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double diff = std::abs(q.amp[j]) - std::abs(p.amp[(j + n - shift % n) % n]);
      acc += diff * diff;
    }
    best = std::min(best, std::sqrt(acc * g.dx()));
  }
  EXPECT_GT(best, 0.1);
}

TEST(Evolve, UnitarityProperty) {
  blipfield::testing::Gen gen(21);
  const SpatialGrid g(128.0, 2048);
  for (int i = 0; i < 100; ++i) {
    const auto p = gen.packet(g);
    const double t = gen.uniform(0.0, 50.0);
    for (auto kind : {PropagatorKind::blip, PropagatorKind::standard})
      ASSERT_NEAR(norm_sq(evolve(p, t, kind)), 1.0, 1e-12) << "case " << i;
  }
}

TEST(Evolve, BlipShapeInvarianceProperty) {
  blipfield::testing::Gen gen(22);
  const SpatialGrid g(64.0, 512);
  for (int i = 0; i < 20; ++i) {
    const auto p = gen.packet(g, 2.0);
    const double t = gen.uniform(0.0, 20.0);
    const auto q = evolve(p, t, PropagatorKind::blip);
    const auto spec = to_momentum(p);
    const double d = static_cast<double>(value(p.s)) * t;
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) acc += std::norm(q.amp[j] - interpolate(p, spec, g.x(j) - d));
    ASSERT_LT(std::sqrt(acc * g.dx()), 1e-10) << "case " << i;
  }
}

TEST(Evolve, BlipBestWholeCellTranslateIsSct) {
  blipfield::testing::Gen gen(23);
  const SpatialGrid g(64.0, 512);
  const std::size_t n = g.size();
  for (int i = 0; i < 10; ++i) {
    const auto p = gen.packet(g);
    const int cells = gen.integer(-100, 100);
    const auto q = evolve(p, static_cast<double>(cells) * g.dx(), PropagatorKind::blip);
    long best_d = 0;
    double best = 1e300;
    for (long d = -128; d <= 128; ++d) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = static_cast<std::size_t>(((static_cast<long>(j) - d) % static_cast<long>(n) + static_cast<long>(n)) % static_cast<long>(n));
        acc += std::norm(q.amp[j] - p.amp[src]);
      }
      if (acc < best) {
        best = acc;
        best_d = d;
      }
    }
    EXPECT_EQ(best_d, value(p.s) * cells);
    EXPECT_LT(std::sqrt(best * g.dx()), 1e-10);
  }
}

TEST(Evolve, OneSidedStandardEqualsBlip) {
  blipfield::testing::Gen gen(24);
  const SpatialGrid g(256.0, 4096);
  for (int i = 0; i < 20; ++i) {
    const auto spec = gaussian_spectrum(g, {gen.uniform(0.0, 3.0), gen.uniform(0.2, 1.0), gen.uniform(-40, 40), true});
    const auto psi = to_position(spec);
    const double t = gen.uniform(0.0, 60.0);
    const auto a = evolve(psi, t, PropagatorKind::standard);
    const auto b = evolve(psi, t, PropagatorKind::blip);
    ASSERT_LT(max_abs_diff(a.amp, b.amp), 1e-10) << "case " << i;
  }
}

TEST(MeanPosition, RigidShiftBothSigns) {
  const SpatialGrid g(64.0, 1024);
  EXPECT_NEAR(mean_position(gaussian_packet(g, {0.0, 1.0, 0.0}, Sign::plus), 3.0, PropagatorKind::blip), 3.0, 1e-8);
  EXPECT_NEAR(mean_position(gaussian_packet(g, {0.0, 1.0, 0.0}, Sign::minus), 3.0, PropagatorKind::blip), -3.0, 1e-8);
  EXPECT_NEAR(mean_position(gaussian_packet(g, {0.0, 1.0, 0.7}, Sign::plus), 2.3, PropagatorKind::blip), 2.3, 1e-8);
}

TEST(MeanPosition, StandardSymmetricSplitStaysCentred) {
  const SpatialGrid g(64.0, 1024);
  const auto p = gaussian_packet(g, {0.0, 1.0, 0.0});
  for (double t : {0.5, 3.0, 10.0, 17.3}) EXPECT_NEAR(mean_position(p, t, PropagatorKind::standard), 0.0, 1e-8) << t;
}

TEST(LightCone, BlipNeverLeaks) {
  blipfield::testing::Gen gen(25);
  const SpatialGrid g(256.0, 4096);
  for (int i = 0; i < 20; ++i) {
    const auto p = gaussian_packet(g, {gen.uniform(-20, 20), gen.uniform(0.5, 3.0), gen.uniform(-2, 2)}, gen.sign());
    ASSERT_LT(light_cone_leakage(p, gen.uniform(0.0, 60.0), PropagatorKind::blip), 1e-10) << "case " << i;
  }
}

TEST(LightCone, StandardGaussianLeaks) {
  const SpatialGrid g(256.0, 4096);
  const auto p = gaussian_packet(g, {0.0, 1.0, 0.0});
  const double leak = light_cone_leakage(p, 5.0, PropagatorKind::standard);
  EXPECT_GT(leak, 1e-6);
  // Regression value on this grid.
  EXPECT_NEAR(leak, 6.2106290897616236e-03, 1e-9);
}

TEST(LightCone, OneSidedSpectrumIsRefused) {
  const SpatialGrid g(256.0, 4096);
  const auto psi = to_position(gaussian_spectrum(g, {0.0, 0.5, 0.0, true}));
  // Tail mass beyond a quarter cell exceeds the support tail budget.
  EXPECT_GT(mass_outside(psi, mean_position(psi), 0.25 * g.length()), kSupportTail);
  try {
    light_cone_leakage(psi, 5.0, PropagatorKind::standard);
    FAIL() << "expected not_localized";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_localized);
  }
}

TEST(Field, VacuumHasNoField) {
  const SpatialGrid g(64.0, 1024);
  const auto f = field_expectation(gaussian_packet(g, {0.0, 1.0, 1.0}), {0.0}, {}, 2.0);
  EXPECT_EQ(peak(f.E), 0.0);
  EXPECT_EQ(peak(f.B), 0.0);
}

TEST(Field, BlipFieldIsTransported) {
  const SpatialGrid g(128.0, 2048);
  for (Sign s : {Sign::plus, Sign::minus}) {
    const auto p = gaussian_packet(g, {0.0, 1.5, 1.2}, s);
    const cplx alpha(0.7, 0.4);
    const double t = 9.3;
    const auto f0 = field_expectation(p, {alpha}, {}, 0.0);
    const auto ft = field_expectation(p, {alpha}, {}, t);
    // Translate the t = 0 profile spectrally by s c t.
    BlipWavepacket e0(g, s, Polarization::H);
    for (std::size_t j = 0; j < g.size(); ++j) e0.amp[j] = f0.E[j];
    const auto moved = evolve(e0, t, PropagatorKind::blip);
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) acc += std::pow(ft.E[j] - moved.amp[j].real(), 2);
    EXPECT_LT(std::sqrt(acc * g.dx()), 1e-8);
    for (std::size_t j = 0; j < g.size(); ++j) ASSERT_NEAR(ft.B[j], static_cast<double>(value(s)) * ft.E[j], 1e-15);
  }
}

TEST(Field, EnergyEqualsFieldEnergyDensity) {
  // eps0 A integral (E^2 + c^2 B^2) / 2 dx reproduces the energy observable.
  blipfield::testing::Gen gen(26);
  const SpatialGrid g(128.0, 2048);
  const Units u{1.3, 2.0, 0.7, 1.9};
  for (int i = 0; i < 10; ++i) {
    const auto p = gen.packet(g);
    const CoherentAmplitude a{gen.complex(2.0)};
    const auto f = field_expectation(p, a, {u, 0.0, RegularizationMode::spectral}, 0.0);
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) acc += f.E[j] * f.E[j] + u.c * u.c * f.B[j] * f.B[j];
    const double field_energy = 0.5 * u.eps0 * u.area * acc * g.dx();
    ASSERT_NEAR(field_energy, energy_expectation(p, a, u), 1e-10 * std::max(1.0, field_energy)) << "case " << i;
  }
}

TEST(ModePair, OppositePhasesCancelField) {
  const SpatialGrid g(512.0, 8192);
  const cplx alpha(0.8, -0.3);
  const ModePair pair{1.0, {alpha}, {-std::conj(alpha)}, 0.05};
  const auto [pos, neg] = pair.packets(g);
  const double scale = peak(field_expectation(pos, {alpha}, {}, 0.0).E);
  for (double t : {0.0, 13.7}) {
    const auto f = field_expectation(pair, g, {}, t);
    EXPECT_LT(peak(f.E), 1e-8 * scale);
    EXPECT_LT(peak(f.B), 1e-8 * scale);
  }
}

TEST(ModePair, InPhaseQuadruplesEnergy) {
  const SpatialGrid g(512.0, 8192);
  const cplx alpha(0.8, -0.3);
  const ModePair pair{1.0, {alpha}, {std::conj(alpha)}, 0.05};
  const auto [pos, neg] = pair.packets(g);
  EXPECT_NEAR(energy_expectation(pair, g) / energy_expectation(pos, {alpha}), 4.0, 0.04);
}

TEST(ModePair, RejectsBroadPackets) {
  const SpatialGrid g(512.0, 8192);
  EXPECT_THROW((ModePair{1.0, {1.0}, {1.0}, 0.2}.packets(g)), Error);
}

TEST(Energy, VacuumIsZero) {
  const SpatialGrid g(64.0, 1024);
  EXPECT_EQ(energy_expectation(gaussian_packet(g, {0.0, 1.0, 1.0}), {0.0}), 0.0);
}

TEST(Energy, SinglePhotonCarriesHbarCK) {
  const SpatialGrid g(512.0, 8192);
  for (double k0 : {0.5, 1.0, 3.0}) {
    for (Sign s : {Sign::plus, Sign::minus}) {
      const auto p = gaussian_packet(g, {0.0, 0.5 / (k0 / 20.0), k0}, s);
      EXPECT_NEAR(energy_expectation(p, {std::polar(1.0, 0.9)}) / k0, 1.0, 0.01) << k0;
    }
  }
  const Units u{2.0, 3.0, 0.5, 4.0};
  const auto p = gaussian_packet(g, {0.0, 10.0, 1.0});
  EXPECT_NEAR(energy_expectation(p, {1.0}, u) / (u.hbar * u.c * 1.0), 1.0, 0.01);
}

TEST(Energy, ConservedUnderBlipEvolution) {
  blipfield::testing::Gen gen(27);
  const SpatialGrid g(128.0, 2048);
  for (int i = 0; i < 20; ++i) {
    std::vector<Excitation> ex;
    for (int k = 0; k < 3; ++k) ex.push_back({gen.packet(g), {gen.complex(2.0)}});
    const double e0 = energy_expectation(ex);
    const double t = gen.uniform(0.0, 40.0);
    for (auto& e : ex) e.psi = evolve(e.psi, t, PropagatorKind::blip);
    ASSERT_NEAR(energy_expectation(ex), e0, 1e-10 * std::max(1.0, e0)) << "case " << i;
  }
}

TEST(Energy, PositivityProperty) {
  blipfield::testing::Gen gen(28);
  const SpatialGrid g(64.0, 512);
  for (int i = 0; i < 1000; ++i) {
    std::vector<Excitation> ex;
    const int parts = gen.integer(1, 4);
    for (int k = 0; k < parts; ++k) ex.push_back({gen.packet(g), {gen.complex(3.0)}});
    ASSERT_GE(energy_expectation(ex), -1e-12) << "case " << i;
  }
}
