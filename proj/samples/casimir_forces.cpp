// Casimir force in 1D and pressure in 3D from the zeta sums, compared with
// the regulated image-kernel sums extrapolated to zero regulator.

#include <cstdio>
#include <vector>

#include "blipfield/blipfield.hpp"

int main() {
  using namespace blipfield;
  const std::vector<double> ladder{0.08, 0.04, 0.02, 0.01};
  for (double D : {0.5, 1.0, 2.0}) {
    CavitySpec spec;
    spec.D = D;
    const CasimirResult one = casimir_1d(spec);
    spec.m_max = 10000;
    const CasimirResult three = casimir_3d(spec);
    const double e1 = regulator_limit([&](double e) { return casimir_1d_regulated(D, e, 100000); }, ladder);
    const double e3 = regulator_limit([&](double e) { return casimir_3d_regulated(D, e, 10000); }, ladder);
    std::printf("D %.2f  1D: E %.10f (images %.10f) F %.10f   3D: E/A %.10f (images %.10f) P %.10f\n",
                D, one.energy_correction, e1, one.force, three.energy_correction, e3, three.force);
  }
}
