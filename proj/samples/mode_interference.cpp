// Two coherent excitations at +k0 and -k0 with the same propagation sign:
// opposite-phase amplitudes cancel the field, in-phase ones quadruple the energy.

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "blipfield/blipfield.hpp"

int main() {
  using namespace blipfield;
  const SpatialGrid grid(512.0, 8192);
  const cplx alpha(0.8, 0.6);
  ModePair pair{1.0, {alpha}, {-std::conj(alpha)}, 0.05};

  auto [pos, neg] = pair.packets(grid);
  const double single_energy = energy_expectation(pos, {alpha});
  const FieldProfile single = field_expectation(pos, {alpha}, {}, 0.0);
  const FieldProfile cancelled = field_expectation(pair, grid, {}, 0.0);
  auto peak = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  std::printf("single excitation: energy %.8f, peak |E| %.6e\n", single_energy, peak(single.E));
  std::printf("alpha_neg = -conj(alpha): peak |E| %.3e\n", peak(cancelled.E));
  pair.alpha_neg = {std::conj(alpha)};
  std::printf("alpha_neg = +conj(alpha): energy ratio %.8f\n",
              energy_expectation(pair, grid) / single_energy);
}
