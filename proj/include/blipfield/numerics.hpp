#pragma once

// Compensated summation and polynomial extrapolation to a zero step size.

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "blipfield/error.hpp"

namespace blipfield {

/// Neumaier-compensated accumulator. Order of additions is the caller's.
class KahanSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  KahanSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Value at h = 0 of the polynomial in h^order through (h_i, f_i), by
/// Neville's scheme. With order = 2 this cancels even error terms.
inline double richardson_limit(std::span<const double> h, std::span<const double> f,
                               double order = 1.0) {
  require(h.size() == f.size() && !h.empty(), ErrorCode::invalid_argument,
          "richardson needs matching, non-empty step and value ladders");
  std::vector<double> u(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    require(h[i] > 0.0 && std::isfinite(f[i]), ErrorCode::invalid_argument,
            "richardson steps must be positive and values finite");
    u[i] = std::pow(h[i], order);
  }
  std::vector<double> p(f.begin(), f.end());
  for (std::size_t level = 1; level < p.size(); ++level) {
    for (std::size_t i = 0; i + level < p.size(); ++i) {
      const double a = u[i];
      const double b = u[i + level];
      require(a != b, ErrorCode::invalid_argument, "richardson steps must be distinct");
      p[i] = (b * p[i] - a * p[i + 1]) / (b - a);
    }
  }
  return p[0];
}

}  // namespace blipfield
