#pragma once

// Thin FFTW wrapper. Plans are created once per (size, direction) under a
// lock and executed through the new-array interface, which is thread-safe.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace blipfield::detail {

enum class FftDirection : int { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(std::size_t n, FftDirection dir) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(n, static_cast<int>(dir));
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<fftw_complex> in(n), out(n);
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in.data(), out.data(),
                                      static_cast<int>(dir), FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_PRESERVE_INPUT);
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

/// Unnormalized DFT: out_q = sum_j in_j exp(-+2 pi i j q / N).
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& in,
                                             FftDirection dir) {
  std::vector<std::complex<double>> out(in.size());
  if (in.empty()) return out;
  fftw_plan plan = PlanCache::instance().get(in.size(), dir);
  // std::complex<double> is layout-compatible with fftw_complex.
  auto* src = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plan, src, dst);
  return out;
}

}  // namespace blipfield::detail
