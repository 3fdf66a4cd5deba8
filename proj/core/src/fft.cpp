#include "fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace cubicdelta::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex mu;
  return mu;
}

void dft(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  if (n <= 128) {
    auto tw = twiddles(n);
    std::vector<cplx> out(n);
    for (std::size_t b = 0; b < n; ++b) {
      cplx s = 0;
      std::size_t idx = 0;
      for (std::size_t t = 0; t < n; ++t) {
        s += a[t] * (sign > 0 ? tw[idx] : std::conj(tw[idx]));
        idx += b;
        if (idx >= n) idx -= n;
      }
      out[b] = s;
    }
    a.swap(out);
    return;
  }
  auto* buf = reinterpret_cast<fftw_complex*>(a.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign > 0 ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace

std::vector<cplx> twiddles(std::size_t n) {
  std::vector<cplx> tw(n);
  const double step = 2 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t r = 0; r < n; ++r) {
    // Reduce to |angle| <= pi before evaluating.
    const double ang = step * (2 * r <= n ? static_cast<double>(r) : -static_cast<double>(n - r));
    tw[r] = {std::cos(ang), std::sin(ang)};
  }
  return tw;
}

void dft_positive(std::vector<cplx>& a) { dft(a, +1); }
void dft_negative(std::vector<cplx>& a) { dft(a, -1); }

}  // namespace cubicdelta::detail
