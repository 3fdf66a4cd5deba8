#include "cubicdelta/oscillatory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cubicdelta/analytic.hpp"
#include "cubicdelta/errors.hpp"
#include "cubicdelta/quadrature.hpp"
#include "fft.hpp"

namespace cubicdelta {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

// e(theta) with theta reduced mod 1 first.
cplx expi(double theta) {
  theta -= std::floor(theta);
  return std::polar(1.0, kTwoPi * theta);
}

// Smooth step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t) {
  if (t <= 0) return 0;
  if (t >= 1) return 1;
  const double a = std::exp(-1 / t), b = std::exp(-1 / (1 - t));
  return a / (a + b);
}

size_t next_pow2(size_t v) {
  size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

// Fourier tail of psi((u - a) / r) falls below tol beyond this many cycles per unit.
double bump_bandwidth(double r, double tol = 1e-13) {
  const double l = std::log(1 / tol);
  return l * l / (4 * std::numbers::pi * r);
}

}  // namespace

std::vector<cplx> window_fourier(const std::function<cplx(double)>& g, double y0, double L, double feature,
                                 double tol, int& K) {
  size_t ny = next_pow2(std::max<size_t>(64, static_cast<size_t>(std::ceil(16 * L / feature))));
  while (true) {
    if (ny > (size_t{1} << 23)) throw ScaleError("window_fourier: resolution budget exceeded");
    std::vector<cplx> a(ny);
    for (size_t j = 0; j < ny; ++j) a[j] = g(y0 + L * static_cast<double>(j) / static_cast<double>(ny));
    detail::dft_negative(a);
    const int half = static_cast<int>(ny / 2);
    auto at = [&](int k) { return a[static_cast<size_t>(k >= 0 ? k : k + static_cast<int>(ny))] / static_cast<double>(ny); };
    double peak = 0, tail = 0;
    for (int k = -half + 1; k < half; ++k) {
      double v = std::abs(at(k));
      peak = std::max(peak, v);
      if (std::abs(k) >= half / 2) tail = std::max(tail, v);
    }
    if (tail > tol * peak && peak > 0) {
      ny *= 2;
      continue;
    }
    K = 0;
    for (int k = half - 1; k > 0; --k)
      if (std::abs(at(k)) > tol * peak || std::abs(at(-k)) > tol * peak) {
        K = k;
        break;
      }
    std::vector<cplx> out;
    for (int k = -K; k <= K; ++k) out.push_back(at(k));
    return out;
  }
}

cplx bump_phase_integral(const Bump& b, double a, double nu) {
  const double umax = std::max(std::abs(b.lo()), std::abs(b.hi()));
  const double cycles = (3 * std::abs(a) * umax * umax + std::abs(nu) + bump_bandwidth(b.radius)) * 2 * b.radius;
  const int panels = 8 + static_cast<int>(std::ceil(cycles / 2));
  QuadRule r = gauss_legendre(b.lo(), b.hi(), 20, panels);
  cplx s = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    const double u = r.x[i];
    s += r.w[i] * b(u) * expi(a * u * u * u - nu * u);
  }
  return s;
}

SeparableOscillatory::SeparableOscillatory(const DiagonalCubicForm& F, const WeightSpec& w, double X, double Y,
                                           double n, double tol, i64 C_hint)
    : w_(w), X_(X), n_(n), tol_(tol) {
  if (w.m() != F.m()) throw std::invalid_argument("SeparableOscillatory: weight dimension mismatch");
  if (!(X > 0) || !(Y > 0) || !(n > 0)) throw std::invalid_argument("SeparableOscillatory: X, Y, n must be positive");
  const int m = F.m();
  const double x = n / Y;
  s_ = X * X * X / (Y * Y);
  prefactor_ = std::pow(X, m);
  double ylo = 0, yhi = 0;
  for (int i = 0; i < m; ++i) {
    coeff_.push_back(static_cast<double>(F[i]));
    lo_.push_back(w[i].lo());
    hi_.push_back(w[i].hi());
    const double a = coeff_[i] * std::pow(lo_[i], 3), b = coeff_[i] * std::pow(hi_[i], 3);
    ylo += s_ * std::min(a, b);
    yhi += s_ * std::max(a, b);
  }
  const double pad = std::max({2 * x, 0.1 * (yhi - ylo), 1e-3});
  const double y0 = ylo - pad;
  L_ = (yhi - ylo) + 2 * pad;
  auto g = [&](double y) {
    const double chi = smooth_step((y - y0) / pad) * smooth_step((y0 + L_ - y) / pad);
    return chi == 0 ? 0.0 : chi * h_eval(x, y);
  };
  int Kh = 0;
  auto G = window_fourier(g, y0, L_, std::min(x, pad) / 4, tol, Kh);
  K_ = Kh;
  if (C_hint >= 0) K_ = std::min(K_, mode_cutoff(C_hint));
  P_.resize(static_cast<size_t>(2 * K_ + 1));
  for (int k = -K_; k <= K_; ++k) P_[static_cast<size_t>(k + K_)] = G[static_cast<size_t>(k + Kh)] * expi(-k * y0 / L_);
}

bool SeparableOscillatory::avoids_zero(int i) const { return lo_[i] > 0 || hi_[i] < 0; }

int SeparableOscillatory::mode_cutoff(i64 C) const {
  // J_i(k, c) is below tol once 3 |a_k| u^2 exceeds X |c| / n plus the bump bandwidth on all of
  // supp psi_i, and one negligible factor suffices.
  double best = 1e300;
  for (int i = 0; i < m(); ++i) {
    if (!avoids_zero(i)) continue;
    const double umin = std::min(std::abs(lo_[i]), std::abs(hi_[i]));
    const double rate = X_ * static_cast<double>(C) / n_ + 2 * bump_bandwidth(w_[i].radius, tol_);
    best = std::min(best, L_ * rate / (3 * s_ * std::abs(coeff_[i]) * umin * umin));
  }
  return best > 1e9 ? std::numeric_limits<int>::max() : static_cast<int>(std::ceil(best)) + 1;
}

std::vector<cplx> SeparableOscillatory::column(int i, i64 c) const {
  if (!avoids_zero(i)) throw std::invalid_argument("SeparableOscillatory::column: support contains 0");
  // With v = u^3, J_i(k, c) = int rho(v) e(k v / Lv) dv where Lv = L / (s F_i).
  const double Fi = coeff_[i];
  const double Lv = L_ / (s_ * std::abs(Fi));
  const double v1 = std::pow(lo_[i], 3), v2 = std::pow(hi_[i], 3);
  const double vlo = std::min(v1, v2), vhi = std::max(v1, v2);
  const double v0 = vlo - 0.5 * (Lv - (vhi - vlo));
  const Bump b = w_[i];
  const double nu = X_ * static_cast<double>(c) / n_;
  auto rho = [&](double v) -> cplx {
    const double u = std::cbrt(v);
    const double val = b(u);
    return val == 0 ? cplx{} : val / (3 * u * u) * expi(-nu * u);
  };
  const double umin = std::min(std::abs(lo_[i]), std::abs(hi_[i]));
  const double feature = 3 * umin * umin / (bump_bandwidth(b.radius, tol_) + std::abs(nu));
  int Kr = 0;
  auto G = window_fourier(rho, v0, Lv, std::min(feature, Lv / (2.0 * K_ + 1)) * 4, tol_ * 1e-2, Kr);
  std::vector<cplx> out(static_cast<size_t>(2 * K_ + 1));
  const double sign = Fi > 0 ? 1 : -1;
  for (int k = -K_; k <= K_; ++k) {
    // Frequency k s F_i / L = sign k / Lv; coefficient index -sign k.
    const int idx = -static_cast<int>(sign) * k;
    if (std::abs(idx) > Kr) continue;
    out[static_cast<size_t>(k + K_)] = Lv * G[static_cast<size_t>(idx + Kr)] * expi(sign * k * v0 / Lv);
  }
  return out;
}

std::vector<cplx> SeparableOscillatory::row(int i, int k, i64 C) const {
  if (C < 0) throw std::invalid_argument("SeparableOscillatory::row: C must be nonnegative");
  if (k < -K_ || k > K_) throw std::out_of_range("SeparableOscillatory::row: mode outside -K..K");
  const size_t width = static_cast<size_t>(2 * C + 1);
  const double r = w_[i].radius;
  const double umax = std::max(std::abs(lo_[i]), std::abs(hi_[i]));
  const double a = k * s_ * coeff_[i] / L_;
  const double rate = 3 * std::abs(a) * umax * umax + X_ * static_cast<double>(C) / n_ + 2 * bump_bandwidth(r, tol_);
  const size_t N = next_pow2(std::max<size_t>(width, static_cast<size_t>(std::ceil(n_ / X_ * rate))));
  const double delta = n_ / (X_ * static_cast<double>(N));
  const size_t M = static_cast<size_t>(std::floor((hi_[i] - lo_[i]) / delta));
  std::vector<cplx> bins(N);
  for (size_t j = 1; j < M; ++j) {
    const double u = lo_[i] + static_cast<double>(j) * delta;
    bins[j % N] += w_[i](u) * expi(a * u * u * u);
  }
  detail::dft_negative(bins);
  std::vector<cplx> out(width);
  for (i64 c = -C; c <= C; ++c) {
    const size_t b = static_cast<size_t>(((c % static_cast<i64>(N)) + static_cast<i64>(N)) % static_cast<i64>(N));
    out[static_cast<size_t>(c + C)] = delta * expi(-X_ * static_cast<double>(c) * lo_[i] / n_) * bins[b];
  }
  return out;
}

void SeparableOscillatory::prepare(i64 C) {
  if (C < 0) throw std::invalid_argument("SeparableOscillatory::prepare: C must be nonnegative");
  const int m = this->m();
  const size_t width = static_cast<size_t>(2 * C + 1);
  const size_t modes = static_cast<size_t>(2 * K_ + 1);
  if (static_cast<double>(m) * static_cast<double>(modes) * static_cast<double>(width) > 5e7)
    throw ScaleError("SeparableOscillatory::prepare: table exceeds 5e7 entries");
  C_ = C;
  J_.assign(static_cast<size_t>(m) * modes * width, cplx{});
  auto at = [&](int i, int k, i64 c) -> cplx& {
    return J_[(static_cast<size_t>(i) * modes + static_cast<size_t>(k + K_)) * width + static_cast<size_t>(c + C)];
  };
  for (int i = 0; i < m; ++i) {
    // One FFT per c beats one per mode once the mode count exceeds the c range.
    if (avoids_zero(i) && static_cast<i64>(modes) >= 2 * C + 1) {
      for (i64 c = -C; c <= C; ++c) {
        auto col = column(i, c);
        for (int k = -K_; k <= K_; ++k) at(i, k, c) = col[static_cast<size_t>(k + K_)];
      }
    } else {
      for (int k = -K_; k <= K_; ++k) {
        auto r = row(i, k, C);
        for (i64 c = -C; c <= C; ++c) at(i, k, c) = r[static_cast<size_t>(c + C)];
      }
    }
  }
}

cplx SeparableOscillatory::I(const IVec& c) const {
  if (static_cast<int>(c.size()) != m()) throw std::invalid_argument("SeparableOscillatory::I: c has wrong length");
  for (i64 v : c)
    if (v < -C_ || v > C_) throw std::out_of_range("SeparableOscillatory::I: c outside the prepared range");
  cplx total = 0;
  for (int k = -K_; k <= K_; ++k) {
    cplx t = P(k);
    for (int i = 0; i < m(); ++i) t *= J(i, k, c[i]);
    total += t;
  }
  return prefactor_ * total;
}

i64 SeparableOscillatory::suggested_C() const {
  double rate = 0, rmin = 1e300;
  for (int i = 0; i < m(); ++i) {
    const double umax = std::max(std::abs(lo_[i]), std::abs(hi_[i]));
    rate = std::max(rate, 3 * K_ * s_ * std::abs(coeff_[i]) / L_ * umax * umax);
    rmin = std::min(rmin, w_[i].radius);
  }
  return static_cast<i64>(std::ceil(n_ / X_ * (rate + 2 * bump_bandwidth(rmin, tol_))));
}

}  // namespace cubicdelta
