#include "cubicdelta/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "cubicdelta/errors.hpp"
#include "cubicdelta/expsums.hpp"
#include "cubicdelta/oscillatory.hpp"
#include "cubicdelta/quadrature.hpp"

namespace cubicdelta {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double omega_mass() {
  static const double mass = 0.25 * integrate([](double t) { return bump(t); }, -1.0, 1.0, 1e-15);
  return mass;
}

cplx expi(double theta) {
  theta -= std::floor(theta);
  return std::polar(1.0, kTwoPi * theta);
}

}  // namespace

double omega(double x) {
  if (x <= 0.5 || x >= 1) return 0;
  return bump(4 * x - 3) / omega_mass();
}

double h_eval(double x, double y) {
  if (!(x > 0)) throw std::invalid_argument("h_eval: x must be positive");
  double s = 0;
  for (i64 j = static_cast<i64>(std::ceil(0.5 / x)); static_cast<double>(j) * x < 1; ++j) {
    if (j < 1) continue;
    const double xj = x * static_cast<double>(j);
    s += omega(xj) / xj;
  }
  const double ay = std::abs(y);
  if (ay > 0) {
    for (i64 j = std::max<i64>(1, static_cast<i64>(std::ceil(ay / x))); static_cast<double>(j) * x < 2 * ay; ++j) {
      const double xj = x * static_cast<double>(j);
      s -= omega(ay / xj) / xj;
    }
  }
  return s;
}

DeltaKernel::DeltaKernel(double Y) : Y_(Y) {
  if (!(Y >= 1)) throw std::invalid_argument("DeltaKernel: Y must be at least 1");
  double total = 0;
  for (u64 n = 1; static_cast<double>(n) < Y; ++n)
    total += static_cast<double>(euler_phi(n)) * h_eval(static_cast<double>(n) / Y, 0);
  if (!(total > 0)) throw std::invalid_argument("DeltaKernel: Y too small for a nonzero normalization");
  cY_ = Y * Y / total;
}

double DeltaKernel::c_Y_divisor_form() const {
  double s = 0;
  for (u64 q = 1; static_cast<double>(q) < Y_; ++q) s += omega(static_cast<double>(q) / Y_);
  return Y_ / s;
}

u64 DeltaKernel::max_modulus(i64 t) const {
  const double at = std::abs(static_cast<double>(t));
  return static_cast<u64>(std::floor(std::max(Y_, 2 * at / Y_)));
}

double DeltaKernel::delta_sum(i64 t) const {
  const u64 qmax = max_modulus(t);
  std::vector<int> mu(qmax + 1, 1);
  std::vector<bool> composite(qmax + 1, false);
  for (u64 p = 2; p <= qmax; ++p) {
    if (composite[p]) continue;
    for (u64 k = p; k <= qmax; k += p) {
      if (k > p) composite[k] = true;
      mu[k] = -mu[k];
    }
    if (p <= qmax / p)
      for (u64 k = p * p; k <= qmax; k += p * p) mu[k] = 0;
  }
  const u64 at = static_cast<u64>(t < 0 ? -t : t);
  const double y = static_cast<double>(t) / (Y_ * Y_);
  double s = 0;
  for (u64 q = 1; q <= qmax; ++q) {
    const double hv = h_eval(static_cast<double>(q) / Y_, y);
    if (hv == 0) continue;
    double cq;
    if (at == 0) {
      cq = static_cast<double>(euler_phi(q));
    } else {
      const u64 g = std::gcd(q, at);
      i64 acc = 0;
      for (u64 d = 1; d * d <= g; ++d) {
        if (g % d) continue;
        acc += static_cast<i64>(d) * mu[q / d];
        if (d * d != g) acc += static_cast<i64>(g / d) * mu[q / (g / d)];
      }
      cq = static_cast<double>(acc);
    }
    s += cq * hv;
  }
  return cY_ * s / (Y_ * Y_);
}

double delta_identity_residual(const DeltaKernel& K, i64 t) {
  const double at = std::abs(static_cast<double>(t));
  if (at > K.Y() * K.Y()) throw std::invalid_argument("delta_identity_residual: |t| exceeds Y^2");
  return std::abs(K.delta_sum(t) - (t == 0 ? 1.0 : 0.0));
}

cplx osc_integral(const DiagonalCubicForm& F, const WeightSpec& w, const DeltaKernel& K, const std::vector<double>& c,
                  double n, double X, int grid) {
  const int m = F.m();
  if (grid < 16) throw std::invalid_argument("osc_integral: grid resolution must be at least 16 per axis");
  if (w.m() != m || static_cast<int>(c.size()) != m) throw std::invalid_argument("osc_integral: dimension mismatch");
  if (!(n >= 1)) throw std::invalid_argument("osc_integral: n must be at least 1");
  if (std::pow(static_cast<double>(grid), m) > 2e8) throw ScaleError("osc_integral: grid^m exceeds 2e8");
  const double Y = K.Y();
  const double x = n / Y;
  const double s = X * X * X / (Y * Y);
  std::vector<QuadRule> rules;
  std::vector<std::vector<double>> wt(static_cast<size_t>(m)), fv(static_cast<size_t>(m)), ph(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    rules.push_back(gauss_legendre(w[i].lo(), w[i].hi(), grid));
    for (size_t j = 0; j < rules[i].size(); ++j) {
      const double u = rules[i].x[j];
      wt[i].push_back(rules[i].w[j] * w[i](u));
      fv[i].push_back(s * static_cast<double>(F[i]) * u * u * u);
      ph[i].push_back(-X * c[i] * u / n);
    }
  }
  std::vector<size_t> idx(static_cast<size_t>(m), 0);
  cplx total = 0;
  while (true) {
    double weight = 1, y = 0, phase = 0;
    for (int i = 0; i < m; ++i) {
      weight *= wt[i][idx[i]];
      y += fv[i][idx[i]];
      phase += ph[i][idx[i]];
    }
    if (weight != 0) total += weight * h_eval(x, y) * expi(phase);
    int i = 0;
    while (i < m && ++idx[i] == static_cast<size_t>(grid)) idx[i++] = 0;
    if (i == m) break;
  }
  return std::pow(X, m) * total;
}

double sigma_Lperp(const LineSpace& L, const WeightSpec& w, double rel_tol) {
  const int m = L.m(), k = L.k();
  if (w.m() != m) throw std::invalid_argument("sigma_Lperp: weight dimension mismatch");
  std::vector<double> lo(static_cast<size_t>(k)), hi(static_cast<size_t>(k));
  for (int r = 0; r < k; ++r) {
    for (int i = 0; i < m; ++i) {
      const double g = static_cast<double>(L.gamma[r][i]);
      lo[r] += std::min(g * w[i].lo(), g * w[i].hi());
      hi[r] += std::max(g * w[i].lo(), g * w[i].hi());
    }
  }
  auto apply = [&](int panels) {
    std::vector<QuadRule> rules;
    for (int r = 0; r < k; ++r) rules.push_back(gauss_legendre(lo[r], hi[r], 16, panels));
    const size_t per = rules[0].size();
    std::vector<size_t> idx(static_cast<size_t>(k), 0);
    std::vector<double> u(static_cast<size_t>(m));
    double total = 0;
    while (true) {
      double weight = 1;
      for (int r = 0; r < k; ++r) weight *= rules[r].w[idx[r]];
      for (int i = 0; i < m; ++i) {
        double v = 0;
        for (int r = 0; r < k; ++r) v += static_cast<double>(L.M_inv[i][k + r]) * rules[r].x[idx[r]];
        u[i] = v;
      }
      total += weight * w(u);
      int r = 0;
      while (r < k && ++idx[r] == per) idx[r++] = 0;
      if (r == k) break;
    }
    return total;
  };
  const int max_panels = k <= 2 ? 64 : 16;
  double prev = apply(2);
  for (int panels = 4; panels <= max_panels; panels *= 2) {
    const double cur = apply(panels);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur) || cur == 0) return cur;
    prev = cur;
  }
  return prev;
}

namespace {

// E[G(R)] for R = sum_{i != j} F_i u_i^3 under prod_{i != j} psi_i(u_i) du_i, for several smooth G
// supported in [gmin, gmax]. The characteristic function of R is shared across the G.
std::vector<double> separable_averages(const DiagonalCubicForm& F, const WeightSpec& w, int j,
                                       const std::vector<std::function<double(double)>>& Gs, double gmin,
                                       double gmax) {
  const int m = F.m();
  double rmin = 0, rmax = 0;
  for (int i = 0; i < m; ++i) {
    if (i == j) continue;
    const double a = static_cast<double>(F[i]) * std::pow(w[i].lo(), 3);
    const double b = static_cast<double>(F[i]) * std::pow(w[i].hi(), 3);
    rmin += std::min(a, b);
    rmax += std::max(a, b);
  }
  std::vector<double> out(Gs.size(), 0.0);
  if (gmax <= rmin || gmin >= rmax) return out;
  const double lo = std::min(rmin, gmin), hi = std::max(rmax, gmax);
  const double pad = 0.05 * (hi - lo);
  const double y0 = lo - pad, Lw = (hi - lo) + 2 * pad;
  std::vector<std::vector<cplx>> coefs;
  std::vector<int> Ks;
  int Kmax = 0;
  for (const auto& G : Gs) {
    int K = 0;
    coefs.push_back(window_fourier(G, y0, Lw, (gmax - gmin) / 32, 1e-14, K));
    Ks.push_back(K);
    Kmax = std::max(Kmax, K);
  }
  // Phi_i(k) = int psi_i(u) e(k F_i u^3 / Lw) du. When the support avoids 0 this is a Fourier
  // coefficient of the density of F_i u^3, so one FFT replaces 2 Kmax + 1 quadratures.
  std::vector<std::vector<cplx>> phis;
  for (int i = 0; i < m; ++i) {
    std::vector<cplx> phi(static_cast<size_t>(2 * Kmax + 1));
    if (i != j) {
      const Bump b = w[i];
      const double Fi = static_cast<double>(F[i]);
      if (b.lo() > 0 || b.hi() < 0) {
        const double v1 = Fi * std::pow(b.lo(), 3), v2 = Fi * std::pow(b.hi(), 3);
        const double v0 = std::min(v1, v2) - 0.5 * (Lw - std::abs(v2 - v1));
        auto rho = [&](double v) {
          const double u = std::cbrt(v / Fi);
          const double val = b(u);
          return val == 0 ? 0.0 : val / (3 * std::abs(Fi) * u * u);
        };
        int Ki = 0;
        auto G = window_fourier(rho, v0, Lw, std::abs(v2 - v1) / 32, 1e-15, Ki);
        for (int k = -std::min(Ki, Kmax); k <= std::min(Ki, Kmax); ++k)
          phi[static_cast<size_t>(k + Kmax)] = Lw * G[static_cast<size_t>(-k + Ki)] * expi(k * v0 / Lw);
      } else {
        for (int k = 0; k <= Kmax; ++k) {
          const cplx v = bump_phase_integral(b, k * Fi / Lw, 0);
          phi[static_cast<size_t>(k + Kmax)] = v;
          phi[static_cast<size_t>(-k + Kmax)] = std::conj(v);
        }
      }
    }
    phis.push_back(std::move(phi));
  }
  for (int k = -Kmax; k <= Kmax; ++k) {
    cplx phi = expi(-k * y0 / Lw);
    for (int i = 0; i < m; ++i)
      if (i != j) phi *= phis[i][static_cast<size_t>(k + Kmax)];
    for (size_t g = 0; g < Gs.size(); ++g)
      if (std::abs(k) <= Ks[g]) out[g] += (coefs[g][static_cast<size_t>(k + Ks[g])] * phi).real();
  }
  return out;
}

}  // namespace

SigmaFReport sigma_F(const DiagonalCubicForm& F, const WeightSpec& w, double eps0) {
  const int m = F.m();
  if (w.m() != m) throw std::invalid_argument("sigma_F: weight dimension mismatch");
  if (!(eps0 > 0)) throw std::invalid_argument("sigma_F: eps0 must be positive");
  SigmaFReport rep;
  int j = -1;
  double best = -1;
  for (int i = 0; i < m; ++i) {
    const double gap = std::abs(w[i].center) - w[i].radius;
    if (gap >= 0 && gap > best) {
      best = gap;
      j = i;
    }
  }
  if (j < 0) throw std::invalid_argument("sigma_F: every bump support contains 0");
  rep.solved_coordinate = j;
  const Bump bj = w[j];
  const double Fj = static_cast<double>(F[j]);
  const double e1 = -Fj * std::pow(bj.lo(), 3), e2 = -Fj * std::pow(bj.hi(), 3);
  const double gmin = std::min(e1, e2), gmax = std::max(e1, e2);

  std::vector<std::function<double(double)>> Gs;
  Gs.push_back([&](double R) {
    const double u = std::cbrt(-R / Fj);
    const double v = bj(u);
    return v == 0 ? 0.0 : v / (3 * std::abs(Fj) * u * u);
  });
  for (int t = 0; t < 3; ++t) {
    const double eps = eps0 / static_cast<double>(1 << t);
    rep.eps.push_back(eps);
    Gs.push_back([&, eps](double R) {
      double a = std::cbrt((-R - eps) / Fj), b = std::cbrt((-R + eps) / Fj);
      if (a > b) std::swap(a, b);
      a = std::max(a, bj.lo());
      b = std::min(b, bj.hi());
      if (a >= b) return 0.0;
      QuadRule r = gauss_legendre(a, b, 24);
      double s = 0;
      for (size_t i = 0; i < r.size(); ++i) s += r.w[i] * bj(r.x[i]);
      return s / (2 * eps);
    });
  }
  auto vals = separable_averages(F, w, j, Gs, gmin - eps0, gmax + eps0);
  rep.coarea = vals[0];
  rep.slab.assign(vals.begin() + 1, vals.end());
  const double r1 = (4 * rep.slab[1] - rep.slab[0]) / 3;
  const double r2 = (4 * rep.slab[2] - rep.slab[1]) / 3;
  rep.value = (16 * r2 - r1) / 15;
  return rep;
}

SingularSeriesReport singular_series(const DiagonalCubicForm& F, u64 n_max) {
  if (n_max < 1) throw std::invalid_argument("singular_series: n_max must be positive");
  if (n_max > 100000) throw ScaleError("singular_series: n_max exceeds 1e5");
  const int m = F.m();
  SingularSeriesReport rep;
  rep.n_max = n_max;
  if (m == 4) rep.warning = "conditionally convergent; partial sums only";
  ExpSumEvaluator E(F);
  const IVec zero(static_cast<size_t>(m), 0);
  double sum = 0, block = 0;
  int j = 0;
  for (u64 n = 1; n <= n_max; ++n) {
    if (n == (u64{1} << (j + 1))) {
      rep.block_exponent.push_back(j);
      rep.block_abs_sum.push_back(block);
      rep.checkpoints.push_back(n - 1);
      rep.partial_sums.push_back(sum);
      block = 0;
      ++j;
    }
    double s = 1;
    for (auto [p, e] : factor(n)) {
      s *= E.prime_power(zero, p, e).real();
      if (s == 0) break;
    }
    const double term = s / std::pow(static_cast<double>(n), m);
    sum += term;
    block += std::abs(term);
  }
  if (rep.checkpoints.empty() || rep.checkpoints.back() != n_max) {
    rep.checkpoints.push_back(n_max);
    rep.partial_sums.push_back(sum);
  }
  rep.value = sum;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (size_t b = 0; b < rep.block_exponent.size(); ++b) {
    if (rep.block_exponent[b] < 4 || !(rep.block_abs_sum[b] > 0)) continue;
    const double lx = rep.block_exponent[b] * std::log(2.0), ly = std::log(rep.block_abs_sum[b]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt >= 2) {
    rep.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    const double ratio = std::pow(2.0, rep.slope);
    rep.tail_estimate = ratio < 1 ? rep.block_abs_sum.back() * ratio / (1 - ratio) : INFINITY;
  } else {
    rep.slope = NAN;
    rep.tail_estimate = NAN;
  }
  return rep;
}

}  // namespace cubicdelta
