#include "cubicdelta/delta.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <json.hpp>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <random>
#include <thread>

#include "cubicdelta/analytic.hpp"
#include "cubicdelta/errors.hpp"
#include "cubicdelta/expsums.hpp"
#include "cubicdelta/oscillatory.hpp"

namespace cubicdelta {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

cplx expi(double theta) {
  theta -= std::floor(theta);
  return std::polar(1.0, kTwoPi * theta);
}

// Runs body(i) for i in [0, count) on `workers` threads. Results are written by index, so any
// reduction done afterwards in index order is independent of the worker count.
void parallel_for(size_t count, int workers, const std::function<void(size_t)>& body) {
  if (workers <= 1 || count <= 1) {
    for (size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (size_t i; (i = next++) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Integer range of x_i with psi_i(x_i / X) > 0.
std::pair<i64, i64> coordinate_range(const Bump& b, double X) {
  i64 lo = static_cast<i64>(std::floor(X * b.lo())) + 1;
  i64 hi = static_cast<i64>(std::ceil(X * b.hi())) - 1;
  return {lo, hi};
}

// Weighted values of the partial form over the coordinates [from, to), aggregated by value.
std::vector<std::pair<i64, double>> half_values(const DiagonalCubicForm& F, const WeightSpec& w, double X, int from,
                                                int to) {
  std::vector<std::pair<i64, double>> acc{{0, 1.0}};
  for (int i = from; i < to; ++i) {
    auto [lo, hi] = coordinate_range(w[i], X);
    std::vector<std::pair<i64, double>> next;
    for (i64 x = lo; x <= hi; ++x) {
      const double wx = w[i](static_cast<double>(x) / X);
      if (wx == 0) continue;
      const i64 v = F[i] * x * x * x;
      for (auto [a, wa] : acc) next.emplace_back(a + v, wa * wx);
    }
    std::sort(next.begin(), next.end());
    acc.clear();
    for (auto [v, wv] : next) {
      if (!acc.empty() && acc.back().first == v)
        acc.back().second += wv;
      else
        acc.emplace_back(v, wv);
    }
  }
  return acc;
}

// Calls f(x, weight) for every lattice point with w(x / X) > 0.
void for_each_point(const DiagonalCubicForm& F, const WeightSpec& w, double X, double limit,
                    const std::function<void(const IVec&, double)>& f) {
  const int m = F.m();
  std::vector<std::pair<i64, i64>> ranges;
  double total = 1;
  for (int i = 0; i < m; ++i) {
    ranges.push_back(coordinate_range(w[i], X));
    total *= static_cast<double>(std::max<i64>(0, ranges.back().second - ranges.back().first + 1));
  }
  if (total > limit) throw ScaleError("lattice point enumeration exceeds the budget");
  if (total == 0) return;
  IVec x(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) x[i] = ranges[i].first;
  std::vector<double> u(static_cast<size_t>(m));
  while (true) {
    for (int i = 0; i < m; ++i) u[i] = static_cast<double>(x[i]) / X;
    const double wx = w(u);
    if (wx != 0) f(x, wx);
    int i = 0;
    while (i < m && ++x[i] > ranges[i].second) {
      x[i] = ranges[i].first;
      ++i;
    }
    if (i == m) break;
  }
}

double max_abs_form(const DiagonalCubicForm& F, const WeightSpec& w) {
  double lo = 0, hi = 0;
  for (int i = 0; i < F.m(); ++i) {
    const double a = static_cast<double>(F[i]) * std::pow(w[i].lo(), 3);
    const double b = static_cast<double>(F[i]) * std::pow(w[i].hi(), 3);
    lo += std::min(a, b);
    hi += std::max(a, b);
  }
  return std::max(std::abs(lo), std::abs(hi));
}

// Block of the pairing holding the support of each lamperp row; throws if a row spans blocks.
std::vector<std::array<int, 2>> row_blocks(const LineSpace& L) {
  std::vector<std::array<int, 2>> out;
  for (const auto& row : L.lamperp) {
    std::vector<int> support;
    for (int i = 0; i < L.m(); ++i)
      if (row[i] != 0) support.push_back(i);
    if (support.size() != 2) throw std::invalid_argument("line space basis rows are not supported on single blocks");
    out.push_back({support[0], support[1]});
  }
  return out;
}

}  // namespace

double DeltaParams::resolved_Y() const { return Y > 0 ? Y : std::pow(X, 1.5); }

i64 DeltaParams::resolved_C_max() const {
  return C_max > 0 ? C_max : static_cast<i64>(std::ceil(std::pow(X, 0.6)));
}

u64 DeltaParams::resolved_N_max(const DiagonalCubicForm& F, const WeightSpec& w) const {
  return N_max > 0 ? N_max : support_bound(F, w, X, resolved_Y());
}

void DeltaParams::validate() const {
  if (!(X >= 1)) throw std::invalid_argument("DeltaParams: X must be at least 1");
  if (Y < 0) throw std::invalid_argument("DeltaParams: Y must be nonnegative");
  if (!(P >= 1)) throw std::invalid_argument("DeltaParams: P must be at least 1");
  if (grid < 16) throw std::invalid_argument("DeltaParams: grid must be at least 16");
  if (workers < 1) throw std::invalid_argument("DeltaParams: workers must be at least 1");
  if (!(tol > 0) || tol >= 1) throw std::invalid_argument("DeltaParams: tol must lie in (0, 1)");
}

std::string DeltaParams::to_json() const {
  nlohmann::json j;
  j["X"] = X;
  j["Y"] = resolved_Y();
  j["N_max"] = N_max;
  j["C_max"] = resolved_C_max();
  j["P"] = P;
  j["grid"] = grid;
  j["tol"] = tol;
  j["workers"] = workers;
  if (c_order_seed) j["c_order_seed"] = c_order_seed;
  return j.dump();
}

u64 support_bound(const DiagonalCubicForm& F, const WeightSpec& w, double X, double Y) {
  const double s = X * X * X / (Y * Y);
  return static_cast<u64>(std::floor(Y * std::max(1.0, 2 * s * max_abs_form(F, w))));
}

double direct_count(const DiagonalCubicForm& F, const WeightSpec& w, double X) {
  const int m = F.m();
  if (w.m() != m) throw std::invalid_argument("direct_count: weight dimension mismatch");
  if ((m == 4 && X > 2000) || (m == 6 && X > 60)) throw ScaleError("direct_count: X exceeds the enumeration limit");
  auto A = half_values(F, w, X, 0, m / 2);
  auto B = half_values(F, w, X, m / 2, m);
  double total = 0;
  size_t b = B.size();
  for (auto [v, wa] : A) {
    while (b > 0 && B[b - 1].first > -v) --b;
    if (b > 0 && B[b - 1].first == -v) total += wa * B[b - 1].second;
  }
  return total;
}

double direct_count_naive(const DiagonalCubicForm& F, const WeightSpec& w, double X) {
  if (w.m() != F.m()) throw std::invalid_argument("direct_count_naive: weight dimension mismatch");
  double total = 0;
  for_each_point(F, w, X, 1e8, [&](const IVec& x, double wx) {
    if (F.eval(x) == 0) total += wx;
  });
  return total;
}

PointwiseDeltaReport pointwise_delta_count(const DiagonalCubicForm& F, const WeightSpec& w, double X, double Y) {
  if (w.m() != F.m()) throw std::invalid_argument("pointwise_delta_count: weight dimension mismatch");
  if (Y <= 0) Y = std::pow(X, 1.5);
  std::map<i64, double> mass;
  for_each_point(F, w, X, 1e7, [&](const IVec& x, double wx) { mass[static_cast<i64>(F.eval(x))] += wx; });
  DeltaKernel K(Y);
  PointwiseDeltaReport rep;
  rep.distinct_values = mass.size();
  for (auto [t, W] : mass) {
    if (t == 0) rep.direct = W;
    rep.via_delta += W * K.delta_sum(t);
  }
  rep.rel_diff = std::abs(rep.via_delta - rep.direct) / std::max(std::abs(rep.direct), 1e-300);
  return rep;
}

PoissonSwapReport poisson_swap(const DiagonalCubicForm& F, const WeightSpec& w, const DeltaParams& params, u64 n,
                               std::vector<i64> C_values) {
  params.validate();
  const int m = F.m();
  if (w.m() != m) throw std::invalid_argument("poisson_swap: weight dimension mismatch");
  if (n < 1) throw std::invalid_argument("poisson_swap: n must be positive");
  if (n > 50) throw ScaleError("poisson_swap: n exceeds 50");
  const double X = params.X, Y = params.resolved_Y();
  SeparableOscillatory S(F, w, X, Y, static_cast<double>(n), params.tol);
  if (C_values.empty()) C_values.push_back(S.suggested_C());
  std::sort(C_values.begin(), C_values.end());
  const i64 Cmax = C_values.back();
  if (C_values.front() < 0) throw std::invalid_argument("poisson_swap: C must be nonnegative");
  const int K = S.K();
  const double work = static_cast<double>(m) * (2.0 * K + 1) * (2.0 * static_cast<double>(Cmax) + 1);
  if (work > 4e9) throw ScaleError("poisson_swap: mode and cutoff budget exceeded");

  PoissonSwapReport rep;
  rep.n = n;
  rep.X = X;
  rep.Y = Y;
  rep.modes = K;
  rep.C_values = C_values;

  // g_n(b, r) = sum over x mod n of e_n(b x^3 + r x), for b = a F_i with a a unit.
  std::vector<u64> units;
  for (u64 a = 0; a < n; ++a)
    if (std::gcd(a, n) == 1) units.push_back(a);
  std::vector<cplx> tw(n);
  for (u64 j = 0; j < n; ++j) tw[j] = expi(static_cast<double>(j) / static_cast<double>(n));
  std::vector<u64> cube(n);
  for (u64 x = 0; x < n; ++x) cube[x] = mulmod(mulmod(x, x, n), x, n);
  const size_t nu = units.size();
  std::vector<cplx> g(static_cast<size_t>(m) * nu * n);
  for (int i = 0; i < m; ++i)
    for (size_t ai = 0; ai < nu; ++ai) {
      const u64 b = mulmod(units[ai], mod(F[i], n), n);
      for (u64 r = 0; r < n; ++r) {
        cplx s = 0;
        for (u64 x = 0; x < n; ++x) s += tw[(mulmod(b, cube[x], n) + mulmod(r, x, n)) % n];
        g[(static_cast<size_t>(i) * nu + ai) * n + r] = s;
      }
    }

  // G_i(a, k) accumulated per cutoff from folded rows of J_i(k, c).
  const size_t nc = C_values.size();
  const size_t modes = static_cast<size_t>(2 * K + 1);
  std::vector<cplx> G(nc * static_cast<size_t>(m) * nu * modes);
  auto Gat = [&](size_t ci, int i, size_t ai, int k) -> cplx& {
    return G[((ci * static_cast<size_t>(m) + static_cast<size_t>(i)) * nu + ai) * modes + static_cast<size_t>(k + K)];
  };
  std::vector<cplx> fold(nc * n);
  for (int i = 0; i < m; ++i)
    for (int k = -K; k <= K; ++k) {
      auto row = S.row(i, k, Cmax);
      std::fill(fold.begin(), fold.end(), cplx{});
      for (i64 c = -Cmax; c <= Cmax; ++c) {
        const u64 r = mod(c, n);
        const cplx v = row[static_cast<size_t>(c + Cmax)];
        for (size_t ci = 0; ci < nc; ++ci)
          if (std::abs(c) <= C_values[ci]) fold[ci * n + r] += v;
      }
      for (size_t ci = 0; ci < nc; ++ci)
        for (size_t ai = 0; ai < nu; ++ai) {
          cplx s = 0;
          const cplx* gi = &g[(static_cast<size_t>(i) * nu + ai) * n];
          for (u64 r = 0; r < n; ++r) s += gi[r] * fold[ci * n + r];
          Gat(ci, i, ai, k) = s;
        }
    }
  const double pref = std::pow(X, m) / std::pow(static_cast<double>(n), m);
  for (size_t ci = 0; ci < nc; ++ci) {
    cplx total = 0;
    for (size_t ai = 0; ai < nu; ++ai)
      for (int k = -K; k <= K; ++k) {
        cplx t = S.P(k);
        for (int i = 0; i < m; ++i) t *= Gat(ci, i, ai, k);
        total += t;
      }
    rep.lhs.push_back(pref * total);
  }

  const double x = static_cast<double>(n) / Y;
  for_each_point(F, w, X, 1e8, [&](const IVec& pt, double wx) {
    const i64 t = static_cast<i64>(F.eval(pt));
    const double hv = h_eval(x, static_cast<double>(t) / (Y * Y));
    if (hv == 0) return;
    const double term = wx * hv * static_cast<double>(ramanujan_sum(n, t));
    rep.rhs += term;
    rep.scale += std::abs(term);
  });
  for (const auto& v : rep.lhs) rep.residual.push_back(std::abs(v - rep.rhs));
  return rep;
}

double poisson_swap_residual(const DiagonalCubicForm& F, const WeightSpec& w, const DeltaParams& params, u64 n) {
  auto rep = poisson_swap(F, w, params, n);
  return rep.residual.back() / std::max(rep.scale, 1e-300);
}

ReversePoissonReport reverse_poisson_check(const DiagonalCubicForm& F, const LineSpace& L, const WeightSpec& w,
                                           const DeltaParams& params, u64 n) {
  params.validate();
  const int m = F.m(), k = L.k();
  if (w.m() != m) throw std::invalid_argument("reverse_poisson_check: weight dimension mismatch");
  const auto blocks = row_blocks(L);
  const double X = params.X, Y = params.resolved_Y();
  ReversePoissonReport rep;
  rep.n = n;
  for (const auto& row : L.lamperp) {
    double lo = 0, hi = 0;
    for (int i = 0; i < m; ++i) {
      const double a = static_cast<double>(row[i]) * w[i].lo(), b = static_cast<double>(row[i]) * w[i].hi();
      lo += std::min(a, b);
      hi += std::max(a, b);
    }
    rep.h_extent = std::max(rep.h_extent, X * std::max(std::abs(lo), std::abs(hi)));
  }
  for (u64 d : divisors(n))
    if (static_cast<double>(d) > rep.h_extent) {
      rep.n1 = d;
      break;
    }
  if (rep.n1 == 0) throw std::invalid_argument("reverse_poisson_check: no divisor of n exceeds X max |Lambda-perp u|");
  rep.n0 = n / rep.n1;

  SeparableOscillatory S(F, w, X, Y, static_cast<double>(n), params.tol);
  rep.C = params.C_max > 0 ? params.C_max : S.suggested_C();
  const i64 C = rep.C;
  const int K = S.K();
  if (static_cast<double>(m) * (2.0 * K + 1) * (2.0 * static_cast<double>(C) + 1) > 4e9)
    throw ScaleError("reverse_poisson_check: mode and cutoff budget exceeded");
  const size_t modes = static_cast<size_t>(2 * K + 1);
  const u64 n0 = rep.n0;

  // pair[p][b][k] = sum over y = b mod n0 with |y lamperp_p|_inf <= C of the two J factors,
  // and the same sum of absolute values for the error budget.
  std::vector<std::vector<cplx>> pair(static_cast<size_t>(k), std::vector<cplx>(n0 * modes));
  std::vector<std::vector<double>> pair_abs(static_cast<size_t>(k), std::vector<double>(modes));
  for (int p = 0; p < k; ++p) {
    const int i = blocks[p][0], j = blocks[p][1];
    const i64 li = L.lamperp[p][i], lj = L.lamperp[p][j];
    const i64 ymax = C / std::max(std::abs(li), std::abs(lj));
    for (int kk = -K; kk <= K; ++kk) {
      auto ri = S.row(i, kk, C), rj = S.row(j, kk, C);
      for (i64 y = -ymax; y <= ymax; ++y) {
        const cplx v = ri[static_cast<size_t>(y * li + C)] * rj[static_cast<size_t>(y * lj + C)];
        pair[p][mod(y, n0) * modes + static_cast<size_t>(kk + K)] += v;
        pair_abs[p][static_cast<size_t>(kk + K)] += std::abs(v);
      }
    }
  }
  const double n1f = static_cast<double>(rep.n1);
  const double pref = std::pow(X, m) * std::pow(n1f, -m / 2.0);
  double scale = 0;
  for (int kk = -K; kk <= K; ++kk) {
    double t = std::abs(S.P(kk));
    for (int p = 0; p < k; ++p) t *= pair_abs[p][static_cast<size_t>(kk + K)];
    scale += t;
  }
  scale *= pref;
  rep.sigma = sigma_Lperp(L, w);
  const double rhs = rep.sigma * std::pow(X, m / 2.0) * h_eval(static_cast<double>(n) / Y, 0);
  rep.budget = 1e3 * params.tol * scale + 1e-9 * std::abs(rhs);

  IVec b(static_cast<size_t>(k), 0);
  while (true) {
    cplx total = 0;
    for (int kk = -K; kk <= K; ++kk) {
      cplx t = S.P(kk);
      for (int p = 0; p < k; ++p) t *= pair[p][static_cast<u64>(b[p]) * modes + static_cast<size_t>(kk + K)];
      total += t;
    }
    ReversePoissonClass cls;
    cls.b_star = b;
    cls.lhs = pref * total;
    cls.rhs = rhs;
    cls.residual = std::abs(cls.lhs - rhs);
    rep.classes.push_back(cls);
    int p = 0;
    while (p < k && ++b[p] == static_cast<i64>(n0)) b[p++] = 0;
    if (p == k) break;
  }
  return rep;
}

namespace {

// Nonzero c = c* lamperp with |c|_inf <= C.
std::vector<IVec> lattice_box(const LineSpace& L, i64 C) {
  const int k = L.k(), m = L.m();
  std::vector<IVec> out;
  IVec cs(static_cast<size_t>(k), -C);
  while (true) {
    IVec c = c_of_cstar(L, cs);
    bool ok = false, inside = true;
    for (int i = 0; i < m; ++i) {
      if (c[i] != 0) ok = true;
      if (std::abs(c[i]) > C) inside = false;
    }
    if (ok && inside) out.push_back(c);
    int p = 0;
    while (p < k && ++cs[p] > C) cs[p++] = -C;
    if (p == k) break;
  }
  return out;
}

}  // namespace

StructuredReport structured_sum(const DiagonalCubicForm& F, const WeightSpec& w, const DeltaParams& params,
                                bool experiment) {
  params.validate();
  const int m = F.m();
  if (w.m() != m) throw std::invalid_argument("structured_sum: weight dimension mismatch");
  if (!experiment && (m != 4 || params.X > 10))
    throw ScaleError("structured_sum: beyond m = 4, X <= 10 requires the experiment flag");
  StructuredReport rep;
  rep.form = F.to_string();
  rep.weight = w.to_string();
  rep.params = params;
  rep.Y = params.resolved_Y();
  rep.C_max = params.resolved_C_max();
  rep.N_max = params.resolved_N_max(F, w);
  const double X = params.X, Y = rep.Y;
  const i64 C = rep.C_max;
  const DeltaKernel kernel(Y);
  rep.c_Y = kernel.c_Y();

  const auto lines = enumerate_lines(F);
  std::vector<std::vector<IVec>> boxes;
  for (const auto& L : lines) {
    boxes.push_back(lattice_box(L, C));
    if (params.c_order_seed) {
      std::mt19937_64 rng(params.c_order_seed + boxes.size());
      std::shuffle(boxes.back().begin(), boxes.back().end(), rng);
    }
  }

  ExpSumEvaluator E(F);
  struct PerN {
    std::vector<double> value, shell, dirichlet;
    double c0 = 0;
    bool ok = true;
    std::string error;
  };
  std::vector<PerN> per(rep.N_max);
  const IVec zero(static_cast<size_t>(m), 0);
  parallel_for(rep.N_max, params.workers, [&](size_t idx) {
    const u64 n = idx + 1;
    PerN& out = per[idx];
    out.value.assign(lines.size(), 0);
    out.shell.assign(lines.size(), 0);
    out.dirichlet.assign(lines.size(), 0);
    try {
      SeparableOscillatory S(F, w, X, Y, static_cast<double>(n), params.tol, C);
      S.prepare(C);
      const double nm = std::pow(static_cast<double>(n), -m);
      const auto divs = divisors(n);
      out.c0 = nm * (E(zero, n).value * S.I(zero)).real();
      for (size_t li = 0; li < lines.size(); ++li)
        for (const auto& c : boxes[li]) {
          const cplx I = S.I(c);
          const double term = nm * (E(c, n).value * I).real();
          out.value[li] += term;
          i64 norm = 0;
          for (i64 v : c) norm = std::max(norm, std::abs(v));
          if (2 * norm > C) out.shell[li] += term;
          double rebuilt = 0;
          for (u64 d0 : divs) {
            const u64 d1 = n / d0;
            rebuilt += E.error_term(c, d0) * static_cast<double>(euler_phi(d1)) / std::sqrt(static_cast<double>(d1));
          }
          const double Sc = rebuilt * std::pow(static_cast<double>(n), (m + 1) / 2.0);
          out.dirichlet[li] += nm * (Sc * I).real();
        }
    } catch (const ScaleError& e) {
      out.ok = false;
      out.error = e.what();
    }
  });

  const double norm = rep.c_Y / (Y * Y);
  for (size_t li = 0; li < lines.size(); ++li) {
    StructuredLine line;
    line.pairing = lines[li].pairing.to_string();
    line.c_count = boxes[li].size();
    for (const auto& p : per) {
      line.value += p.value[li];
      line.shell += p.shell[li];
      line.dirichlet_value += p.dirichlet[li];
    }
    line.value *= norm;
    line.shell *= norm;
    line.dirichlet_value *= norm;
    line.dirichlet_rel_diff =
        std::abs(line.dirichlet_value - line.value) / std::max(std::abs(line.value), 1e-300);
    line.predicted = sigma_Lperp(lines[li], w) * std::pow(X, m / 2.0);
    line.residual = line.value - line.predicted;
    rep.total_value += line.value;
    rep.total_predicted += line.predicted;
    rep.lines.push_back(line);
  }
  for (size_t idx = 0; idx < per.size(); ++idx) {
    rep.c0_value += per[idx].c0;
    if (!per[idx].ok && rep.complete) {
      rep.complete = false;
      rep.note = "n = " + std::to_string(idx + 1) + ": " + per[idx].error;
    }
  }
  rep.c0_value *= norm;
  rep.c0_predicted = sigma_F(F, w).value * singular_series(F, std::min<u64>(rep.N_max, 100000)).value *
                     std::pow(X, m - 3);
  if (m == 4 && rep.note.empty()) rep.note = "m = 4: singular series conditionally convergent; partial sums only";
  return rep;
}

std::string StructuredReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["form"] = form;
  j["weight"] = weight;
  j["params"] = nlohmann::json::parse(params.to_json());
  j["Y"] = Y;
  j["N_max"] = N_max;
  j["C_max"] = C_max;
  j["c_Y"] = c_Y;
  j["lines"] = nlohmann::json::array();
  for (const auto& l : lines)
    j["lines"].push_back({{"pairing", l.pairing},
                          {"value", l.value},
                          {"predicted", l.predicted},
                          {"residual", l.residual},
                          {"relative_residual", l.predicted != 0 ? l.residual / l.predicted : 0.0},
                          {"shell", l.shell},
                          {"dirichlet_value", l.dirichlet_value},
                          {"dirichlet_rel_diff", l.dirichlet_rel_diff},
                          {"c_count", l.c_count}});
  j["total_value"] = total_value;
  j["total_predicted"] = total_predicted;
  j["c0_value"] = c0_value;
  j["c0_predicted"] = c0_predicted;
  j["complete"] = complete;
  j["note"] = note;
  return j.dump(2);
}

BiasSplitReport bias_error_split_audit(const DiagonalCubicForm& F, const LineSpace& L, const WeightSpec& w,
                                       const DeltaParams& params) {
  params.validate();
  const int m = F.m();
  BiasSplitReport rep;
  rep.Y = params.resolved_Y();
  rep.P = params.P;
  const double X = params.X, Y = rep.Y;
  ExpSumEvaluator E(F);
  const double main = sigma_Lperp(L, w) * std::pow(X, m / 2.0);
  for (u64 n0 = 1; static_cast<double>(n0) <= params.P; ++n0) {
    const double avg = avg_error_over_coset(E, L, n0);
    rep.n0.push_back(n0);
    rep.coset_average.push_back(avg);
    rep.collapsed += avg * main * h_eval(static_cast<double>(n0) / Y, 0);
  }
  rep.collapsed_n0_one = main * h_eval(1 / Y, 0);
  for (u64 n = 1; static_cast<double>(n) < Y; ++n) {
    const double v = static_cast<double>(euler_phi(n)) * h_eval(static_cast<double>(n) / Y, 0) / (Y * Y);
    rep.prop_sum_unrestricted += v;
    if (static_cast<double>(n) >= Y / params.P) rep.prop_sum += v;
  }
  rep.c_Y = DeltaKernel(Y).c_Y();
  return rep;
}

}  // namespace cubicdelta
