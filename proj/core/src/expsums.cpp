#include "cubicdelta/expsums.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "cubicdelta/errors.hpp"
#include "fft.hpp"

namespace cubicdelta {

namespace {

constexpr size_t kTableBudget = size_t{1} << 23;

void require_length(const DiagonalCubicForm& F, const IVec& c) {
  if (static_cast<int>(c.size()) != F.m()) throw std::invalid_argument("expsum: c has wrong length");
}

std::vector<u64> units_mod(u64 n) {
  if (n == 1) return {0};
  std::vector<char> coprime(n, 1);
  for (const auto& [p, e] : factor(n))
    for (u64 a = 0; a < n; a += p) coprime[a] = 0;
  std::vector<u64> u;
  u.reserve(euler_phi(n));
  for (u64 a = 1; a < n; ++a)
    if (coprime[a]) u.push_back(a);
  return u;
}

u64 cube_mod(u64 x, u64 n) { return mulmod(mulmod(x, x, n), x, n); }

std::vector<i64> ramanujan_table(u64 n) {
  std::vector<i64> r(n);
  for (u64 f = 0; f < n; ++f) r[f] = ramanujan_sum(n, static_cast<i64>(f));
  return r;
}

cplx finish_from_counts(const std::vector<i64>& counts, u64 n, double& scale) {
  auto rs = ramanujan_table(n);
  auto tw = detail::twiddles(n);
  cplx s = 0;
  scale = 0;
  for (u64 l = 0; l < n; ++l) {
    i128 acc = 0;
    for (u64 f = 0; f < n; ++f) acc += static_cast<i128>(counts[f * n + l]) * rs[f];
    s += static_cast<double>(acc) * tw[l];
    scale += std::abs(static_cast<double>(acc));
  }
  return s;
}

}  // namespace

const char* to_string(ExpSumMethod m) {
  switch (m) {
    case ExpSumMethod::brute:
      return "brute";
    case ExpSumMethod::separable:
      return "separable";
    case ExpSumMethod::closed_form:
      return "closed_form";
    case ExpSumMethod::crt_composed:
      return "crt_composed";
  }
  return "unknown";
}

void check_real(const ExpSumValue& v, double scale) {
  if (std::abs(v.value.imag()) > 1e-9 * (1.0 + std::abs(v.value)) + 1e-12 * scale)
    throw InvariantViolation("expsum: imaginary part " + std::to_string(v.value.imag()) + " at n = " + std::to_string(v.n));
}

ExpSumValue expsum_brute(const DiagonalCubicForm& F, const IVec& c, u64 n) {
  require_length(F, c);
  if (n == 0) throw std::invalid_argument("expsum_brute: n must be positive");
  if (n > 400) throw ScaleError("expsum_brute: n exceeds the oracle range 400");
  std::vector<i64> dist(n * n, 0), next(n * n);
  dist[0] = 1;
  for (int i = 0; i < F.m(); ++i) {
    std::fill(next.begin(), next.end(), 0);
    u64 Fi = mod(F[i], n), ci = mod(c[i], n);
    for (u64 x = 0; x < n; ++x) {
      u64 df = mulmod(Fi, cube_mod(x, n), n), dl = mulmod(ci, x, n);
      for (u64 f = 0; f < n; ++f) {
        u64 nf = f + df >= n ? f + df - n : f + df;
        const i64* src = &dist[f * n];
        i64* dst = &next[nf * n];
        for (u64 l = 0; l < n; ++l) {
          u64 nl = l + dl >= n ? l + dl - n : l + dl;
          dst[nl] += src[l];
        }
      }
    }
    dist.swap(next);
  }
  double scale = 0;
  ExpSumValue v{n, c, finish_from_counts(dist, n, scale), ExpSumMethod::brute};
  check_real(v, scale);
  return v;
}

ExpSumValue expsum_naive(const DiagonalCubicForm& F, const IVec& c, u64 n) {
  require_length(F, c);
  if (n == 0) throw std::invalid_argument("expsum_naive: n must be positive");
  double cost = std::pow(static_cast<double>(n), F.m());
  if (cost > 1e8) throw ScaleError("expsum_naive: n^m exceeds 1e8");
  const int m = F.m();
  std::vector<i64> counts(n * n, 0);
  std::vector<u64> x(static_cast<size_t>(m), 0);
  while (true) {
    u64 f = 0, l = 0;
    for (int i = 0; i < m; ++i) {
      f = (f + mulmod(mod(F[i], n), cube_mod(x[i], n), n)) % n;
      l = (l + mulmod(mod(c[i], n), x[i], n)) % n;
    }
    ++counts[f * n + l];
    int t = 0;
    while (t < m && ++x[t] == n) x[t++] = 0;
    if (t == m) break;
  }
  double scale = 0;
  ExpSumValue v{n, c, finish_from_counts(counts, n, scale), ExpSumMethod::brute};
  check_real(v, scale);
  return v;
}

ExpSumEvaluator::ExpSumEvaluator(DiagonalCubicForm F, std::shared_ptr<ExpSumCache> cache)
    : F_(std::move(F)), form_key_(F_.to_string()), cache_(cache ? std::move(cache) : std::make_shared<ExpSumCache>()) {}

ExpSumEvaluator::TablePtr ExpSumEvaluator::table(u64 n, u64 d) {
  {
    std::lock_guard lock(table_mu_);
    auto it = tables_.find({n, d});
    if (it != tables_.end()) return it->second;
  }
  // T[b] = sum_x e_n(b x^3 + d x) = sum_t A[t] e_n(b t), A[t] = sum_{x^3 = t} e_n(d x).
  auto tw = detail::twiddles(n);
  std::vector<cplx> A(n, 0.0);
  for (u64 x = 0; x < n; ++x) A[cube_mod(x, n)] += tw[mulmod(d, x, n)];
  detail::dft_positive(A);
  auto ptr = std::make_shared<const std::vector<cplx>>(std::move(A));
  std::lock_guard lock(table_mu_);
  if (table_entries_ + n > kTableBudget) {
    tables_.clear();
    table_entries_ = 0;
  }
  tables_[{n, d}] = ptr;
  table_entries_ += n;
  return ptr;
}

cplx ExpSumEvaluator::kernel(const IVec& c, u64 n, double* scale) {
  if (scale) *scale = 1;
  if (n == 1) return 1.0;
  if (n > kMaxModulus) throw ScaleError("expsum: modulus exceeds 1e6");
  const int m = F_.m();
  std::vector<TablePtr> tabs(static_cast<size_t>(m));
  std::vector<u64> beta(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    // c_i = g u mod n with u a unit; substituting x -> u^{-1} x moves u into the cubic coefficient.
    u64 gamma = mod(c[i], n);
    u64 g = gamma == 0 ? n : std::gcd(gamma, n);
    u64 u = gamma == 0 ? 1 : gamma / g;
    while (std::gcd(u, n) != 1) u += n / g;
    u64 uinv = invmod(u % n, n);
    beta[i] = mulmod(mod(F_[i], n), cube_mod(uinv, n), n);
    tabs[i] = table(n, g % n);
  }
  auto units = units_mod(n);
  cplx s = 0;
  for (u64 a : units) {
    cplx prod = 1.0;
    for (int i = 0; i < m; ++i) prod *= (*tabs[i])[a * beta[i] % n];
    s += prod;
  }
  if (scale) {
    // Table entries that vanish exactly still carry FFT noise, so bound by the table maxima.
    *scale = static_cast<double>(units.size());
    for (const auto& t : tabs) {
      double mx = 0;
      for (const auto& v : *t) mx = std::max(mx, std::abs(v));
      *scale *= mx;
    }
  }
  return s;
}

cplx ExpSumEvaluator::zero_vector_prime_power(u64 q, double* scale) {
  // The a-sum only sees the class of a modulo unit cubes: G(b u^3) = G(b).
  u64 phi = euler_phi(q);
  u64 g = std::gcd<u64>(3, phi);
  std::map<u64, std::pair<u64, u64>> classes;
  for (u64 a : units_mod(q)) {
    u64 key = powmod(a, phi / g, q);
    auto& slot = classes[key];
    if (slot.first++ == 0) slot.second = a;
  }
  auto tw = detail::twiddles(q);
  auto gauss = [&](u64 b) {
    cplx s = 0;
    for (u64 x = 0; x < q; ++x) s += tw[mulmod(b, cube_mod(x, q), q)];
    return s;
  };
  cplx total = 0;
  double l1 = 0;
  for (const auto& [key, cr] : classes) {
    cplx prod = 1.0;
    std::map<u64, cplx> seen;
    for (int i = 0; i < F_.m(); ++i) {
      u64 b = mulmod(cr.second, mod(F_[i], q), q);
      auto it = seen.find(b);
      if (it == seen.end()) it = seen.emplace(b, gauss(b)).first;
      prod *= it->second;
    }
    total += static_cast<double>(cr.first) * prod;
    l1 += static_cast<double>(cr.first) * std::abs(prod);
  }
  if (scale) *scale = l1;
  return total;
}

cplx ExpSumEvaluator::prime_power(const IVec& c, u64 p, int l) {
  require_length(F_, c);
  if (l == 0) return 1.0;
  u64 q = ipow(p, l);
  if (q > kMaxModulus) throw ScaleError("expsum: prime power exceeds 1e6");
  IVec res(c.size());
  bool zero = true;
  for (size_t i = 0; i < c.size(); ++i) {
    res[i] = static_cast<i64>(mod(c[i], q));
    if (res[i] != 0) zero = false;
  }
  if (auto hit = cache_->get(form_key_, p, l, res)) return *hit;
  double scale = 0;
  cplx v = zero ? zero_vector_prime_power(q, &scale) : kernel(res, q, &scale);
  check_real({q, c, v, ExpSumMethod::separable}, scale);
  // Provably real; dropping the rounding residue keeps composed values real.
  v = v.real();
  cache_->put(form_key_, p, l, res, v);
  return v;
}

ExpSumValue ExpSumEvaluator::operator()(const IVec& c, u64 n) {
  require_length(F_, c);
  if (n == 0) throw std::invalid_argument("expsum: n must be positive");
  if (n > kMaxModulus) throw ScaleError("expsum: modulus exceeds 1e6");
  auto fac = factor(n);
  cplx v = 1.0;
  for (const auto& [p, e] : fac) v *= prime_power(c, p, e);
  ExpSumValue out{n, c, v, fac.size() > 1 ? ExpSumMethod::crt_composed : ExpSumMethod::separable};
  check_real(out);
  return out;
}

cplx ExpSumEvaluator::separable_direct(const IVec& c, u64 n) {
  require_length(F_, c);
  if (n == 0) throw std::invalid_argument("expsum: n must be positive");
  return kernel(c, n);
}

double ExpSumEvaluator::normalized(const IVec& c, u64 n) {
  return (*this)(c, n).value.real() * std::pow(static_cast<double>(n), -(1.0 + F_.m()) / 2.0);
}

double ExpSumEvaluator::error_prime_power(const IVec& c, u64 p, int l) {
  const double m = F_.m();
  const double sp = std::sqrt(static_cast<double>(p));
  std::vector<double> st(static_cast<size_t>(l) + 1);
  for (int e = 0; e <= l; ++e)
    st[e] = prime_power(c, p, e).real() * std::pow(static_cast<double>(p), -(1.0 + m) * e / 2.0);
  double s = 0;
  for (int e0 = 0; e0 <= std::min(l, 1); ++e0)
    for (int e1 = 0; e0 + e1 <= l; ++e1) {
      int e2 = l - e0 - e1;
      s += (e0 ? -sp : 1.0) * std::pow(sp, -e1) * st[e2];
    }
  return s;
}

double ExpSumEvaluator::error_term(const IVec& c, u64 n) {
  require_length(F_, c);
  if (n == 0) throw std::invalid_argument("expsum_error: n must be positive");
  if (n > 100000) throw ScaleError("expsum_error: n exceeds 1e5");
  double v = 1.0;
  for (const auto& [p, e] : factor(n)) v *= error_prime_power(c, p, e);
  return v;
}

ExpSumValue expsum(const DiagonalCubicForm& F, const IVec& c, u64 n) {
  ExpSumEvaluator E(F);
  return E(c, n);
}

double expsum_error(const DiagonalCubicForm& F, const IVec& c, u64 n) {
  ExpSumEvaluator E(F);
  return E.error_term(c, n);
}

namespace {

/// Mixed-radix enumeration of (Z/q)^k.
struct Odometer {
  std::vector<u64> digits;
  u64 base;
  explicit Odometer(size_t k, u64 b) : digits(k, 0), base(b) {}
  bool next() {
    for (auto& d : digits) {
      if (++d < base) return true;
      d = 0;
    }
    return false;
  }
};

u64 encode(const std::vector<u64>& v, u64 q) {
  u64 idx = 0;
  for (size_t i = v.size(); i-- > 0;) idx = idx * q + (v[i] % q);
  return idx;
}

template <typename Fn>
std::vector<double> per_prime_power_table(const LineSpace& L, u64 q, Fn value_of) {
  const size_t k = static_cast<size_t>(L.k());
  std::vector<double> V(ipow(q, static_cast<int>(k)));
  Odometer od(k, q);
  do {
    IVec cs(k);
    for (size_t t = 0; t < k; ++t) cs[t] = static_cast<i64>(od.digits[t]);
    V[encode(od.digits, q)] = value_of(c_of_cstar(L, cs));
  } while (od.next());
  return V;
}

}  // namespace

CosetAverage avg_over_coset_both(ExpSumEvaluator& E, const LineSpace& L, u64 n, const IVec& j) {
  const auto& F = E.form();
  if (n == 0) throw std::invalid_argument("avg_over_coset: n must be positive");
  if (n > 10000) throw ScaleError("avg_over_coset: n exceeds 1e4");
  const size_t k = static_cast<size_t>(L.k());
  if (j.size() != k) throw std::invalid_argument("avg_over_coset: j has wrong length");
  double domain = std::pow(static_cast<double>(n), static_cast<double>(k));
  if (domain > 5e7) throw ScaleError("avg_over_coset: fundamental domain too large");

  auto fac = factor(n);
  std::vector<std::vector<double>> V;
  std::vector<u64> qs;
  for (const auto& [p, e] : fac) {
    u64 q = ipow(p, e);
    qs.push_back(q);
    V.push_back(per_prime_power_table(L, q, [&](const IVec& c) { return E.prime_power(c, p, e).real(); }));
  }
  auto tw = detail::twiddles(n);
  cplx sum = 0;
  double abs_sum = 0;
  Odometer od(k, n);
  do {
    double s = 1.0;
    for (size_t t = 0; t < qs.size(); ++t) s *= V[t][encode(od.digits, qs[t])];
    u64 dot = 0;
    for (size_t t = 0; t < k; ++t) dot = (dot + mulmod(od.digits[t], mod(j[t], n), n)) % n;
    sum += s * std::conj(tw[dot]);
    abs_sum += std::abs(s);
  } while (od.next());
  CosetAverage out;
  out.via_average = sum / domain;

  // x = M^{-1} (j, x') runs over the x mod n with h(x) = j.
  auto rs = ramanujan_table(n);
  const int m = F.m();
  i128 count = 0;
  Odometer ox(k, n);
  do {
    u64 f = 0;
    for (int i = 0; i < m; ++i) {
      i64 xi = 0;
      for (size_t t = 0; t < k; ++t) xi += L.M_inv[i][t] * j[t] + L.M_inv[i][k + t] * static_cast<i64>(ox.digits[t]);
      f = (f + mulmod(mod(F[i], n), cube_mod(mod(xi, n), n), n)) % n;
    }
    count += rs[f];
  } while (ox.next());
  out.via_count = static_cast<double>(count);

  double scale = 1.0 + abs_sum / domain;
  if (std::abs(out.via_average - out.via_count) > 1e-8 * scale)
    throw InvariantViolation("avg_over_coset: averaging and direct count disagree at n = " + std::to_string(n));
  return out;
}

cplx avg_over_coset(const DiagonalCubicForm& F, const LineSpace& L, u64 n, const IVec& j) {
  ExpSumEvaluator E(F);
  return avg_over_coset_both(E, L, n, j).via_count;
}

double avg_error_over_coset(ExpSumEvaluator& E, const LineSpace& L, u64 n) {
  const size_t k = static_cast<size_t>(L.k());
  double domain = std::pow(static_cast<double>(n), static_cast<double>(k));
  if (domain > 5e7) throw ScaleError("avg_error_over_coset: fundamental domain too large");
  auto fac = factor(n);
  std::vector<std::vector<double>> W;
  std::vector<u64> qs;
  for (const auto& [p, e] : fac) {
    u64 q = ipow(p, e);
    qs.push_back(q);
    W.push_back(per_prime_power_table(L, q, [&](const IVec& c) { return E.error_prime_power(c, p, e); }));
  }
  double sum = 0;
  Odometer od(k, n);
  do {
    double s = 1.0;
    for (size_t t = 0; t < qs.size(); ++t) s *= W[t][encode(od.digits, qs[t])];
    sum += s;
  } while (od.next());
  return sum / domain;
}

double crude_bound(const DiagonalCubicForm& F, const IVec& c, u64 n) {
  require_length(F, c);
  for (i64 ci : c)
    if (ci == 0) throw std::invalid_argument("crude_bound: every c_j must be nonzero");
  u64 cub = cub_sq_parts(n).cub;
  double bound = std::pow(4.0, omega(n));
  for (i64 cj : c) {
    u64 sqc = cub_sq_parts(static_cast<u64>(cj < 0 ? -cj : cj)).sq;
    double a = std::pow(static_cast<double>(cub), 1.0 / 6.0);
    double b = std::pow(static_cast<double>(std::gcd(cub, sqc)), 0.25);
    bound *= std::min(a, b);
  }
  return bound;
}

}  // namespace cubicdelta
