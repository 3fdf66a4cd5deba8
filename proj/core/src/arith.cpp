#include "cubicdelta/arith.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cubicdelta {

Factorization factor(u64 n) {
  if (n == 0) throw std::invalid_argument("factor: n must be positive");
  if (n > kMaxModulus) throw std::invalid_argument("factor: n exceeds 2^40");
  Factorization out;
  auto strip = [&](u64 p) {
    if (n % p != 0) return;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  };
  strip(2);
  strip(3);
  for (u64 p = 5; p * p <= n; p += 6) {
    strip(p);
    strip(p + 2);
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

u64 ipow(u64 base, int e) {
  u64 r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

u64 reconstruct(const Factorization& f) {
  u64 n = 1;
  for (const auto& [p, e] : f) n *= ipow(p, e);
  return n;
}

CubSq cub_sq_parts(u64 n) {
  CubSq r;
  for (const auto& [p, e] : factor(n)) {
    u64 pe = ipow(p, e);
    if (e >= 2) r.sq *= pe;
    if (e >= 3) r.cub *= pe;
  }
  return r;
}

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

u64 mod(i64 a, u64 m) {
  i64 r = a % static_cast<i64>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(m) : r);
}

u64 invmod(u64 a, u64 m) {
  i128 t = 0, nt = 1, r = m, nr = a % m;
  while (nr != 0) {
    i128 q = r / nr;
    i128 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw std::invalid_argument("invmod: not invertible");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

int mobius(u64 n) {
  int mu = 1;
  for (const auto& [p, e] : factor(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

u64 euler_phi(u64 n) {
  u64 r = 1;
  for (const auto& [p, e] : factor(n)) r *= (p - 1) * ipow(p, e - 1);
  return r;
}

int omega(u64 n) { return static_cast<int>(factor(n).size()); }

u64 tau3(u64 n) {
  u64 r = 1;
  for (const auto& [p, e] : factor(n)) r *= static_cast<u64>((e + 1) * (e + 2) / 2);
  return r;
}

std::vector<u64> divisors(u64 n) {
  std::vector<u64> ds{1};
  for (const auto& [p, e] : factor(n)) {
    size_t cur = ds.size();
    u64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (size_t i = 0; i < cur; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

i64 ramanujan_sum(u64 q, i64 t) {
  u64 g = std::gcd(q, static_cast<u64>(t < 0 ? -t : t));
  if (t == 0) g = q;
  i64 s = 0;
  for (u64 d : divisors(g)) s += mobius(q / d) * static_cast<i64>(d);
  return s;
}

namespace {

void require_odd_prime(u64 p, const char* who) {
  if (p < 3 || !is_prime(p)) throw std::invalid_argument(std::string(who) + ": p must be an odd prime");
}

}  // namespace

int legendre(i64 r, u64 p) {
  require_odd_prime(p, "legendre");
  u64 a = mod(r, p);
  if (a == 0) return 0;
  return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

u64 smallest_nonresidue(u64 p) {
  require_odd_prime(p, "smallest_nonresidue");
  for (u64 d = 2;; ++d) {
    if (powmod(d, (p - 1) / 2, p) == p - 1) return d;
  }
}

u64 sqrt_mod_p(u64 r, u64 p) {
  r %= p;
  if (r == 0) return 0;
  if (p == 2) return r;
  if (powmod(r, (p - 1) / 2, p) != 1) throw std::invalid_argument("sqrt_mod_p: non-residue");
  u64 q = p - 1;
  int s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = smallest_nonresidue(p);
  u64 m = static_cast<u64>(s);
  u64 c = powmod(z, q, p);
  u64 t = powmod(r, q, p);
  u64 x = powmod(r, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0;
    u64 tt = t;
    while (tt != 1) {
      tt = mulmod(tt, tt, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    x = mulmod(x, b, p);
  }
  return std::min(x, p - x);
}

std::optional<u64> sqrt_mod_pk(u64 r, u64 p, int k) {
  require_odd_prime(p, "sqrt_mod_pk");
  if (r % p == 0) throw std::invalid_argument("sqrt_mod_pk: r must be a unit");
  if (legendre(static_cast<i64>(r % p), p) != 1) return std::nullopt;
  u64 s = sqrt_mod_p(r % p, p);
  u64 pk = p;
  for (int j = 2; j <= k; ++j) {
    pk *= p;
    u64 rr = r % pk;
    u64 diff = mod(static_cast<i64>(mulmod(s, s, pk)) - static_cast<i64>(rr), pk);
    u64 corr = mulmod(diff, invmod(mulmod(2, s, pk), pk), pk);
    s = mod(static_cast<i64>(s) - static_cast<i64>(corr), pk);
  }
  return s;
}

Fp2::Fp2(u64 p) : p_(p), d_(smallest_nonresidue(p)) {}

QuadExtElem Fp2::add(QuadExtElem x, QuadExtElem y) const { return {(x.a + y.a) % p_, (x.b + y.b) % p_}; }

QuadExtElem Fp2::neg(QuadExtElem x) const { return {(p_ - x.a) % p_, (p_ - x.b) % p_}; }

QuadExtElem Fp2::sub(QuadExtElem x, QuadExtElem y) const { return add(x, neg(y)); }

QuadExtElem Fp2::mul(QuadExtElem x, QuadExtElem y) const {
  u64 a = (mulmod(x.a, y.a, p_) + mulmod(mulmod(x.b, y.b, p_), d_, p_)) % p_;
  u64 b = (mulmod(x.a, y.b, p_) + mulmod(x.b, y.a, p_)) % p_;
  return {a, b};
}

QuadExtElem Fp2::pow(QuadExtElem x, u64 e) const {
  QuadExtElem r{1, 0};
  while (e) {
    if (e & 1) r = mul(r, x);
    x = mul(x, x);
    e >>= 1;
  }
  return r;
}

u64 Fp2::norm(QuadExtElem x) const {
  return mod(static_cast<i64>(mulmod(x.a, x.a, p_)) - static_cast<i64>(mulmod(d_, mulmod(x.b, x.b, p_), p_)), p_);
}

QuadExtElem Fp2::inv(QuadExtElem x) const {
  u64 n = norm(x);
  if (n == 0) throw std::invalid_argument("Fp2::inv: zero element");
  u64 ni = invmod(n, p_);
  return {mulmod(x.a, ni, p_), mulmod((p_ - x.b) % p_, ni, p_)};
}

QuadExtElem Fp2::sqrt(u64 r) const {
  r %= p_;
  if (r == 0) return {0, 0};
  if (powmod(r, (p_ - 1) / 2, p_) == 1) return {sqrt_mod_p(r, p_), 0};
  return {0, sqrt_mod_p(mulmod(r, invmod(d_, p_), p_), p_)};
}

QuadExtElem sqrt_in_Fp2(u64 r, u64 p) {
  require_odd_prime(p, "sqrt_in_Fp2");
  return Fp2(p).sqrt(r);
}

}  // namespace cubicdelta
