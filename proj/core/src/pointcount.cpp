#include "cubicdelta/pointcount.hpp"

#include <cmath>
#include <string>

#include "cubicdelta/errors.hpp"
#include "cubicdelta/expsums.hpp"

namespace cubicdelta {

namespace {

void require_prime(u64 p, const char* where) {
  if (p < 5 || !is_prime(p)) throw std::invalid_argument(std::string(where) + ": p must be a prime >= 5");
}

void require_length(const DiagonalCubicForm& F, const IVec& c, const char* where) {
  if (static_cast<int>(c.size()) != F.m()) throw std::invalid_argument(std::string(where) + ": c has wrong length");
}

int chi(u64 r, u64 p) { return legendre(static_cast<i64>(r % p), p); }

// Joint counts of (F(x), c.x) over F_p^k for the first k coordinates.
std::vector<u64> joint_distribution(const DiagonalCubicForm& F, const IVec& c, u64 p, int k) {
  std::vector<u64> dist(p * p, 0);
  dist[0] = 1;
  std::vector<u64> next(p * p);
  for (int i = 0; i < k; ++i) {
    std::fill(next.begin(), next.end(), 0);
    const u64 fi = mod(F[i], p), ci = mod(c[i], p);
    for (u64 x = 0; x < p; ++x) {
      const u64 a = mulmod(fi, mulmod(mulmod(x, x, p), x, p), p);
      const u64 b = mulmod(ci, x, p);
      for (u64 t = 0; t < p; ++t) {
        const u64* src = &dist[t * p];
        u64* dst = &next[((t + a) % p) * p];
        for (u64 u = 0; u < p; ++u) {
          u64 v = u + b;
          if (v >= p) v -= p;
          dst[v] += src[u];
        }
      }
    }
    dist.swap(next);
  }
  return dist;
}

i64 affine_count_V(const DiagonalCubicForm& F, u64 p) {
  std::vector<u64> dist(p, 0), next(p);
  dist[0] = 1;
  for (int i = 0; i < F.m(); ++i) {
    std::fill(next.begin(), next.end(), 0);
    const u64 fi = mod(F[i], p);
    for (u64 x = 0; x < p; ++x) {
      const u64 a = mulmod(fi, mulmod(mulmod(x, x, p), x, p), p);
      for (u64 t = 0; t < p; ++t) next[(t + a) % p] += dist[t];
    }
    dist.swap(next);
  }
  return static_cast<i64>(dist[0]);
}

// Polynomials mod p, lowest degree first.
using Poly = std::vector<u64>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly pmul(const Poly& a, const Poly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  trim(r);
  return r;
}

Poly padd(Poly a, const Poly& b, u64 p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % p;
  trim(a);
  return a;
}

Poly pscale(Poly a, u64 s, u64 p) {
  for (auto& v : a) v = mulmod(v, s, p);
  trim(a);
  return a;
}

Poly pmod(Poly a, const Poly& b, u64 p) {
  const u64 inv_lead = invmod(b.back(), p);
  while (a.size() >= b.size()) {
    const u64 q = mulmod(a.back(), inv_lead, p);
    const size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] = (a[shift + i] + p - mulmod(q, b[i], p)) % p;
    trim(a);
  }
  return a;
}

u64 peval(const Poly& a, u64 t, u64 p) {
  u64 r = 0;
  for (size_t i = a.size(); i-- > 0;) r = (mulmod(r, t, p) + a[i]) % p;
  return r;
}

struct BlockData {
  std::vector<u64> Fk;
  std::vector<u64> ck;
};

// F_(k) and c*_k from the first index of every block, reduced mod q.
BlockData block_data(const DiagonalCubicForm& F, const Pairing& J, const IVec& c, u64 q) {
  BlockData d;
  for (auto [i, j] : J.blocks) {
    d.Fk.push_back(mod(F[i], q));
    d.ck.push_back(mod(c[i], q));
  }
  return d;
}

}  // namespace

void require_admissible(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p) {
  require_length(F, c, "require_admissible");
  if (!is_prime(p)) throw Inadmissible("p = " + std::to_string(p) + " is not prime");
  if (F.is_bad_prime(p)) throw Inadmissible("p = " + std::to_string(p) + " divides 6 F_1 ... F_m");
  if (!L.pairing.contains(c)) throw Inadmissible("c is not in R_J for " + L.pairing.to_string());
  if (!jet_nonvanishing_mod_p(F, L.pairing, c, p))
    throw Inadmissible("p = " + std::to_string(p) + " divides the jet of F-dual at c");
}

CountReport count_Vc(const DiagonalCubicForm& F, const IVec& c, u64 p) {
  require_length(F, c, "count_Vc");
  require_prime(p, "count_Vc");
  const int m = F.m();
  if ((m == 4 && p > 1000) || (m == 6 && p > 100))
    throw ScaleError("count_Vc: p = " + std::to_string(p) + " exceeds the convolution limit");
  auto dist = joint_distribution(F, c, p, m - 1);
  const u64 fl = mod(F[m - 1], p), cl = mod(c[m - 1], p);
  u64 cone = 0;
  for (u64 x = 0; x < p; ++x) {
    const u64 a = mulmod(fl, mulmod(mulmod(x, x, p), x, p), p);
    const u64 b = mulmod(cl, x, p);
    cone += dist[((p - a) % p) * p + (p - b) % p];
  }
  CountReport r;
  r.p = p;
  r.m = m;
  r.affine_cone_count = static_cast<i64>(cone);
  r.affine_count_V = affine_count_V(F, p);
  const i64 pm1 = static_cast<i64>(p) - 1;
  if ((r.affine_cone_count - 1) % pm1 != 0 || (r.affine_count_V - 1) % pm1 != 0)
    throw InvariantViolation("count_Vc: scalar action is not free on the cone");
  r.projective_count = (r.affine_cone_count - 1) / pm1;
  r.projective_count_V = (r.affine_count_V - 1) / pm1;
  r.E_c = r.projective_count - static_cast<i64>((ipow(p, m - 2) - 1) / (p - 1));
  r.E = r.projective_count_V - static_cast<i64>((ipow(p, m - 1) - 1) / (p - 1));
  const double mstar = m - 3;
  r.Et_c = static_cast<double>(r.E_c) * std::pow(static_cast<double>(p), -mstar / 2);
  r.Et = static_cast<double>(r.E) * std::pow(static_cast<double>(p), -(mstar + 1) / 2);
  return r;
}

i64 count_Vc_naive(const DiagonalCubicForm& F, const IVec& c, u64 p) {
  require_length(F, c, "count_Vc_naive");
  const int m = F.m();
  if (std::pow(static_cast<double>(p), m) > 1e8) throw ScaleError("count_Vc_naive: p^m exceeds 1e8");
  std::vector<u64> fx(static_cast<size_t>(m)), cx(static_cast<size_t>(m));
  std::vector<u64> x(static_cast<size_t>(m), 0);
  i64 count = 0;
  while (true) {
    u64 f = 0, l = 0;
    for (int i = 0; i < m; ++i) {
      f = (f + mulmod(mod(F[i], p), mulmod(mulmod(x[i], x[i], p), x[i], p), p)) % p;
      l = (l + mulmod(mod(c[i], p), x[i], p)) % p;
    }
    if (f == 0 && l == 0) ++count;
    int i = 0;
    while (i < m && ++x[i] == p) x[i++] = 0;
    if (i == m) break;
  }
  return count;
}

int HyperellipticData::degree() const {
  for (int d = static_cast<int>(coeffs.size()) - 1; d >= 0; --d)
    if (coeffs[static_cast<size_t>(d)] != 0) return d;
  return -1;
}

HyperellipticData hyperelliptic_data(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p) {
  require_length(F, c, "hyperelliptic_data");
  require_prime(p, "hyperelliptic_data");
  if (F.m() != 6) throw std::invalid_argument("hyperelliptic_data: requires m = 6");
  auto b = block_data(F, L.pairing, c, p);
  if (b.ck[1] == 0) throw Inadmissible("hyperelliptic_data: p divides c*_2");
  const u64 inv_c2 = invmod(b.ck[1], p);
  const u64 inv_c2_cubed = mulmod(mulmod(inv_c2, inv_c2, p), inv_c2, p);
  const Poly lin{b.ck[2], b.ck[0]};
  Poly q = pmul(pmul(lin, lin, p), lin, p);
  q = pscale(q, (p - mulmod(b.Fk[1], inv_c2_cubed, p)) % p, p);
  q = padd(q, Poly{b.Fk[2], 0, 0, b.Fk[0]}, p);
  const u64 k = mulmod((p - 3 % p) % p, mulmod(mulmod(b.Fk[0], b.Fk[1], p), mulmod(b.Fk[2], inv_c2, p), p), p);
  Poly P = pscale(pmul(pmul(Poly{0, 1}, lin, p), q, p), k, p);
  HyperellipticData h;
  h.p = p;
  h.coeffs = P;
  h.coeffs.resize(6, 0);
  for (u64 t = 0; t < p; ++t) h.n_points += 1 + chi(peval(P, t, p), p);
  return h;
}

bool poly_squarefree_mod_p(const std::vector<u64>& coeffs, u64 p) {
  Poly a(coeffs.begin(), coeffs.end());
  for (auto& v : a) v %= p;
  trim(a);
  if (a.size() != 6) return false;
  Poly d;
  for (size_t i = 1; i < a.size(); ++i) d.push_back(mulmod(a[i], i % p, p));
  trim(d);
  if (d.empty()) return false;
  while (!d.empty()) {
    Poly r = pmod(a, d, p);
    a = std::move(d);
    d = std::move(r);
  }
  return a.size() == 1;
}

bool hyperelliptic_disc_check(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p) {
  if (F.m() != 6) throw std::invalid_argument("hyperelliptic_disc_check: requires m = 6");
  require_admissible(F, L, c, p);
  return poly_squarefree_mod_p(hyperelliptic_data(F, L, c, p).coeffs, p);
}

i64 predicted_cone_count(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p) {
  require_admissible(F, L, c, p);
  const int m = F.m();
  const i64 P = static_cast<i64>(p);
  auto cc = ck_cubed_mod_p(F, L.pairing, c, p);
  if (m == 4) {
    // h = 0 gives p^2 points; each of the p - 1 nonzero h on the line carries a conic.
    return P * P + (P - 1) * (P - chi(mulmod(cc[0], cc[1], p), p));
  }
  i64 total = P * P * P;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) total += (P * P - P) * (P - chi(mulmod(cc[i], cc[j], p), p));
  const i64 n_hyp = hyperelliptic_data(F, L, c, p).n_points;
  total += (P - 1) * (P * P * P - 2 * P * P + P * (n_hyp - P));
  return total;
}

i64 bias_prediction_p(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p) {
  const i64 predicted = predicted_cone_count(F, L, c, p);
  const i64 actual = count_Vc(F, c, p).affine_cone_count;
  if (predicted != actual)
    throw InvariantViolation("bias_prediction_p: predicted " + std::to_string(predicted) + " but counted " +
                             std::to_string(actual) + " at p = " + std::to_string(p));
  return predicted;
}

i64 count_B(const DiagonalCubicForm& F, const IVec& c, u64 p, int l) {
  require_length(F, c, "count_B");
  if (!is_prime(p)) throw std::invalid_argument("count_B: p must be prime");
  const int m = F.m();
  if (l < 1) throw std::invalid_argument("count_B: l must be >= 1");
  if (std::pow(static_cast<double>(p), l * m) > 1e8) throw ScaleError("count_B: p^(lm) exceeds 1e8");
  const u64 q = ipow(p, l);
  std::vector<u64> fq(static_cast<size_t>(m)), cq(static_cast<size_t>(m)), cp(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    fq[i] = mod(F[i], q);
    cq[i] = mod(c[i], q);
    cp[i] = mod(c[i], p);
  }
  std::vector<u64> cube(q), grad(q);
  for (u64 x = 0; x < q; ++x) {
    cube[x] = mulmod(mulmod(x, x, q), x, q);
    grad[x] = mulmod(3, mulmod(x % p, x % p, p), p);
  }
  std::vector<u64> x(static_cast<size_t>(m), 0);
  std::vector<u64> g(static_cast<size_t>(m));
  i64 count = 0;
  while (true) {
    u64 f = 0, lin = 0;
    for (int i = 0; i < m; ++i) {
      f = (f + mulmod(fq[i], cube[x[i]], q)) % q;
      lin = (lin + mulmod(cq[i], x[i], q)) % q;
    }
    if (f == 0 && lin == 0) {
      bool nonzero = false;
      for (int i = 0; i < m; ++i) {
        g[i] = mulmod(mod(F[i], p), grad[x[i]], p);
        nonzero = nonzero || g[i] != 0;
      }
      bool dependent = nonzero;
      for (int i = 0; i < m && dependent; ++i)
        for (int j = i + 1; j < m && dependent; ++j)
          dependent = mulmod(g[i], cp[j], p) == mulmod(g[j], cp[i], p);
      if (dependent) ++count;
    }
    int i = 0;
    while (i < m && ++x[i] == q) x[i++] = 0;
    if (i == m) break;
  }
  return count;
}

i64 count_A(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p, int s, int l, AChoice choice) {
  // The affine system only needs units d(k); the sign-sum conditions on c(k)^(3/2) are not used.
  require_length(F, c, "count_A");
  require_prime(p, "count_A");
  if (F.is_bad_prime(p)) throw Inadmissible("p = " + std::to_string(p) + " divides 6 F_1 ... F_m");
  if (!L.pairing.contains(c)) throw Inadmissible("c is not in R_J for " + L.pairing.to_string());
  for (u64 v : ck_cubed_mod_p(F, L.pairing, c, p))
    if (v == 0) throw Inadmissible("count_A: p divides some c(k)^3");
  const int m = F.m();
  const int h = m / 2;
  if (s < 1) throw std::invalid_argument("count_A: s must be >= 1");
  if (l < 0) throw std::invalid_argument("count_A: l must be >= 0");
  if (std::pow(static_cast<double>(p), l * (m - 2)) > 1e8) throw ScaleError("count_A: p^(l(m-2)) exceeds 1e8");
  if (l == 0) return 1;
  const u64 q = ipow(p, l);
  auto b = block_data(F, L.pairing, c, q);
  // lambda c*_k / F_(k) must be a square for every k.
  u64 lambda = 1;
  const u64 first = mulmod(b.ck[0] % p, invmod(b.Fk[0] % p, p), p);
  if (chi(first, p) != 1) lambda = smallest_nonresidue(p);
  if (choice.variant > 0) {
    u64 r = static_cast<u64>(choice.variant) + 1;
    while (r % p == 0) ++r;
    lambda = mulmod(lambda, mulmod(r % q, r % q, q), q);
  }
  std::vector<u64> d(static_cast<size_t>(h));
  for (int k = 0; k < h; ++k) {
    const u64 target = mulmod(mulmod(lambda, b.ck[k], q), invmod(b.Fk[k], q), q);
    auto root = sqrt_mod_pk(target, p, l);
    if (!root) throw Inadmissible("count_A: chi(c(k)^3) is not constant in k");
    d[k] = ((choice.variant >> k) & 1) ? (q - *root) % q : *root;
  }
  const u64 ps = s >= l ? 0 : ipow(p, s);
  std::vector<u64> lin(static_cast<size_t>(h));
  for (int k = 0; k < h; ++k) lin[k] = mulmod(b.Fk[k], mulmod(d[k], d[k], q), q);
  const u64 neg_inv_last = (q - invmod(lin[h - 1], q)) % q;
  // Free variables: h_s[k], y_s[k] for k < h - 1.
  const int nv = 2 * (h - 1);
  std::vector<u64> v(static_cast<size_t>(nv), 0);
  i64 count = 0;
  while (true) {
    u64 lsum = 0;
    for (int k = 0; k < h - 1; ++k) lsum = (lsum + mulmod(lin[k], v[k], q)) % q;
    const u64 hlast = mulmod(lsum, neg_inv_last, q);
    u64 lhs = 0, cubes = 0;
    for (int k = 0; k < h - 1; ++k) {
      const u64 hk = v[k], yk = v[h - 1 + k];
      const u64 inner = (mulmod(2 * d[k] % q, yk, q) + mulmod(ps, mulmod(yk, yk, q), q)) % q;
      lhs = (lhs + mulmod(mulmod(b.Fk[k], hk, q), inner, q)) % q;
      cubes = (cubes + mulmod(b.Fk[k], mulmod(mulmod(hk, hk, q), hk, q), q)) % q;
    }
    cubes = (cubes + mulmod(b.Fk[h - 1], mulmod(mulmod(hlast, hlast, q), hlast, q), q)) % q;
    const u64 rhs = (q - mulmod(mulmod(3 % q, ps, q), cubes, q)) % q;
    if (lhs == rhs) ++count;
    int i = 0;
    while (i < nv && ++v[i] == q) v[i++] = 0;
    if (i == nv) break;
  }
  return count;
}

double count_A_closed_form(int m, u64 p, int l) {
  if (m != 4 && m != 6) throw std::invalid_argument("count_A_closed_form: m must be 4 or 6");
  if (l < -1) throw std::invalid_argument("count_A_closed_form: l must be >= -1");
  const int ms = m - 3;
  const double P = static_cast<double>(p);
  // (p^(l(ms-1)/2) - 1) / (p^((ms-1)/2) - 1), which tends to l when ms = 1.
  const double ratio = ms == 1 ? static_cast<double>(l)
                               : (std::pow(P, l * (ms - 1) / 2.0) - 1) / (std::pow(P, (ms - 1) / 2.0) - 1);
  return std::pow(P, l * ms) + (P - 1) * std::pow(P, l * (ms + 1) / 2.0 - 1) * ratio;
}

double predicted_prime_power_sum(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p, int l) {
  require_admissible(F, L, c, p);
  if (l < 2) throw std::invalid_argument("predicted_prime_power_sum: l must be >= 2");
  const int m = F.m();
  auto cc = ck_cubed_mod_p(F, L.pairing, c, p);
  const int ref = chi(cc[0], p);
  for (u64 v : cc)
    if (chi(v, p) != ref) return 0.0;
  const double P = static_cast<double>(p);
  return std::ldexp(1.0, m / 2 - 1) * (P - 1) * std::pow(P, l * (m + 2) / 2.0 - 1);
}

double bias_prediction_pl(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p, int l) {
  const double predicted = predicted_prime_power_sum(F, L, c, p, l);
  ExpSumEvaluator E(F);
  const double actual = E.prime_power(c, p, l).real();
  const double scale = std::max(std::abs(predicted), std::pow(static_cast<double>(p), l * (F.m() + 2) / 2.0 - 1));
  if (std::abs(predicted - actual) > 1e-6 * scale)
    throw InvariantViolation("bias_prediction_pl: closed form " + std::to_string(predicted) + " but S_c(p^l) = " +
                             std::to_string(actual));
  return predicted;
}

}  // namespace cubicdelta
