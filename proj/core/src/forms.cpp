#include "cubicdelta/forms.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "cubicdelta/errors.hpp"

namespace cubicdelta {

namespace {

i64 iabs(i64 v) { return v < 0 ? -v : v; }

bool exact_icbrt(i64 v, i64& r) {
  i64 a = iabs(v);
  i64 g = static_cast<i64>(std::llround(std::cbrt(static_cast<double>(a))));
  for (i64 t = std::max<i64>(0, g - 2); t <= g + 2; ++t) {
    if (static_cast<i128>(t) * t * t == a) {
      r = v < 0 ? -t : t;
      return true;
    }
  }
  return false;
}

void add_exponents(std::map<u64, int>& acc, i64 v, int sign) {
  if (v == 0) return;
  for (const auto& [p, e] : factor(static_cast<u64>(iabs(v)))) acc[p] += sign * e;
}

void require_nonzero(const IVec& c, const char* who) {
  for (i64 ci : c)
    if (ci != 0) return;
  throw std::invalid_argument(std::string(who) + ": c must be nonzero");
}

void require_length(const DiagonalCubicForm& F, const IVec& c, const char* who) {
  if (static_cast<int>(c.size()) != F.m()) throw std::invalid_argument(std::string(who) + ": c has wrong length");
}

i128 i128abs(i128 v) { return v < 0 ? -v : v; }

i128 i128gcd(i128 a, i128 b) {
  a = i128abs(a);
  b = i128abs(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct Frac {
  i128 num = 0;
  i128 den = 1;

  void add(i128 n, i128 d) {
    constexpr i128 kLimit = static_cast<i128>(1) << 100;
    i128 g = i128gcd(den, d);
    i128 nd = den / g * d;
    i128 nn = num * (d / g) + n * (den / g);
    if (i128abs(nd) > kLimit || i128abs(nn) > kLimit) throw ScaleError("eps_vanish_report: coefficient overflow");
    i128 h = i128gcd(nn, nd);
    if (h == 0) h = 1;
    num = nn / h;
    den = nd / h;
  }
};

}  // namespace

DiagonalCubicForm::DiagonalCubicForm(IVec coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != 4 && coeffs_.size() != 6) throw std::invalid_argument("form: m must be 4 or 6");
  for (i64 f : coeffs_) {
    if (f == 0) throw std::invalid_argument("form: coefficients must be nonzero");
    if (iabs(f) > 1000000) throw std::invalid_argument("form: |F_i| must be at most 10^6");
  }
}

DiagonalCubicForm DiagonalCubicForm::parse(const std::string& spec) {
  IVec v;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    i64 x = 0;
    try {
      x = std::stoll(tok, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("form: malformed coefficient '" + tok + "'");
    }
    if (pos != tok.size()) throw std::invalid_argument("form: malformed coefficient '" + tok + "'");
    v.push_back(x);
  }
  return DiagonalCubicForm(std::move(v));
}

DiagonalCubicForm DiagonalCubicForm::fermat(int m) { return DiagonalCubicForm(IVec(static_cast<size_t>(m), 1)); }

bool DiagonalCubicForm::is_bad_prime(u64 p) const {
  if (p == 2 || p == 3) return true;
  for (i64 f : coeffs_)
    if (static_cast<u64>(iabs(f)) % p == 0) return true;
  return false;
}

i128 DiagonalCubicForm::eval(const IVec& x) const {
  i128 s = 0;
  for (int i = 0; i < m(); ++i) s += static_cast<i128>(coeffs_[i]) * x[i] * x[i] * x[i];
  return s;
}

double DiagonalCubicForm::eval(const std::vector<double>& x) const {
  double s = 0;
  for (int i = 0; i < m(); ++i) s += static_cast<double>(coeffs_[i]) * x[i] * x[i] * x[i];
  return s;
}

std::string DiagonalCubicForm::to_string() const {
  std::string s;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(coeffs_[i]);
  }
  return s;
}

bool rational_cube_root(i64 num, i64 den, Rational& root) {
  if (num == 0 || den == 0) throw std::invalid_argument("rational_cube_root: zero input");
  i64 g = std::gcd(num, den);
  num /= g;
  den /= g;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i64 a = 0, b = 0;
  if (!exact_icbrt(num, a) || !exact_icbrt(den, b)) return false;
  root = {a, b};
  return true;
}

bool cube_class_equal(Rational a, Rational b) {
  if (a.num == 0 || a.den == 0 || b.num == 0 || b.den == 0)
    throw std::invalid_argument("cube_class_equal: zero input");
  std::map<u64, int> e;
  add_exponents(e, a.num, 1);
  add_exponents(e, a.den, -1);
  add_exponents(e, b.num, -1);
  add_exponents(e, b.den, 1);
  for (const auto& [p, k] : e)
    if (k % 3 != 0) return false;
  return true;
}

bool Pairing::contains(const IVec& c) const {
  if (!permissible) return false;
  for (size_t k = 0; k < blocks.size(); ++k) {
    auto [i, j] = blocks[k];
    auto [a, b] = ratios[k];
    if (static_cast<i128>(b) * c[j] != static_cast<i128>(a) * c[i]) return false;
  }
  return true;
}

std::string Pairing::to_string() const {
  std::string s = "{";
  for (size_t k = 0; k < blocks.size(); ++k) {
    if (k) s += ",";
    s += "{" + std::to_string(blocks[k][0] + 1) + "," + std::to_string(blocks[k][1] + 1) + "}";
  }
  return s + "}";
}

namespace {

void enumerate_pairings(std::vector<int> rest, std::vector<std::array<int, 2>>& cur,
                        std::vector<std::vector<std::array<int, 2>>>& out) {
  if (rest.empty()) {
    out.push_back(cur);
    return;
  }
  int i = rest.front();
  for (size_t t = 1; t < rest.size(); ++t) {
    std::vector<int> next;
    for (size_t u = 1; u < rest.size(); ++u)
      if (u != t) next.push_back(rest[u]);
    cur.push_back({i, rest[t]});
    enumerate_pairings(next, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Pairing> all_pairings(const DiagonalCubicForm& F) {
  std::vector<int> idx(static_cast<size_t>(F.m()));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::array<int, 2>> cur;
  std::vector<std::vector<std::array<int, 2>>> raw;
  enumerate_pairings(idx, cur, raw);
  std::vector<Pairing> out;
  for (auto& blocks : raw) {
    Pairing J;
    J.blocks = blocks;
    J.permissible = true;
    for (auto [i, j] : blocks) {
      Rational r;
      if (!rational_cube_root(F[j], F[i], r)) {
        J.permissible = false;
        J.ratios.clear();
        break;
      }
      J.ratios.push_back({r.num, r.den});
    }
    out.push_back(std::move(J));
  }
  return out;
}

std::vector<Pairing> permissible_pairings(const DiagonalCubicForm& F) {
  std::vector<Pairing> out;
  for (auto& J : all_pairings(F))
    if (J.permissible) out.push_back(std::move(J));
  return out;
}

EpsVanishReport eps_vanish_report(const DiagonalCubicForm& F, const IVec& c) {
  require_length(F, c, "eps_vanish_report");
  require_nonzero(c, "eps_vanish_report");
  const int m = F.m();
  // Term i equals eps_i * (|c_i| k_i / |F_i|) * sqrt(s_i) with c_i F_i = s_i k_i^2, s_i squarefree.
  std::vector<i64> klass(static_cast<size_t>(m), 0);
  std::vector<i128> num(static_cast<size_t>(m), 0), den(static_cast<size_t>(m), 1);
  for (int i = 0; i < m; ++i) {
    if (c[i] == 0) continue;
    std::map<u64, int> e;
    add_exponents(e, c[i], 1);
    add_exponents(e, F[i], 1);
    i128 s = 1, k = 1;
    for (const auto& [p, x] : e) {
      if (x % 2) s *= p;
      for (int t = 0; t < x / 2; ++t) k *= p;
    }
    bool negative = (c[i] < 0) != (F[i] < 0);
    klass[i] = static_cast<i64>(negative ? -s : s);
    num[i] = static_cast<i128>(iabs(c[i])) * k;
    den[i] = iabs(F[i]);
  }
  int count = 0;
  for (int mask = 0; mask < (1 << (m - 1)); ++mask) {
    std::map<i64, Frac> sums;
    for (int i = 0; i < m; ++i) {
      if (c[i] == 0) continue;
      bool minus = i > 0 && ((mask >> (i - 1)) & 1);
      sums[klass[i]].add(minus ? -num[i] : num[i], den[i]);
    }
    bool zero = true;
    for (const auto& [s, f] : sums)
      if (f.num != 0) zero = false;
    if (zero) ++count;
  }
  return {c, count, count >= 1 ? count - 1 : -1};
}

const char* to_string(CClass k) {
  switch (k) {
    case CClass::nontrivial:
      return "nontrivial";
    case CClass::trivial_generic:
      return "trivial_generic";
    case CClass::trivial_degenerate:
      return "trivial_degenerate";
  }
  return "unknown";
}

Classification classify_c(const DiagonalCubicForm& F, const IVec& c) {
  require_length(F, c, "classify_c");
  require_nonzero(c, "classify_c");
  Classification out;
  out.report = eps_vanish_report(F, c);
  for (auto& J : permissible_pairings(F))
    if (J.contains(c)) out.pairings.push_back(std::move(J));
  if (out.pairings.empty()) {
    out.kind = CClass::nontrivial;
  } else {
    int baseline = 1 << (F.m() / 2 - 1);
    out.kind = out.report.jet_order >= baseline ? CClass::trivial_degenerate : CClass::trivial_generic;
  }
  return out;
}

std::vector<u64> ck_cubed_mod_p(const DiagonalCubicForm& F, const Pairing& J, const IVec& c, u64 p) {
  std::vector<u64> out;
  for (auto [i, j] : J.blocks) {
    u64 ci = mod(c[i], p);
    out.push_back(mulmod(mulmod(mulmod(ci, ci, p), ci, p), invmod(mod(F[i], p), p), p));
  }
  return out;
}

bool jet_nonvanishing_mod_p(const DiagonalCubicForm& F, const Pairing& J, const IVec& c, u64 p) {
  require_length(F, c, "jet_nonvanishing_mod_p");
  if (!is_prime(p)) throw std::invalid_argument("jet_nonvanishing_mod_p: p must be prime");
  if (F.is_bad_prime(p)) throw BadPrime("bad prime " + std::to_string(p));
  if (!J.contains(c)) throw std::invalid_argument("jet_nonvanishing_mod_p: c is not in R_J");
  Fp2 K(p);
  std::vector<QuadExtElem> s;
  for (u64 v : ck_cubed_mod_p(F, J, c, p)) {
    if (v == 0) return false;
    s.push_back(K.sqrt(v));
  }
  const int h = static_cast<int>(s.size());
  for (int subset = 1; subset < (1 << h); ++subset) {
    int lead = __builtin_ctz(static_cast<unsigned>(subset));
    for (int signs = 0; signs < (1 << h); ++signs) {
      if ((signs >> lead) & 1) continue;
      if ((signs & ~subset) != 0) continue;
      QuadExtElem acc{0, 0};
      for (int k = 0; k < h; ++k) {
        if (!((subset >> k) & 1)) continue;
        acc = ((signs >> k) & 1) ? K.sub(acc, s[k]) : K.add(acc, s[k]);
      }
      if (K.is_zero(acc)) return false;
    }
  }
  return true;
}

bool jet_nonvanishing_mod_p(const DiagonalCubicForm& F, const IVec& c, u64 p) {
  for (const auto& J : permissible_pairings(F))
    if (J.contains(c)) return jet_nonvanishing_mod_p(F, J, c, p);
  throw std::invalid_argument("jet_nonvanishing_mod_p: c is not trivial");
}

SingularPoints singular_points_mod_p(const DiagonalCubicForm& F, const IVec& c, u64 p) {
  require_length(F, c, "singular_points_mod_p");
  if (!is_prime(p)) throw std::invalid_argument("singular_points_mod_p: p must be prime");
  if (F.is_bad_prime(p)) throw BadPrime("bad prime " + std::to_string(p));
  const int m = F.m();
  Fp2 K(p);
  std::vector<QuadExtElem> t(static_cast<size_t>(m));
  std::vector<u64> cm(static_cast<size_t>(m));
  std::vector<int> nz;
  for (int i = 0; i < m; ++i) {
    cm[i] = mod(c[i], p);
    if (cm[i] != 0) nz.push_back(i);
    // 3 F_i x_i^2 = c_i after fixing the scalar lambda = 1.
    t[i] = K.sqrt(mulmod(cm[i], invmod(mulmod(3, mod(F[i], p), p), p), p));
  }
  if (nz.empty()) throw std::invalid_argument("singular_points_mod_p: c must be nonzero mod p");
  SingularPoints out;
  const int h = static_cast<int>(nz.size());
  for (int mask = 0; mask < (1 << (h - 1)); ++mask) {
    std::vector<QuadExtElem> x(static_cast<size_t>(m), QuadExtElem{0, 0});
    QuadExtElem dot{0, 0};
    for (int r = 0; r < h; ++r) {
      int i = nz[r];
      bool minus = r > 0 && ((mask >> (r - 1)) & 1);
      x[i] = minus ? K.neg(t[i]) : t[i];
      dot = K.add(dot, K.mul(K.from_fp(cm[i]), x[i]));
    }
    if (!K.is_zero(dot)) continue;
    out.eps_multiplicity += 1 << (m - h);
    out.points.push_back(std::move(x));
  }
  return out;
}

}  // namespace cubicdelta
