#include <gtest/gtest.h>

#include <random>

#include "cubicdelta/errors.hpp"
#include "cubicdelta/forms.hpp"
#include "cubicdelta/lattices.hpp"
#include "oracles.hpp"

using namespace cubicdelta;

namespace {

// Minimal F_{p^2} = F_p[s] / (s^2 - d) for the brute-force projective scan.
struct Fq {
  u64 p, d;
  using E = std::pair<u64, u64>;
  E add(E x, E y) const { return {(x.first + y.first) % p, (x.second + y.second) % p}; }
  E mul(E x, E y) const {
    return {(x.first * y.first + d * (x.second * y.second % p)) % p, (x.first * y.second + x.second * y.first) % p};
  }
  E scale(u64 k, E x) const { return {k % p * x.first % p, k % p * x.second % p}; }
};

// Singular points of F = c.x = 0 in P^{m-1}(F_{p^2}): 3 F_i x_i^2 proportional to c, F(x) = 0.
int brute_singular_points(const DiagonalCubicForm& F, const IVec& c, u64 p) {
  u64 d = 2;
  while (oracle::legendre_table(static_cast<i64>(d), p) != -1) ++d;
  Fq K{p, d};
  const int m = F.m();
  const u64 q = p * p;
  auto red = [&](i64 a) { return mod(a, p); };
  int count = 0;
  std::vector<Fq::E> x(static_cast<size_t>(m));
  // First nonzero coordinate normalized to 1.
  for (int lead = 0; lead < m; ++lead) {
    u64 total = 1;
    for (int i = lead + 1; i < m; ++i) total *= q;
    for (u64 code = 0; code < total; ++code) {
      for (int i = 0; i < lead; ++i) x[i] = {0, 0};
      x[lead] = {1, 0};
      u64 r = code;
      for (int i = lead + 1; i < m; ++i) {
        x[i] = {r % q % p, r % q / p};
        r /= q;
      }
      Fq::E f{0, 0}, cx{0, 0};
      std::vector<Fq::E> g(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) {
        f = K.add(f, K.scale(red(F[i]), K.mul(x[i], K.mul(x[i], x[i]))));
        cx = K.add(cx, K.scale(red(c[i]), x[i]));
        g[i] = K.scale(red(3 * F[i]), K.mul(x[i], x[i]));
      }
      if (f != Fq::E{0, 0} || cx != Fq::E{0, 0}) continue;
      // g parallel to c: g_i c_j = g_j c_i for all i, j.
      bool par = true;
      for (int i = 0; i < m && par; ++i)
        for (int j = i + 1; j < m && par; ++j)
          par = K.scale(red(c[j]), g[i]) == K.scale(red(c[i]), g[j]);
      count += par;
    }
  }
  return count;
}

IVec random_vec(std::mt19937_64& rng, int m, int bound) {
  std::uniform_int_distribution<i64> U(-bound, bound);
  IVec c(static_cast<size_t>(m));
  do
    for (auto& v : c) v = U(rng);
  while (std::all_of(c.begin(), c.end(), [](i64 v) { return v == 0; }));
  return c;
}

}  // namespace

TEST(Form, ParseAndMetadata) {
  auto F = DiagonalCubicForm::parse("1,1,1,1");
  EXPECT_EQ(F, DiagonalCubicForm::fermat(4));
  EXPECT_EQ(DiagonalCubicForm::parse(F.to_string()), F);
  EXPECT_EQ(F.dual_degree(), 12);
  EXPECT_EQ(DiagonalCubicForm::fermat(6).dual_degree(), 48);
  EXPECT_THROW(DiagonalCubicForm::parse("1,1,1"), std::invalid_argument);
  EXPECT_THROW(DiagonalCubicForm::parse("1,0,1,1"), std::invalid_argument);
  EXPECT_THROW(DiagonalCubicForm::parse("1,x,1,1"), std::invalid_argument);
  EXPECT_THROW(DiagonalCubicForm::parse("1,1,1,1,1"), std::invalid_argument);
  EXPECT_TRUE(F.is_bad_prime(2));
  EXPECT_TRUE(F.is_bad_prime(3));
  EXPECT_FALSE(F.is_bad_prime(5));
  EXPECT_TRUE(DiagonalCubicForm({1, 1, 5, 7}).is_bad_prime(7));
}

TEST(CubeClass, Examples) {
  EXPECT_TRUE(cube_class_equal({1, 1}, {1, 1}));
  EXPECT_FALSE(cube_class_equal({2, 1}, {1, 1}));
  EXPECT_TRUE(cube_class_equal({16, 1}, {2, 1}));
  EXPECT_TRUE(cube_class_equal({-27, 8}, {1, 1}));
  EXPECT_FALSE(cube_class_equal({4, 1}, {2, 1}));
  EXPECT_THROW(cube_class_equal({0, 1}, {1, 1}), std::invalid_argument);
}

TEST(EpsVanish, Examples) {
  auto F = DiagonalCubicForm::fermat(4);
  auto a = eps_vanish_report(F, {1, 1, 2, 2});
  EXPECT_EQ(a.vanish_count, 2);
  EXPECT_EQ(a.jet_order, 1);
  auto b = eps_vanish_report(F, {1, 1, 1, 1});
  EXPECT_EQ(b.vanish_count, 3);
  EXPECT_EQ(b.jet_order, 2);
  auto c = eps_vanish_report(F, {1, 2, 3, 4});
  EXPECT_EQ(c.vanish_count, 0);
  EXPECT_EQ(c.jet_order, -1);
  EXPECT_THROW(eps_vanish_report(F, {0, 0, 0, 0}), std::invalid_argument);
}

TEST(EpsVanish, MatchesFiftyDigitOracle) {
  std::mt19937_64 rng(7);
  for (int m : {4, 6}) {
    std::vector<DiagonalCubicForm> forms{DiagonalCubicForm::fermat(m)};
    forms.push_back(m == 4 ? DiagonalCubicForm({1, -8, 2, 3}) : DiagonalCubicForm({1, 1, -1, 2, 16, 5}));
    for (const auto& F : forms)
      for (int s = 0; s < 1000; ++s) {
        auto c = random_vec(rng, m, 20);
        auto r = eps_vanish_report(F, c);
        ASSERT_EQ(r.vanish_count, oracle::eps_vanish_count_50(F.coeffs(), c)) << F.to_string();
        ASSERT_EQ(r.jet_order, r.vanish_count >= 1 ? r.vanish_count - 1 : -1);
        ASSERT_LE(r.vanish_count, 1 << (m - 1));
      }
  }
}

TEST(EpsVanish, SmallTrivialVectorsAgainstOracle) {
  // Random c are almost never trivial, so also sweep the structured ones.
  for (int m : {4, 6}) {
    auto F = DiagonalCubicForm::fermat(m);
    for (const auto& L : enumerate_lines(F))
      for (i64 a = -3; a <= 3; ++a)
        for (i64 b = -3; b <= 3; ++b) {
          IVec cs(static_cast<size_t>(L.k()), 0);
          cs[0] = a;
          cs[1] = b;
          if (a == 0 && b == 0) continue;
          auto c = c_of_cstar(L, cs);
          ASSERT_EQ(eps_vanish_report(F, c).vanish_count, oracle::eps_vanish_count_50(F.coeffs(), c));
        }
  }
}

TEST(EpsVanish, IndependentOfRootConvention) {
  // c -> -c multiplies every term by i or -i, a relabelling of sign patterns.
  std::mt19937_64 rng(11);
  for (int m : {4, 6}) {
    auto F = DiagonalCubicForm::fermat(m);
    for (int s = 0; s < 300; ++s) {
      auto c = random_vec(rng, m, 4);
      IVec neg(c);
      for (auto& v : neg) v = -v;
      ASSERT_EQ(eps_vanish_report(F, c).vanish_count, eps_vanish_report(F, neg).vanish_count);
    }
  }
}

TEST(Classify, Examples) {
  auto F = DiagonalCubicForm::fermat(4);
  auto a = classify_c(F, {1, 1, 2, 2});
  EXPECT_EQ(a.kind, CClass::trivial_generic);
  ASSERT_EQ(a.pairings.size(), 1u);
  EXPECT_EQ(a.pairings[0].blocks[0], (std::array<int, 2>{0, 1}));
  auto b = classify_c(F, {1, 1, 1, 1});
  EXPECT_EQ(b.kind, CClass::trivial_degenerate);
  EXPECT_EQ(b.pairings.size(), 3u);
  EXPECT_EQ(classify_c(F, {1, 2, 3, 4}).kind, CClass::nontrivial);
}

TEST(Classify, ExhaustiveSmallBox) {
  for (const auto& F : {DiagonalCubicForm::fermat(4), DiagonalCubicForm({1, 1, 2, 2}), DiagonalCubicForm({1, 8, -1, 27})}) {
    auto perm = permissible_pairings(F);
    IVec c(4);
    for (c[0] = -5; c[0] <= 5; ++c[0])
      for (c[1] = -5; c[1] <= 5; ++c[1])
        for (c[2] = -5; c[2] <= 5; ++c[2])
          for (c[3] = -5; c[3] <= 5; ++c[3]) {
            if (c == IVec{0, 0, 0, 0}) continue;
            bool in_some = std::any_of(perm.begin(), perm.end(), [&](const Pairing& J) { return J.contains(c); });
            auto k = classify_c(F, c);
            ASSERT_EQ(k.kind != CClass::nontrivial, in_some) << F.to_string();
            if (in_some) {
              bool degenerate = k.report.jet_order >= 2;
              ASSERT_EQ(k.kind == CClass::trivial_degenerate, degenerate);
            }
          }
  }
}

TEST(Classify, LatticeVectorsAreTrivial) {
  for (int m : {4, 6}) {
    auto F = DiagonalCubicForm::fermat(m);
    for (const auto& L : enumerate_lines(F)) {
      std::mt19937_64 rng(3);
      for (int s = 0; s < 200; ++s) {
        auto cs = random_vec(rng, L.k(), 7);
        auto c = c_of_cstar(L, cs);
        ASSERT_NE(classify_c(F, c).kind, CClass::nontrivial);
      }
    }
  }
}

TEST(Pairings, CountsAndPermissibility) {
  EXPECT_EQ(all_pairings(DiagonalCubicForm::fermat(4)).size(), 3u);
  EXPECT_EQ(all_pairings(DiagonalCubicForm::fermat(6)).size(), 15u);
  EXPECT_EQ(permissible_pairings(DiagonalCubicForm({1, 1, 2, 2})).size(), 1u);
  auto P = permissible_pairings(DiagonalCubicForm({1, 8, 1, 1}));
  // (8 / 1)^(1/3) = 2, and the ratio is stored reduced.
  ASSERT_FALSE(P.empty());
  for (const auto& J : P)
    for (const auto& r : J.ratios) EXPECT_EQ(oracle::gcd(static_cast<u64>(std::abs(r[0])), static_cast<u64>(std::abs(r[1]))), 1u);
}

TEST(Jet, Examples) {
  auto F = DiagonalCubicForm::fermat(4);
  EXPECT_FALSE(jet_nonvanishing_mod_p(F, {1, 1, 2, 2}, 7));
  EXPECT_TRUE(jet_nonvanishing_mod_p(F, {1, 1, 2, 2}, 11));
  EXPECT_TRUE(jet_nonvanishing_mod_p(F, {1, 1, 2, 2}, 5));
  EXPECT_THROW(jet_nonvanishing_mod_p(F, {1, 1, 2, 2}, 3), BadPrime);
  EXPECT_THROW(jet_nonvanishing_mod_p(F, {1, 2, 3, 4}, 5), std::invalid_argument);
}

TEST(SingularPoints, Examples) {
  auto F = DiagonalCubicForm::fermat(4);
  EXPECT_EQ(singular_points_mod_p(F, {1, 1, 2, 2}, 11).points.size(), 2u);
  EXPECT_GT(singular_points_mod_p(F, {1, 1, 2, 2}, 7).points.size(), 2u);
  EXPECT_THROW(singular_points_mod_p(F, {1, 1, 2, 2}, 2), BadPrime);
}

TEST(SingularPoints, MatchBruteProjectiveScan) {
  auto F = DiagonalCubicForm::fermat(4);
  for (u64 p : {5u, 7u, 11u})
    for (const IVec& c : {IVec{1, 1, 2, 2}, IVec{1, 2, 1, 2}, IVec{1, 1, 1, 1}, IVec{3, 1, -3, 2}, IVec{1, 0, 1, 2}})
      EXPECT_EQ(static_cast<int>(singular_points_mod_p(F, c, p).points.size()), brute_singular_points(F, c, p))
          << p;
}

TEST(Jet, ConsistentWithSingularPoints) {
  std::mt19937_64 rng(5);
  int checked = 0, admissible = 0;
  for (int m : {4, 6}) {
    auto F = DiagonalCubicForm::fermat(m);
    auto lines = enumerate_lines(F);
    const size_t expected = size_t{1} << (m / 2 - 1);
    std::vector<u64> primes;
    for (u64 p : oracle::primes_upto(60))
      if (p > static_cast<u64>(m) && !F.is_bad_prime(p)) primes.push_back(p);
    while (checked < (m == 4 ? 100 : 200)) {
      const auto& L = lines[rng() % lines.size()];
      auto c = c_of_cstar(L, random_vec(rng, L.k(), 9));
      u64 p = primes[rng() % primes.size()];
      if (std::all_of(c.begin(), c.end(), [&](i64 v) { return mod(v, p) == 0; })) continue;
      bool jet = jet_nonvanishing_mod_p(F, L.pairing, c, p);
      auto pts = singular_points_mod_p(F, c, p).points.size();
      if (pts > expected) {
        ASSERT_FALSE(jet);
      }
      bool units = std::all_of(c.begin(), c.end(), [&](i64 v) { return mod(v, p) != 0; });
      if (units) {
        ASSERT_EQ(jet, pts == expected);
      }
      admissible += jet;
      ++checked;
    }
  }
  EXPECT_GT(admissible, 20);
  EXPECT_LT(admissible, checked);
}
