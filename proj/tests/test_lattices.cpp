#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>
#include <random>

#include "cubicdelta/errors.hpp"
#include "cubicdelta/lattices.hpp"
#include "oracles.hpp"

using namespace cubicdelta;

namespace {

int rank_of(IMat A) {
  std::vector<std::vector<double>> M;
  for (const auto& r : A) M.emplace_back(r.begin(), r.end());
  int rank = 0;
  const size_t cols = M.empty() ? 0 : M[0].size();
  for (size_t col = 0; col < cols && rank < static_cast<int>(M.size()); ++col) {
    size_t piv = rank;
    while (piv < M.size() && std::abs(M[piv][col]) < 1e-9) ++piv;
    if (piv == M.size()) continue;
    std::swap(M[piv], M[rank]);
    for (size_t r = 0; r < M.size(); ++r) {
      if (r == static_cast<size_t>(rank)) continue;
      double f = M[r][col] / M[rank][col];
      for (size_t c = 0; c < cols; ++c) M[r][c] -= f * M[rank][c];
    }
    ++rank;
  }
  return rank;
}

// Sum of w(x / X) over integer x in the support box with lamperp x = 0.
double brute_lattice_sum(const LineSpace& L, const WeightSpec& w, double X) {
  const int m = L.m();
  IVec lo(m), hi(m), x(m);
  for (int i = 0; i < m; ++i) {
    lo[i] = static_cast<i64>(std::floor(X * w[i].lo()));
    hi[i] = static_cast<i64>(std::ceil(X * w[i].hi()));
  }
  x = lo;
  double s = 0;
  while (true) {
    bool in = true;
    for (const auto& row : L.lamperp) {
      i64 d = 0;
      for (int i = 0; i < m; ++i) d += row[i] * x[i];
      if (d) in = false;
    }
    if (in) {
      double v = 1;
      for (int i = 0; i < m; ++i) v *= oracle::bump((x[i] / X - w[i].center) / w[i].radius);
      s += v;
    }
    int i = 0;
    while (i < m && ++x[i] > hi[i]) x[i] = lo[i], ++i;
    if (i == m) break;
  }
  return s;
}

const LineSpace& by_blocks(const std::vector<LineSpace>& ls, std::array<int, 2> first) {
  for (const auto& L : ls)
    if (L.pairing.blocks[0] == first) return L;
  throw std::runtime_error("pairing not found");
}

}  // namespace

TEST(Lines, Enumeration) {
  EXPECT_EQ(enumerate_lines(DiagonalCubicForm::fermat(4)).size(), 3u);
  EXPECT_EQ(enumerate_lines(DiagonalCubicForm::fermat(6)).size(), 15u);
  auto one = enumerate_lines(DiagonalCubicForm({1, 1, 2, 2}));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].pairing.blocks[0], (std::array<int, 2>{0, 1}));
  EXPECT_EQ(one[0].pairing.blocks[1], (std::array<int, 2>{2, 3}));
  EXPECT_EQ(enumerate_lines(DiagonalCubicForm({1, 2, 3, 5})).size(), 0u);
  EXPECT_EQ(enumerate_lines(DiagonalCubicForm({1, -8, 27, 2, 3, 5})).size(), 0u);
  EXPECT_EQ(enumerate_lines(DiagonalCubicForm({1, -8, 27, -1, 2, 16})).size(), 3u);
}

TEST(Lines, StructuralInvariants) {
  std::vector<DiagonalCubicForm> forms{DiagonalCubicForm::fermat(4), DiagonalCubicForm::fermat(6),
                                       DiagonalCubicForm({1, 8, -27, 1}), DiagonalCubicForm({2, -16, 3, 24, 5, 5})};
  std::mt19937_64 rng(1);
  for (const auto& F : forms)
    for (const auto& L : enumerate_lines(F)) {
      EXPECT_NO_THROW(verify_line_space(F, L));
      EXPECT_EQ(L.k(), F.m() / 2);
      auto P = matmul(L.lamperp, L.lambda);
      for (const auto& r : P)
        for (i64 v : r) EXPECT_EQ(v, 0);
      i128 d = determinant(L.M);
      EXPECT_TRUE(d == 1 || d == -1);
      EXPECT_TRUE(is_primitive(L.lamperp));
      EXPECT_TRUE(is_primitive(transpose(L.lambda)));
      std::uniform_int_distribution<i64> U(-50, 50);
      for (int s = 0; s < 100; ++s) {
        IVec t(static_cast<size_t>(L.k()));
        for (auto& v : t) v = U(rng);
        EXPECT_TRUE(F.eval(times_col(L.lambda, t)) == 0);
      }
    }
}

TEST(Lines, PairwiseIntersectionsAreSmall) {
  for (int m : {4, 6}) {
    auto ls = enumerate_lines(DiagonalCubicForm::fermat(m));
    for (size_t a = 0; a < ls.size(); ++a)
      for (size_t b = a + 1; b < ls.size(); ++b) {
        IMat S = ls[a].lamperp;
        S.insert(S.end(), ls[b].lamperp.begin(), ls[b].lamperp.end());
        int meet = 2 * (m / 2) - rank_of(S);
        EXPECT_LT(meet, m / 2);
      }
  }
}

TEST(HCoords, Examples) {
  auto ls = enumerate_lines(DiagonalCubicForm::fermat(4));
  const auto& L = by_blocks(ls, {0, 1});
  EXPECT_EQ(h_coords(L, IVec{1, -1, 5, -5}).h, (IVec{0, 0}));
  EXPECT_EQ(h_coords(L, IVec{1, 0, 0, 0}).h, (IVec{1, 0}));
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<i64> U(-1000, 1000);
  for (const auto& LL : ls)
    for (int s = 0; s < 200; ++s) {
      IVec x(4);
      for (auto& v : x) v = U(rng);
      auto hc = h_coords(LL, x);
      EXPECT_EQ(from_h_coords(LL, hc.h, hc.xp), x);
      std::vector<double> xr(x.begin(), x.end());
      auto hd = h_coords(LL, xr);
      auto back = from_h_coords(LL, hd.h, hd.xp);
      for (int i = 0; i < 4; ++i) EXPECT_NEAR(back[i], xr[i], 1e-9);
    }
}

TEST(CStar, Examples) {
  auto ls = enumerate_lines(DiagonalCubicForm::fermat(4));
  const auto& L = by_blocks(ls, {0, 1});
  EXPECT_EQ(cstar_of(L, IVec{3, 3, 5, 5}), (IVec{3, 5}));
  EXPECT_EQ(cstar_of(L, IVec{0, 0, 0, 0}), (IVec{0, 0}));
  for (int r = 0; r < L.k(); ++r) {
    IVec e(2, 0);
    e[r] = 1;
    EXPECT_EQ(cstar_of(L, L.lamperp[r]), e);
  }
  EXPECT_THROW(cstar_of(L, IVec{1, 2, 0, 0}), std::invalid_argument);
}

TEST(CStar, DotProductIdentity) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<i64> U(-30, 30);
  for (const auto& L : enumerate_lines(DiagonalCubicForm::fermat(6)))
    for (int s = 0; s < 50; ++s) {
      IVec cs(3), x(6);
      for (auto& v : cs) v = U(rng);
      for (auto& v : x) v = U(rng);
      auto c = c_of_cstar(L, cs);
      ASSERT_EQ(cstar_of(L, c), cs);
      auto h = h_coords(L, x).h;
      i64 lhs = 0, rhs = 0;
      for (int i = 0; i < 6; ++i) lhs += c[i] * x[i];
      for (int j = 0; j < 3; ++j) rhs += cs[j] * h[j];
      ASSERT_EQ(lhs, rhs);
      const u64 n = 17;
      IVec red = cstar_of_mod(L, c, n);
      for (int j = 0; j < 3; ++j) ASSERT_EQ(static_cast<u64>(red[j]), mod(cs[j], n));
    }
}

TEST(CStar, TwoCongruenceNotionsAgree) {
  // For c in Lambda-perp: c = 0 mod n componentwise iff c* = 0 mod n.
  std::mt19937_64 rng(6);
  for (int m : {4, 6})
    for (const auto& L : enumerate_lines(DiagonalCubicForm::fermat(m)))
      for (i64 n = 1; n <= 60; ++n) {
        auto check = [&](const IVec& cs) {
          auto c = c_of_cstar(L, cs);
          bool comp = std::all_of(c.begin(), c.end(), [&](i64 v) { return v % n == 0; });
          bool star = std::all_of(cs.begin(), cs.end(), [&](i64 v) { return v % n == 0; });
          ASSERT_EQ(comp, star);
        };
        if (m == 4) {
          for (i64 a = 0; a < n; ++a)
            for (i64 b = 0; b < n; ++b) check({a, b});
        } else {
          std::uniform_int_distribution<i64> U(0, n - 1);
          for (int s = 0; s < 300; ++s) check({U(rng), U(rng), U(rng)});
          check({n, 0, 2 * n});
        }
      }
}

TEST(LatticeSum, Examples) {
  auto F = DiagonalCubicForm::fermat(4);
  auto ls = enumerate_lines(F);
  auto w = WeightSpec::default_for(4);
  EXPECT_EQ(lattice_point_sum(by_blocks(ls, {0, 1}), w, 50), 0.0);
  WeightSpec far({{10.5, 0.4}, {10.5, 0.4}, {-10.5, 0.4}, {-10.5, 0.4}});
  EXPECT_EQ(lattice_point_sum(by_blocks(ls, {0, 2}), far, 1), 0.0);
  EXPECT_GT(lattice_point_sum(by_blocks(ls, {0, 2}), w, 10), 0.0);
  EXPECT_THROW(lattice_point_sum(ls[0], w, 0.5), std::invalid_argument);
}

TEST(LatticeSum, MatchesBruteEnumeration) {
  for (int m : {4, 6}) {
    auto F = DiagonalCubicForm::fermat(m);
    auto w = WeightSpec::default_for(m);
    const double X = m == 4 ? 23 : 7;
    for (const auto& L : enumerate_lines(F)) {
      double a = lattice_point_sum(L, w, X), b = brute_lattice_sum(L, w, X);
      EXPECT_NEAR(a, b, 1e-12 * (1 + b));
    }
  }
}

TEST(LatticeSum, IndependentOfCompletion) {
  auto F = DiagonalCubicForm::fermat(4);
  auto w = WeightSpec::default_for(4);
  for (const auto& L : enumerate_lines(F)) {
    // Shear the completion by a multiple of lamperp.
    IMat g = L.gamma;
    for (size_t r = 0; r < g.size(); ++r)
      for (int i = 0; i < 4; ++i) g[r][i] += 3 * L.lamperp[0][i] - 2 * L.lamperp[1][i];
    auto L2 = with_completion(L, g);
    EXPECT_NO_THROW(verify_line_space(F, L2));
    EXPECT_NEAR(lattice_point_sum(L, w, 31), lattice_point_sum(L2, w, 31), 1e-12);
  }
}

TEST(Lines, JsonRecord) {
  auto L = enumerate_lines(DiagonalCubicForm({1, 1, 2, 2}))[0];
  auto j = nlohmann::json::parse(to_json(L));
  EXPECT_EQ(j["pairing"], nlohmann::json::parse("[[1,2],[3,4]]"));
  EXPECT_EQ(j["lamperp_basis"].size(), 2u);
  EXPECT_EQ(j["lambda_basis"].size(), 4u);
  EXPECT_TRUE(j.contains("gamma"));
  EXPECT_TRUE(j.contains("ratios"));
}
