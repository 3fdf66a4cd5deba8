#include "cubicdelta/lattices.hpp"

#include <cmath>
#include <json.hpp>
#include <stdexcept>

#include "cubicdelta/errors.hpp"

namespace cubicdelta {

namespace {

IMat rows_of(const IMat& A, size_t from, size_t to) { return IMat(A.begin() + from, A.begin() + to); }

IMat stack(const IMat& top, const IMat& bottom) {
  IMat M = top;
  M.insert(M.end(), bottom.begin(), bottom.end());
  return M;
}

bool form_vanishes_on(const DiagonalCubicForm& F, const IMat& lambda) {
  const size_t m = lambda.size(), k = lambda.empty() ? 0 : lambda[0].size();
  for (size_t a = 0; a < k; ++a)
    for (size_t b = a; b < k; ++b)
      for (size_t c = b; c < k; ++c) {
        i128 s = 0;
        for (size_t i = 0; i < m; ++i) s += static_cast<i128>(F[static_cast<int>(i)]) * lambda[i][a] * lambda[i][b] * lambda[i][c];
        if (s != 0) return false;
      }
  return true;
}

}  // namespace

LineSpace make_line_space(const DiagonalCubicForm& F, const Pairing& J) {
  if (!J.permissible) throw std::invalid_argument("make_line_space: pairing is not permissible");
  const int m = F.m();
  // R_J = ker E with one equation b c_j - a c_i = 0 per block.
  IMat E;
  for (size_t t = 0; t < J.blocks.size(); ++t) {
    IVec row(static_cast<size_t>(m), 0);
    auto [i, j] = J.blocks[t];
    auto [a, b] = J.ratios[t];
    row[i] = -a;
    row[j] = b;
    E.push_back(row);
  }
  LineSpace L;
  L.pairing = J;
  L.lamperp = hnf_rows(kernel_rows(E));
  auto red = column_reduce(L.lamperp);
  const size_t k = L.lamperp.size();
  L.gamma = rows_of(red.Uinv, k, static_cast<size_t>(m));
  L.lambda = transpose(hnf_rows(kernel_rows(L.lamperp)));
  L.M = stack(L.lamperp, L.gamma);
  L.M_inv = inverse_unimodular(L.M);
  verify_line_space(F, L);
  return L;
}

LineSpace with_completion(const LineSpace& L0, const IMat& gamma) {
  LineSpace L = L0;
  L.gamma = gamma;
  L.M = stack(L.lamperp, gamma);
  i128 d = determinant(L.M);
  if (d != 1 && d != -1) throw std::invalid_argument("with_completion: [lamperp; gamma] is not unimodular");
  L.M_inv = inverse_unimodular(L.M);
  return L;
}

void verify_line_space(const DiagonalCubicForm& F, const LineSpace& L) {
  for (const auto& row : matmul(L.lamperp, L.lambda))
    for (i64 v : row)
      if (v != 0) throw InvariantViolation("line space: lamperp * lambda != 0");
  i128 d = determinant(L.M);
  if (d != 1 && d != -1) throw InvariantViolation("line space: completion is not unimodular");
  if (!is_primitive(L.lamperp)) throw InvariantViolation("line space: lamperp lattice is not primitive");
  if (!is_primitive(transpose(L.lambda))) throw InvariantViolation("line space: lambda lattice is not primitive");
  if (!form_vanishes_on(F, L.lambda)) throw InvariantViolation("line space: F does not vanish on Lambda");
  for (const auto& row : L.lamperp)
    if (!L.pairing.contains(row)) throw InvariantViolation("line space: lamperp row outside R_J");
}

std::vector<LineSpace> enumerate_lines(const DiagonalCubicForm& F) {
  std::vector<LineSpace> out;
  for (const auto& J : permissible_pairings(F)) out.push_back(make_line_space(F, J));
  return out;
}

HCoords<i64> h_coords(const LineSpace& L, const IVec& x) {
  return {times_col(L.lamperp, x), times_col(L.gamma, x)};
}

HCoords<double> h_coords(const LineSpace& L, const std::vector<double>& x) {
  HCoords<double> r;
  for (const auto* A : {&L.lamperp, &L.gamma}) {
    auto& dst = (A == &L.lamperp) ? r.h : r.xp;
    for (const auto& row : *A) {
      double s = 0;
      for (size_t j = 0; j < x.size(); ++j) s += static_cast<double>(row[j]) * x[j];
      dst.push_back(s);
    }
  }
  return r;
}

IVec from_h_coords(const LineSpace& L, const IVec& h, const IVec& xp) {
  IVec hx = h;
  hx.insert(hx.end(), xp.begin(), xp.end());
  return times_col(L.M_inv, hx);
}

std::vector<double> from_h_coords(const LineSpace& L, const std::vector<double>& h, const std::vector<double>& xp) {
  std::vector<double> hx = h;
  hx.insert(hx.end(), xp.begin(), xp.end());
  std::vector<double> x(hx.size(), 0.0);
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < hx.size(); ++j) x[i] += static_cast<double>(L.M_inv[i][j]) * hx[j];
  return x;
}

IVec cstar_of(const LineSpace& L, const IVec& c) {
  IVec full = row_times(c, L.M_inv);
  for (size_t j = static_cast<size_t>(L.k()); j < full.size(); ++j)
    if (full[j] != 0) throw std::invalid_argument("cstar_of: c is not in the row span of lamperp");
  full.resize(static_cast<size_t>(L.k()));
  return full;
}

IVec cstar_of_mod(const LineSpace& L, const IVec& c, u64 n) {
  IVec out(static_cast<size_t>(L.m()), 0);
  for (size_t j = 0; j < out.size(); ++j) {
    u64 s = 0;
    for (size_t i = 0; i < c.size(); ++i) s = (s + mulmod(mod(c[i], n), mod(L.M_inv[i][j], n), n)) % n;
    out[j] = static_cast<i64>(s);
  }
  for (size_t j = static_cast<size_t>(L.k()); j < out.size(); ++j)
    if (out[j] != 0) throw std::invalid_argument("cstar_of_mod: c is not in the row span of lamperp mod n");
  out.resize(static_cast<size_t>(L.k()));
  return out;
}

IVec c_of_cstar(const LineSpace& L, const IVec& cstar) { return row_times(cstar, L.lamperp); }

void xprime_box(const LineSpace& L, const WeightSpec& w, double X, IVec& lo, IVec& hi) {
  lo.assign(static_cast<size_t>(L.k()), 0);
  hi.assign(static_cast<size_t>(L.k()), 0);
  for (int r = 0; r < L.k(); ++r) {
    double a = 0, b = 0;
    for (int i = 0; i < L.m(); ++i) {
      double g = static_cast<double>(L.gamma[r][i]);
      double u = g * X * w[i].lo(), v = g * X * w[i].hi();
      a += std::min(u, v);
      b += std::max(u, v);
    }
    lo[r] = static_cast<i64>(std::floor(a));
    hi[r] = static_cast<i64>(std::ceil(b));
  }
}

double lattice_point_sum(const LineSpace& L, const WeightSpec& w, double X) {
  if (X < 1) throw std::invalid_argument("lattice_point_sum: X must be at least 1");
  if (w.m() != L.m()) throw std::invalid_argument("lattice_point_sum: weight dimension mismatch");
  IVec lo, hi;
  xprime_box(L, w, X, lo, hi);
  const int k = L.k(), m = L.m();
  IVec xp = lo;
  std::vector<double> u(static_cast<size_t>(m));
  double total = 0;
  while (true) {
    for (int i = 0; i < m; ++i) {
      i64 s = 0;
      for (int j = 0; j < k; ++j) s += L.M_inv[i][k + j] * xp[j];
      u[i] = static_cast<double>(s) / X;
    }
    total += w(u);
    int t = 0;
    while (t < k && ++xp[t] > hi[t]) {
      xp[t] = lo[t];
      ++t;
    }
    if (t == k) break;
  }
  return total;
}

std::string to_json(const LineSpace& L) {
  nlohmann::json j;
  nlohmann::json blocks = nlohmann::json::array();
  for (auto [a, b] : L.pairing.blocks) blocks.push_back({a + 1, b + 1});
  j["pairing"] = blocks;
  j["ratios"] = L.pairing.ratios;
  j["lamperp_basis"] = L.lamperp;
  j["lambda_basis"] = L.lambda;
  j["gamma"] = L.gamma;
  return j.dump();
}

}  // namespace cubicdelta
