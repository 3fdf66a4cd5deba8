#include "cubicdelta/intmat.hpp"

#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace cubicdelta {

namespace {

i64 floordiv(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

IMat identity(size_t m) {
  IMat I(m, IVec(m, 0));
  for (size_t i = 0; i < m; ++i) I[i][i] = 1;
  return I;
}

}  // namespace

IMat transpose(const IMat& A) {
  if (A.empty()) return {};
  IMat T(A[0].size(), IVec(A.size()));
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < A[0].size(); ++j) T[j][i] = A[i][j];
  return T;
}

IMat matmul(const IMat& A, const IMat& B) {
  IMat C(A.size(), IVec(B.empty() ? 0 : B[0].size(), 0));
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t k = 0; k < B.size(); ++k)
      for (size_t j = 0; j < C[i].size(); ++j) C[i][j] += A[i][k] * B[k][j];
  return C;
}

IVec row_times(const IVec& v, const IMat& A) {
  IVec r(A.empty() ? 0 : A[0].size(), 0);
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < r.size(); ++j) r[j] += v[i] * A[i][j];
  return r;
}

IVec times_col(const IMat& A, const IVec& v) {
  IVec r(A.size(), 0);
  for (size_t i = 0; i < A.size(); ++i)
    for (size_t j = 0; j < v.size(); ++j) r[i] += A[i][j] * v[j];
  return r;
}

IMat hnf_rows(IMat A) {
  const size_t k = A.size();
  if (k == 0) return A;
  const size_t m = A[0].size();
  size_t r = 0;
  for (size_t col = 0; col < m && r < k; ++col) {
    while (true) {
      size_t best = k;
      for (size_t i = r; i < k; ++i)
        if (A[i][col] != 0 && (best == k || std::llabs(A[i][col]) < std::llabs(A[best][col]))) best = i;
      if (best == k) break;
      std::swap(A[r], A[best]);
      bool done = true;
      for (size_t i = r + 1; i < k; ++i) {
        if (A[i][col] == 0) continue;
        i64 q = floordiv(A[i][col], A[r][col]);
        for (size_t j = 0; j < m; ++j) A[i][j] -= q * A[r][j];
        if (A[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (A[r][col] == 0) continue;
    if (A[r][col] < 0)
      for (auto& x : A[r]) x = -x;
    for (size_t i = 0; i < r; ++i) {
      i64 q = floordiv(A[i][col], A[r][col]);
      for (size_t j = 0; j < m; ++j) A[i][j] -= q * A[r][j];
    }
    ++r;
  }
  if (r != k) throw std::invalid_argument("hnf_rows: matrix is not of full row rank");
  return A;
}

ColumnReduction column_reduce(const IMat& A0) {
  IMat A = A0;
  const size_t k = A.size();
  const size_t m = k ? A[0].size() : 0;
  IMat U = identity(m), Uinv = identity(m);
  // col_j -= q col_i on A and U; the inverse acts as row_i += q row_j on Uinv.
  auto axpy = [&](size_t i, size_t j, i64 q) {
    for (auto& row : A) row[j] -= q * row[i];
    for (auto& row : U) row[j] -= q * row[i];
    for (size_t t = 0; t < m; ++t) Uinv[i][t] += q * Uinv[j][t];
  };
  auto swap_cols = [&](size_t i, size_t j) {
    for (auto& row : A) std::swap(row[i], row[j]);
    for (auto& row : U) std::swap(row[i], row[j]);
    std::swap(Uinv[i], Uinv[j]);
  };
  auto negate_col = [&](size_t i) {
    for (auto& row : A) row[i] = -row[i];
    for (auto& row : U) row[i] = -row[i];
    for (auto& x : Uinv[i]) x = -x;
  };
  for (size_t r = 0; r < k; ++r) {
    while (true) {
      size_t best = m;
      for (size_t j = r; j < m; ++j)
        if (A[r][j] != 0 && (best == m || std::llabs(A[r][j]) < std::llabs(A[r][best]))) best = j;
      if (best == m) throw std::invalid_argument("column_reduce: matrix is not of full row rank");
      if (best != r) swap_cols(r, best);
      bool done = true;
      for (size_t j = r + 1; j < m; ++j) {
        if (A[r][j] == 0) continue;
        axpy(r, j, floordiv(A[r][j], A[r][r]));
        if (A[r][j] != 0) done = false;
      }
      if (done) break;
    }
    if (A[r][r] < 0) negate_col(r);
  }
  IMat B(k, IVec(k));
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < k; ++j) B[i][j] = A[i][j];
  return {B, U, Uinv};
}

IMat kernel_rows(const IMat& A) {
  auto red = column_reduce(A);
  const size_t k = A.size(), m = A[0].size();
  IMat out;
  for (size_t j = k; j < m; ++j) {
    IVec v(m);
    for (size_t i = 0; i < m; ++i) v[i] = red.U[i][j];
    out.push_back(v);
  }
  return out;
}

bool is_primitive(const IMat& A) {
  auto red = column_reduce(A);
  i128 d = determinant(red.B);
  return d == 1 || d == -1;
}

i128 determinant(const IMat& A0) {
  const size_t n = A0.size();
  if (n == 0) return 1;
  std::vector<std::vector<i128>> A(n, std::vector<i128>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) A[i][j] = A0[i][j];
  i128 sign = 1, prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (A[k][k] == 0) {
      size_t s = k + 1;
      while (s < n && A[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(A[k], A[s]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) / prev;
    prev = A[k][k];
  }
  return sign * A[n - 1][n - 1];
}

IMat inverse_unimodular(const IMat& A) {
  const size_t n = A.size();
  i128 d = determinant(A);
  if (d != 1 && d != -1) throw std::invalid_argument("inverse_unimodular: determinant is not +-1");
  IMat inv(n, IVec(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      IMat minor;
      for (size_t r = 0; r < n; ++r) {
        if (r == j) continue;
        IVec row;
        for (size_t c = 0; c < n; ++c)
          if (c != i) row.push_back(A[r][c]);
        minor.push_back(row);
      }
      i128 cof = determinant(minor) * (((i + j) % 2) ? -1 : 1);
      inv[i][j] = static_cast<i64>(cof * d);
    }
  }
  return inv;
}

}  // namespace cubicdelta
