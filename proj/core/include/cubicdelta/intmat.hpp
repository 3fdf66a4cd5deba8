#pragma once

#include <vector>

#include "cubicdelta/arith.hpp"

namespace cubicdelta {

using IVec = std::vector<i64>;
/// Row-major integer matrix.
using IMat = std::vector<IVec>;

IMat transpose(const IMat& A);
IMat matmul(const IMat& A, const IMat& B);
IVec row_times(const IVec& v, const IMat& A);
IVec times_col(const IMat& A, const IVec& v);

/// Row Hermite normal form of a full-row-rank matrix: echelon form with positive
/// pivots and entries above each pivot reduced into [0, pivot).
IMat hnf_rows(IMat A);

/// Unimodular column reduction A U = [B | 0] with B lower triangular, for a
/// full-row-rank k x m matrix A. Uinv is the inverse of U.
struct ColumnReduction {
  IMat B;
  IMat U;
  IMat Uinv;
};

ColumnReduction column_reduce(const IMat& A);

/// Rows generating the integer kernel {x : A x = 0}.
IMat kernel_rows(const IMat& A);

/// True iff the row lattice of A equals its rational saturation.
bool is_primitive(const IMat& A);

i128 determinant(const IMat& A);
/// Exact inverse of a matrix with determinant +-1.
IMat inverse_unimodular(const IMat& A);

}  // namespace cubicdelta
