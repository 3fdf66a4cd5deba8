#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cubicdelta/forms.hpp"
#include "cubicdelta/lattices.hpp"
#include "cubicdelta/weight.hpp"

namespace cubicdelta {

using cplx = std::complex<double>;

struct DeltaParams {
  double X = 8;
  /// 0 selects X^(3/2).
  double Y = 0;
  /// 0 selects the kernel support bound.
  u64 N_max = 0;
  /// 0 selects ceil(X^(1/2 + 0.1)).
  i64 C_max = 0;
  double P = 8;
  int grid = 24;
  /// Relative truncation tolerance of the oscillatory-integral expansions.
  double tol = 1e-11;
  int workers = 1;
  /// Nonzero permutes the order in which c is enumerated.
  u64 c_order_seed = 0;

  double resolved_Y() const;
  i64 resolved_C_max() const;
  u64 resolved_N_max(const DiagonalCubicForm& F, const WeightSpec& w) const;
  /// Throws std::invalid_argument on X < 1, P < 1 or workers < 1.
  void validate() const;
  std::string to_json() const;
};

/// Largest n with h(n / Y, F(x) / Y^2) != 0 for some x in X supp w.
u64 support_bound(const DiagonalCubicForm& F, const WeightSpec& w, double X, double Y);

/// N_{F,w}(X) = sum over x in Z^m of w(x / X) 1_{F(x) = 0}, by meet-in-the-middle over the two
/// halves of the coordinates. Requires X <= 2000 (m = 4) or X <= 60 (m = 6).
double direct_count(const DiagonalCubicForm& F, const WeightSpec& w, double X);
/// The same count by an m-fold loop; at most 1e8 lattice points.
double direct_count_naive(const DiagonalCubicForm& F, const WeightSpec& w, double X);

struct PointwiseDeltaReport {
  double direct = 0;
  /// sum over t of W(t) delta_sum(t), W(t) the w-mass of {F(x) = t}.
  double via_delta = 0;
  double rel_diff = 0;
  size_t distinct_values = 0;
};

/// Replaces 1_{F(x) = 0} by the delta-symbol expansion at every x. At most 1e7 lattice points.
PointwiseDeltaReport pointwise_delta_count(const DiagonalCubicForm& F, const WeightSpec& w, double X, double Y = 0);

struct PoissonSwapReport {
  u64 n = 0;
  double X = 0, Y = 0;
  int modes = 0;
  std::vector<i64> C_values;
  /// sum over |c|_inf <= C of n^-m S_c(n) I_c(n), one entry per C.
  std::vector<cplx> lhs;
  /// sum over x of w(x / X) h(n / Y, F(x) / Y^2) c_n(F(x)).
  double rhs = 0;
  /// sum of the absolute values of the rhs terms.
  double scale = 0;
  std::vector<double> residual;
};

/// Both sides of the Poisson summation identity in c at modulus n. Empty C_values selects the
/// decay cutoff of the oscillatory integrals.
PoissonSwapReport poisson_swap(const DiagonalCubicForm& F, const WeightSpec& w, const DeltaParams& params, u64 n,
                               std::vector<i64> C_values = {});
/// residual / scale at the default cutoff.
double poisson_swap_residual(const DiagonalCubicForm& F, const WeightSpec& w, const DeltaParams& params, u64 n);

struct ReversePoissonClass {
  IVec b_star;
  cplx lhs;
  double rhs = 0;
  double residual = 0;
};

struct ReversePoissonReport {
  u64 n = 0, n0 = 0, n1 = 0;
  i64 C = 0;
  double sigma = 0;
  /// X max |Lambda-perp u| over supp w; the identity needs n1 above it.
  double h_extent = 0;
  double budget = 0;
  std::vector<ReversePoissonClass> classes;
};

/// n1^(-m/2) sum over c in Lambda-perp with c* = b* mod n0 of I_c(n) against
/// sigma_{L-perp} X^(m/2) h(n / Y, 0), for every class b* mod n0. n0 is the largest divisor of
/// n whose cofactor n1 exceeds h_extent.
ReversePoissonReport reverse_poisson_check(const DiagonalCubicForm& F, const LineSpace& L, const WeightSpec& w,
                                           const DeltaParams& params, u64 n);

struct StructuredLine {
  std::string pairing;
  /// c_Y Y^-2 sum over c in Lambda-perp \ 0 with |c|_inf <= C_max and n <= N_max of
  /// n^-m S_c(n) I_c(n).
  double value = 0;
  double predicted = 0;
  double residual = 0;
  /// Contribution of C_max / 2 < |c|_inf <= C_max.
  double shell = 0;
  /// The same sum with S~_c(n) rebuilt from S~'_c by Dirichlet convolution.
  double dirichlet_value = 0;
  double dirichlet_rel_diff = 0;
  size_t c_count = 0;
};

struct StructuredReport {
  std::string form;
  std::string weight;
  DeltaParams params;
  double Y = 0;
  u64 N_max = 0;
  i64 C_max = 0;
  double c_Y = 0;
  std::vector<StructuredLine> lines;
  double total_value = 0;
  double total_predicted = 0;
  /// c_Y Y^-2 sum_n n^-m S_0(n) I_0(n).
  double c0_value = 0;
  /// sigma_{infty,F,w} S_F X^(m-3), with S_F summed to N_max.
  double c0_predicted = 0;
  bool complete = true;
  std::string note;

  std::string to_json() const;
};

/// Restricted double sums over the lattices Lambda-perp of every line space. Without
/// `experiment` the run is limited to m = 4 and X <= 10.
StructuredReport structured_sum(const DiagonalCubicForm& F, const WeightSpec& w, const DeltaParams& params,
                                bool experiment = false);

struct BiasSplitReport {
  double Y = 0, P = 0;
  /// Mean of S~'_c(n0) over c in Lambda-perp / n0 Lambda-perp, n0 = 1..floor(P).
  std::vector<u64> n0;
  std::vector<double> coset_average;
  /// sum over n0 <= P of the coset averages times sigma X^(m/2) h(n0 / Y, 0), against its
  /// n0 = 1 term.
  double collapsed = 0;
  double collapsed_n0_one = 0;
  /// Y^-2 sum_n phi(n) h(n / Y, 0) 1_{n >= Y / P} and the unrestricted sum.
  double prop_sum = 0;
  double prop_sum_unrestricted = 0;
  double c_Y = 0;
};

BiasSplitReport bias_error_split_audit(const DiagonalCubicForm& F, const LineSpace& L, const WeightSpec& w,
                                       const DeltaParams& params);

}  // namespace cubicdelta
