#pragma once

#include <complex>
#include <string>
#include <vector>

#include "cubicdelta/forms.hpp"
#include "cubicdelta/lattices.hpp"
#include "cubicdelta/weight.hpp"

namespace cubicdelta {

/// Unit-mass bump supported on [1/2, 1].
double omega(double x);

/// h(x, y) = sum_{j >= 1} (1 / (x j)) [omega(x j) - omega(|y| / (x j))]. Throws for x <= 0.
double h_eval(double x, double y);

/// The scalar delta symbol with modulus scale Y.
class DeltaKernel {
 public:
  explicit DeltaKernel(double Y);

  double Y() const { return Y_; }
  /// Y^2 / sum_n phi(n) h(n / Y, 0).
  double c_Y() const { return cY_; }
  /// Y / sum_q omega(q / Y), which equals c_Y by the divisor-switching argument.
  double c_Y_divisor_form() const;
  double h(double x, double y) const { return h_eval(x, y); }
  /// Every modulus q with h(q / Y, t / Y^2) != 0 is at most this bound.
  u64 max_modulus(i64 t) const;
  /// c_Y Y^-2 sum_q c_q(t) h(q / Y, t / Y^2); equals 1_{t = 0} exactly.
  double delta_sum(i64 t) const;

 private:
  double Y_;
  double cY_;
};

/// |delta_sum(t) - 1_{t = 0}|. Requires |t| <= Y^2.
double delta_identity_residual(const DeltaKernel& K, i64 t);

using cplx = std::complex<double>;

/// I_c(n) = int w(x / X) h(n / Y, F(x) / Y^2) e(-c.x / n) dx by tensor-product
/// Gauss-Legendre with `grid` nodes per axis (at least 16).
cplx osc_integral(const DiagonalCubicForm& F, const WeightSpec& w, const DeltaKernel& K, const std::vector<double>& c,
                  double n, double X, int grid);

/// sigma_{infty, L-perp, w} = int w(M^-1 (0, x')) dx' over R^(m/2).
double sigma_Lperp(const LineSpace& L, const WeightSpec& w, double rel_tol = 1e-12);

struct SigmaFReport {
  /// Richardson-extrapolated slab value.
  double value = 0;
  /// Coarea form int w / |dF/du_j| over F = 0 with u_j solved.
  double coarea = 0;
  std::vector<double> eps;
  /// (2 eps)^-1 int_{|F| <= eps} w for each eps.
  std::vector<double> slab;
  int solved_coordinate = 0;
};

/// sigma_{infty, F, w} = lim (2 eps)^-1 int_{|F(x)| <= eps} w(x) dx.
SigmaFReport sigma_F(const DiagonalCubicForm& F, const WeightSpec& w, double eps0 = 0.05);

struct SingularSeriesReport {
  u64 n_max = 0;
  double value = 0;
  /// Partial sums at n = 2^j - 1 and at n_max.
  std::vector<u64> checkpoints;
  std::vector<double> partial_sums;
  /// sum over 2^j <= n < 2^(j+1) of |n^-m S_0(n)|, for complete blocks.
  std::vector<int> block_exponent;
  std::vector<double> block_abs_sum;
  /// Least-squares slope of log block_abs_sum against log 2^j, over blocks with 2^j >= 16.
  double slope = 0;
  /// Geometric tail bound extrapolated from the last block and the slope.
  double tail_estimate = 0;
  std::string warning;
};

/// Partial sums of sum_n n^-m S_0(n) up to n_max <= 1e5.
SingularSeriesReport singular_series(const DiagonalCubicForm& F, u64 n_max);

}  // namespace cubicdelta
