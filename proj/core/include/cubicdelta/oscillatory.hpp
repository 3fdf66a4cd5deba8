#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "cubicdelta/forms.hpp"
#include "cubicdelta/weight.hpp"

namespace cubicdelta {

using cplx = std::complex<double>;

/// I_c(n) for a product weight through the Fourier expansion of y -> h(n/Y, y) on a window
/// containing s F(supp w), s = X^3 / Y^2. With C_hint >= 0 the modes are truncated where
/// prod_i J_i(k, c_i) is negligible for every |c_i| <= C_hint.
///   I_c(n) = X^m sum_k P_k prod_i J_i(k, c_i),
///   J_i(k, c) = int psi_i(u) e(k s F_i u^3 / L - X c u / n) du.
class SeparableOscillatory {
 public:
  SeparableOscillatory(const DiagonalCubicForm& F, const WeightSpec& w, double X, double Y, double n,
                       double tol = 1e-13, i64 C_hint = -1);

  int m() const { return static_cast<int>(coeff_.size()); }
  /// Modes run over -K..K.
  int K() const { return K_; }
  cplx P(int k) const { return P_[static_cast<size_t>(k + K_)]; }
  double prefactor() const { return prefactor_; }

  /// Mode cutoff beyond which prod_i J_i(k, c_i) is negligible for |c_i| <= C.
  int mode_cutoff(i64 C) const;
  /// J_i(k, c) for k = -K..K; requires 0 outside supp psi_i.
  std::vector<cplx> column(int i, i64 c) const;
  /// J_i(k, c) for c = -C..C.
  std::vector<cplx> row(int i, int k, i64 C) const;
  /// Tabulates J_i(k, c) for integers |c| <= C.
  void prepare(i64 C);
  i64 C() const { return C_; }
  cplx J(int i, int k, i64 c) const {
    return J_[(static_cast<size_t>(i) * (2 * K_ + 1) + static_cast<size_t>(k + K_)) * (2 * C_ + 1) +
              static_cast<size_t>(c + C_)];
  }

  /// I_c(n); requires |c_i| <= C.
  cplx I(const IVec& c) const;
  /// Smallest C beyond which every J_i(k, c) is below the bump's Fourier tail.
  i64 suggested_C() const;
  double X() const { return X_; }
  double n() const { return n_; }

 private:
  bool avoids_zero(int i) const;

  std::vector<double> coeff_;
  std::vector<double> lo_, hi_;
  WeightSpec w_;
  double X_, n_, tol_, s_, L_;
  double prefactor_;
  int K_ = 0;
  std::vector<cplx> P_;
  i64 C_ = -1;
  std::vector<cplx> J_;
};

/// int psi(u) e(a u^3 - nu u) du over the support of b, by composite Gauss-Legendre.
cplx bump_phase_integral(const Bump& b, double a, double nu);

/// Fourier coefficients G_k = L^-1 int_{W} g(y) e(-k (y - y0) / L) dy, k = -K..K, of a smooth
/// function g supported in the window W = [y0, y0 + L], truncated where |G_k| < tol max |G|.
std::vector<cplx> window_fourier(const std::function<cplx(double)>& g, double y0, double L, double feature,
                                 double tol, int& K);

}  // namespace cubicdelta
