#pragma once

#include <vector>

#include "cubicdelta/forms.hpp"
#include "cubicdelta/lattices.hpp"

namespace cubicdelta {

/// Point counts of V: F = 0 and V_c: F = c.x = 0 over F_p, with m* = m - 3.
struct CountReport {
  u64 p = 0;
  int m = 0;
  /// |C(V_c)(F_p)|, the affine cone including the origin.
  i64 affine_cone_count = 0;
  /// |C(V)(F_p)|.
  i64 affine_count_V = 0;
  /// rho_c(p) = |V_c(F_p)|.
  i64 projective_count = 0;
  /// rho(p) = |V(F_p)|.
  i64 projective_count_V = 0;
  i64 E_c = 0;
  i64 E = 0;
  double Et_c = 0;
  double Et = 0;
};

/// Exact counts by convolving the joint distribution of (F(x), c.x) over F_p^2.
CountReport count_Vc(const DiagonalCubicForm& F, const IVec& c, u64 p);
/// |C(V_c)(F_p)| by an m-fold loop; p^m <= 1e8.
i64 count_Vc_naive(const DiagonalCubicForm& F, const IVec& c, u64 p);

/// The hyperelliptic curve z^2 = P_c(t) attached to an m = 6 trivial c mod p.
struct HyperellipticData {
  u64 p = 0;
  /// Coefficients of P_c(t) mod p, lowest degree first; always six entries.
  std::vector<u64> coeffs;
  /// |{(z, t) in F_p^2 : z^2 = P_c(t)}|.
  i64 n_points = 0;
  int degree() const;
};

/// F_(k) and c*_k are read off the first index of block k.
HyperellipticData hyperelliptic_data(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p);
/// True iff P_c has degree 5 and no repeated root over the algebraic closure of F_p.
bool poly_squarefree_mod_p(const std::vector<u64>& coeffs, u64 p);
/// True iff disc(P_c) is nonzero mod p. Throws Inadmissible unless the jet is nonvanishing mod p.
bool hyperelliptic_disc_check(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p);

/// Predicted |C(V_c)(F_p)| from the (h, y) change of variables. Throws Inadmissible
/// for inadmissible (c, p) and InvariantViolation if the prediction disagrees with count_Vc.
i64 bias_prediction_p(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p);
/// The same prediction without the cross-check.
i64 predicted_cone_count(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p);

/// |B(l)|: x mod p^l with p^l | F(x), p^l | c.x, p not dividing grad F(x), and grad F(x), c
/// linearly dependent mod p. Requires p^(lm) <= 1e8.
i64 count_B(const DiagonalCubicForm& F, const IVec& c, u64 p, int l);

/// Auxiliary choices in the affine system A_s(l). Variant 0 takes lambda in {1, n_p}
/// and the smaller square roots d(k); other variants rescale lambda by a square and
/// flip signs of d(k), which must leave the count unchanged.
struct AChoice {
  int variant = 0;
};

/// |A_s(l)| by enumeration of the affine system mod p^l; p^(l(m-2)) <= 1e8.
/// Needs p good for F, c in R_J, every c(k)^3 a unit and chi(c(k)^3) constant in k.
i64 count_A(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p, int s, int l,
            AChoice choice = {});
/// Closed form for |A_s(l)|, valid for l >= -1.
double count_A_closed_form(int m, u64 p, int l);

/// Closed form S_c(p^l) for l >= 2, asserted against the exponential sum evaluator
/// within 1e-6 relative. Throws Inadmissible for inadmissible (c, p).
double bias_prediction_pl(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p, int l);
/// The closed form alone.
double predicted_prime_power_sum(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p, int l);

/// Throws Inadmissible unless p is good for F, c lies in R_J and the jet is nonvanishing mod p.
void require_admissible(const DiagonalCubicForm& F, const LineSpace& L, const IVec& c, u64 p);

}  // namespace cubicdelta
