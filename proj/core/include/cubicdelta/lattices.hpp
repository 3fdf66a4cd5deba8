#pragma once

#include <string>
#include <vector>

#include "cubicdelta/forms.hpp"
#include "cubicdelta/intmat.hpp"
#include "cubicdelta/weight.hpp"

namespace cubicdelta {

/// A permissible pairing with its lattices. Rows of lamperp generate
/// Lambda-perp = R_J, columns of lambda generate Lambda = R_J-perp, and
/// M = [lamperp; gamma] is unimodular.
struct LineSpace {
  Pairing pairing;
  IMat lamperp;
  IMat lambda;
  IMat gamma;
  IMat M;
  IMat M_inv;

  int m() const { return static_cast<int>(M.size()); }
  int k() const { return static_cast<int>(lamperp.size()); }
};

LineSpace make_line_space(const DiagonalCubicForm& F, const Pairing& J);
/// Same lattices with a different unimodular completion.
LineSpace with_completion(const LineSpace& L, const IMat& gamma);
/// Throws InvariantViolation unless every structural invariant holds.
void verify_line_space(const DiagonalCubicForm& F, const LineSpace& L);

std::vector<LineSpace> enumerate_lines(const DiagonalCubicForm& F);

template <typename T>
struct HCoords {
  std::vector<T> h;
  std::vector<T> xp;
};

HCoords<i64> h_coords(const LineSpace& L, const IVec& x);
HCoords<double> h_coords(const LineSpace& L, const std::vector<double>& x);
IVec from_h_coords(const LineSpace& L, const IVec& h, const IVec& xp);
std::vector<double> from_h_coords(const LineSpace& L, const std::vector<double>& h, const std::vector<double>& xp);

/// c* with c = c* lamperp over Z.
IVec cstar_of(const LineSpace& L, const IVec& c);
/// c* with c = c* lamperp over Z/nZ, entries in [0, n).
IVec cstar_of_mod(const LineSpace& L, const IVec& c, u64 n);
/// c* lamperp as an integer vector.
IVec c_of_cstar(const LineSpace& L, const IVec& cstar);

/// Integer box [lo, hi] containing Gamma x for every x in X * supp(w).
void xprime_box(const LineSpace& L, const WeightSpec& w, double X, IVec& lo, IVec& hi);

/// Sum over x in Lambda of w(x / X).
double lattice_point_sum(const LineSpace& L, const WeightSpec& w, double X);

std::string to_json(const LineSpace& L);

}  // namespace cubicdelta
