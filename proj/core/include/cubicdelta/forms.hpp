#pragma once

#include <array>
#include <string>
#include <vector>

#include "cubicdelta/arith.hpp"

namespace cubicdelta {

using IVec = std::vector<i64>;

struct Rational {
  i64 num = 0;
  i64 den = 1;
};

/// F(x) = F_1 x_1^3 + ... + F_m x_m^3 with m in {4, 6}.
class DiagonalCubicForm {
 public:
  explicit DiagonalCubicForm(IVec coeffs);

  /// Parses a comma-separated coefficient list such as "1,1,1,1".
  static DiagonalCubicForm parse(const std::string& spec);
  static DiagonalCubicForm fermat(int m);

  int m() const { return static_cast<int>(coeffs_.size()); }
  const IVec& coeffs() const { return coeffs_; }
  i64 operator[](int i) const { return coeffs_[static_cast<size_t>(i)]; }

  /// True iff p divides 6 * F_1 * ... * F_m.
  bool is_bad_prime(u64 p) const;
  i128 eval(const IVec& x) const;
  double eval(const std::vector<double>& x) const;

  /// Degree of the discriminant form, 3 * 2^(m-2).
  int dual_degree() const { return 3 << (m() - 2); }

  std::string to_string() const;
  bool operator==(const DiagonalCubicForm&) const = default;

 private:
  IVec coeffs_;
};

/// True iff a/b is the cube of a nonzero rational.
bool cube_class_equal(Rational a, Rational b);

/// Exact rational cube root of num/den, if one exists.
bool rational_cube_root(i64 num, i64 den, Rational& root);

/// A partition of {0..m-1} into pairs. For permissible pairings, ratios[k] = (a, b)
/// is the reduced cube root a/b = (F_j / F_i)^(1/3) of block k = {i, j}; R_J is cut
/// out by b * c_j = a * c_i on every block.
struct Pairing {
  std::vector<std::array<int, 2>> blocks;
  bool permissible = false;
  std::vector<std::array<i64, 2>> ratios;

  bool contains(const IVec& c) const;
  std::string to_string() const;
};

/// All (m-1)!! pairings in canonical order, each tagged with permissibility.
std::vector<Pairing> all_pairings(const DiagonalCubicForm& F);
std::vector<Pairing> permissible_pairings(const DiagonalCubicForm& F);

struct EpsVanishReport {
  IVec c;
  int vanish_count = 0;
  int jet_order = -1;
};

EpsVanishReport eps_vanish_report(const DiagonalCubicForm& F, const IVec& c);

enum class CClass { nontrivial, trivial_generic, trivial_degenerate };

const char* to_string(CClass k);

struct Classification {
  CClass kind = CClass::nontrivial;
  std::vector<Pairing> pairings;
  EpsVanishReport report;
};

Classification classify_c(const DiagonalCubicForm& F, const IVec& c);

/// c(k)^3 = c_i^3 / F_i for the first index i of block k, reduced mod p.
std::vector<u64> ck_cubed_mod_p(const DiagonalCubicForm& F, const Pairing& J, const IVec& c, u64 p);

bool jet_nonvanishing_mod_p(const DiagonalCubicForm& F, const Pairing& J, const IVec& c, u64 p);
/// Uses the first permissible pairing whose R_J contains c.
bool jet_nonvanishing_mod_p(const DiagonalCubicForm& F, const IVec& c, u64 p);

struct SingularPoints {
  std::vector<std::vector<QuadExtElem>> points;
  /// Sum over points of 2^(number of zero coordinates).
  int eps_multiplicity = 0;
};

SingularPoints singular_points_mod_p(const DiagonalCubicForm& F, const IVec& c, u64 p);

}  // namespace cubicdelta
