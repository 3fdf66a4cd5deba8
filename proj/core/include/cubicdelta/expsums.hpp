#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "cubicdelta/expsum_cache.hpp"
#include "cubicdelta/forms.hpp"
#include "cubicdelta/lattices.hpp"

namespace cubicdelta {

using cplx = std::complex<double>;

enum class ExpSumMethod { brute, separable, closed_form, crt_composed };

const char* to_string(ExpSumMethod m);

/// S_c(n) = sum over a mod n coprime to n and x mod n of e_n(a F(x) + c.x).
struct ExpSumValue {
  u64 n = 1;
  IVec c;
  cplx value{1.0, 0.0};
  ExpSumMethod method = ExpSumMethod::separable;
};

/// Throws InvariantViolation if |Im| exceeds 1e-9 (1 + |value|) + 1e-12 scale, where scale is the
/// sum of the absolute values of the summands (rounding noise grows with it).
void check_real(const ExpSumValue& v, double scale = 0);

/// Exact counts of (F(x), c.x) mod n by coordinate-wise convolution, then
/// sum_x c_n(F(x)) e_n(c.x). Cost m n^3.
ExpSumValue expsum_brute(const DiagonalCubicForm& F, const IVec& c, u64 n);
/// The same sum by an m-fold loop over x mod n; n^m <= 1e8.
ExpSumValue expsum_naive(const DiagonalCubicForm& F, const IVec& c, u64 n);

/// Separable evaluator with per-modulus Gauss-sum tables and a prime-power cache.
/// Thread-safe.
class ExpSumEvaluator {
 public:
  explicit ExpSumEvaluator(DiagonalCubicForm F, std::shared_ptr<ExpSumCache> cache = nullptr);

  const DiagonalCubicForm& form() const { return F_; }

  /// S_c(p^l), cached.
  cplx prime_power(const IVec& c, u64 p, int l);
  /// S_c(n) composed over the prime powers of n.
  ExpSumValue operator()(const IVec& c, u64 n);
  /// S_c(n) from the separable kernel applied to the whole modulus, without factoring.
  cplx separable_direct(const IVec& c, u64 n);

  /// S~_c(n) = n^(-(1+m)/2) S_c(n).
  double normalized(const IVec& c, u64 n);
  /// S~'_c(p^l) by the divisor convolution restricted to powers of p.
  double error_prime_power(const IVec& c, u64 p, int l);
  /// S~'_c(n) = sum over d0 d1 d2 = n of mu(d0) d0^(1/2) d1^(-1/2) S~_c(d2).
  double error_term(const IVec& c, u64 n);

  /// Largest modulus handled by the table kernel.
  static constexpr u64 kMaxModulus = 1000000;

 private:
  using TablePtr = std::shared_ptr<const std::vector<cplx>>;

  TablePtr table(u64 n, u64 d);
  cplx kernel(const IVec& c, u64 n, double* scale = nullptr);
  cplx zero_vector_prime_power(u64 q, double* scale = nullptr);

  DiagonalCubicForm F_;
  std::string form_key_;
  std::shared_ptr<ExpSumCache> cache_;
  std::mutex table_mu_;
  std::map<std::pair<u64, u64>, TablePtr> tables_;
  size_t table_entries_ = 0;
};

ExpSumValue expsum(const DiagonalCubicForm& F, const IVec& c, u64 n);
double expsum_error(const DiagonalCubicForm& F, const IVec& c, u64 n);

struct CosetAverage {
  /// Mean of S_c(n) e_n(-c*.j) over a fundamental domain of Lambda-perp / n Lambda-perp.
  cplx via_average;
  /// sum over a coprime to n and x mod n with h(x) = j mod n of e_n(a F(x)).
  cplx via_count;
};

CosetAverage avg_over_coset_both(ExpSumEvaluator& E, const LineSpace& L, u64 n, const IVec& j);
/// Returns via_count after asserting agreement with via_average.
cplx avg_over_coset(const DiagonalCubicForm& F, const LineSpace& L, u64 n, const IVec& j);
/// Mean of S~'_c(n) over c in Lambda-perp / n Lambda-perp.
double avg_error_over_coset(ExpSumEvaluator& E, const LineSpace& L, u64 n);

/// 4^omega(n) prod_j min(cub(n)^(1/6), gcd(cub(n), sq(c_j))^(1/4)).
double crude_bound(const DiagonalCubicForm& F, const IVec& c, u64 n);

}  // namespace cubicdelta
