#pragma once

// Independent reference implementations used only by the tests. None of them calls the
// library's evaluators.

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using IVec = std::vector<i64>;

u64 gcd(u64 a, u64 b);
u64 phi(u64 n);
bool is_prime(u64 n);
std::vector<u64> primes_upto(u64 n);

/// sum over a mod q coprime to q of cos(2 pi a t / q).
double ramanujan(u64 q, i64 t);

/// S_c(n) by the double loop over a coprime to n and x mod n.
std::complex<double> expsum_loop(const IVec& F, const IVec& c, u64 n);

/// S_c(n) from the exact joint distribution of (F(x), c.x) mod n, built coordinate by coordinate.
double expsum_counts(const IVec& F, const IVec& c, u64 n);

/// |{x in F_p^m : F(x) = 0, c.x = 0}| by an m-fold loop.
i64 cone_count_loop(const IVec& F, const IVec& c, u64 p);

/// Legendre symbol from a table of squares.
int legendre_table(i64 r, u64 p);

/// Number of sign patterns with eps_1 = +1 for which sum eps_i sqrt(c_i^3 / F_i) vanishes, in
/// 50-digit arithmetic with the zero test at 1e-30 of the term scale.
int eps_vanish_count_50(const IVec& F, const IVec& c);

/// Standard bump exp(-1 / (1 - t^2)).
double bump(double t);

/// Integral of f over [a, b] by composite 20-point Gauss-Legendre on `panels` panels.
double gauss(const std::function<double(double)>& f, double a, double b, int panels);

}  // namespace oracle
