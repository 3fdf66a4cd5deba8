#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace cubicdelta {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/// Largest modulus accepted by the residue arithmetic.
inline constexpr u64 kMaxModulus = u64{1} << 40;

struct PrimePower {
  u64 p = 0;
  int e = 0;
  bool operator==(const PrimePower&) const = default;
};

/// Prime factorization, sorted by prime.
using Factorization = std::vector<PrimePower>;

Factorization factor(u64 n);
u64 reconstruct(const Factorization& f);
u64 ipow(u64 base, int e);

struct CubSq {
  u64 cub = 1;
  u64 sq = 1;
};

/// Cube-full and square-full parts of n.
CubSq cub_sq_parts(u64 n);

bool is_prime(u64 n);

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
u64 mod(i64 a, u64 m);
u64 invmod(u64 a, u64 m);

int mobius(u64 n);
u64 euler_phi(u64 n);
int omega(u64 n);
u64 tau3(u64 n);
std::vector<u64> divisors(u64 n);

/// c_q(t) = sum over a mod q coprime to q of e(a t / q).
i64 ramanujan_sum(u64 q, i64 t);

/// Legendre symbol (r/p) for an odd prime p.
int legendre(i64 r, u64 p);

u64 smallest_nonresidue(u64 p);

/// Square root of a quadratic residue mod an odd prime; the smaller of the two roots.
u64 sqrt_mod_p(u64 r, u64 p);

/// Square root of a unit r mod p^k (p odd) by Hensel lifting, or nullopt if r is a non-residue.
std::optional<u64> sqrt_mod_pk(u64 r, u64 p, int k);

/// Element a + b*sqrt(d) of F_{p^2}, with d the smallest non-residue mod p.
struct QuadExtElem {
  u64 a = 0;
  u64 b = 0;
  bool operator==(const QuadExtElem&) const = default;
};

class Fp2 {
 public:
  explicit Fp2(u64 p);

  u64 p() const { return p_; }
  u64 d() const { return d_; }

  QuadExtElem from_fp(u64 a) const { return {a % p_, 0}; }
  QuadExtElem add(QuadExtElem x, QuadExtElem y) const;
  QuadExtElem sub(QuadExtElem x, QuadExtElem y) const;
  QuadExtElem neg(QuadExtElem x) const;
  QuadExtElem mul(QuadExtElem x, QuadExtElem y) const;
  QuadExtElem pow(QuadExtElem x, u64 e) const;
  QuadExtElem inv(QuadExtElem x) const;
  u64 norm(QuadExtElem x) const;
  bool is_zero(QuadExtElem x) const { return x.a == 0 && x.b == 0; }

  /// Deterministic square root of r in F_{p^2}.
  QuadExtElem sqrt(u64 r) const;

 private:
  u64 p_;
  u64 d_;
};

QuadExtElem sqrt_in_Fp2(u64 r, u64 p);

}  // namespace cubicdelta
