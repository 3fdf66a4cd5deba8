#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "cubicdelta/forms.hpp"
#include "cubicdelta/lattices.hpp"

namespace support {

using cubicdelta::i64;
using cubicdelta::IVec;
using cubicdelta::u64;

/// Every nonzero c in R_J with |c_i| <= bound, read off the block ratios b c_j = a c_i.
inline std::vector<IVec> vectors_in_RJ(const cubicdelta::Pairing& J, int m, i64 bound) {
  std::vector<IVec> out{IVec(static_cast<size_t>(m), 0)};
  for (size_t t = 0; t < J.blocks.size(); ++t) {
    auto [i, j] = J.blocks[t];
    auto [a, b] = J.ratios[t];
    std::vector<IVec> next;
    for (const auto& c : out)
      for (i64 ci = -bound; ci <= bound; ++ci) {
        if ((a * ci) % b != 0) continue;
        i64 cj = a * ci / b;
        if (cj < -bound || cj > bound) continue;
        IVec d = c;
        d[i] = ci;
        d[j] = cj;
        next.push_back(std::move(d));
      }
    out.swap(next);
  }
  std::erase(out, IVec(static_cast<size_t>(m), 0));
  return out;
}

/// p good for F, p > m, c in R_J and the jet nonvanishing mod p.
inline bool admissible(const cubicdelta::DiagonalCubicForm& F, const cubicdelta::LineSpace& L, const IVec& c, u64 p) {
  if (F.is_bad_prime(p) || p <= static_cast<u64>(F.m()) || !L.pairing.contains(c)) return false;
  return cubicdelta::jet_nonvanishing_mod_p(F, L.pairing, c, p);
}

inline IVec random_c(std::mt19937_64& rng, int m, i64 bound) {
  std::uniform_int_distribution<i64> U(-bound, bound);
  IVec c(static_cast<size_t>(m));
  for (auto& v : c) v = U(rng);
  return c;
}

inline std::vector<u64> good_primes(const cubicdelta::DiagonalCubicForm& F, u64 lo, u64 hi) {
  std::vector<u64> out;
  for (u64 p = lo; p <= hi; ++p)
    if (cubicdelta::is_prime(p) && !F.is_bad_prime(p) && p > static_cast<u64>(F.m())) out.push_back(p);
  return out;
}

}  // namespace support
