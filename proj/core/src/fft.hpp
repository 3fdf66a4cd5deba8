#pragma once

#include <complex>
#include <vector>

namespace cubicdelta::detail {

using cplx = std::complex<double>;

/// e(r / n) for r = 0..n-1.
std::vector<cplx> twiddles(std::size_t n);

/// In place a[b] <- sum_t a[t] e(b t / n).
void dft_positive(std::vector<cplx>& a);
/// In place a[b] <- sum_t a[t] e(-b t / n).
void dft_negative(std::vector<cplx>& a);

}  // namespace cubicdelta::detail
