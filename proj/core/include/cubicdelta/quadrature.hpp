#pragma once

#include <functional>
#include <vector>

namespace cubicdelta {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
  size_t size() const { return x.size(); }
};

/// Gauss-Legendre rule with `order` nodes on each of `panels` equal panels of [a, b].
QuadRule gauss_legendre(double a, double b, int order, int panels = 1);

/// Integral of f over [a, b], doubling panels until successive estimates agree to rel_tol
/// (or abs_tol). Throws ScaleError once max_panels is exceeded.
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol = 1e-13,
                  double abs_tol = 1e-300, int order = 20, int max_panels = 1 << 14);

}  // namespace cubicdelta
