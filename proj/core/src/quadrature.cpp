#include "cubicdelta/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "cubicdelta/errors.hpp"

namespace cubicdelta {

namespace {

struct TableDeleter {
  void operator()(gsl_integration_glfixed_table* t) const { gsl_integration_glfixed_table_free(t); }
};

// Nodes and weights on [-1, 1].
const QuadRule& reference_rule(int order) {
  static std::mutex mu;
  static std::map<int, QuadRule> rules;
  std::lock_guard lock(mu);
  auto it = rules.find(order);
  if (it != rules.end()) return it->second;
  std::unique_ptr<gsl_integration_glfixed_table, TableDeleter> t(
      gsl_integration_glfixed_table_alloc(static_cast<size_t>(order)));
  if (!t) throw std::runtime_error("gauss_legendre: table allocation failed");
  QuadRule r;
  for (int i = 0; i < order; ++i) {
    double xi, wi;
    gsl_integration_glfixed_point(-1.0, 1.0, static_cast<size_t>(i), &xi, &wi, t.get());
    r.x.push_back(xi);
    r.w.push_back(wi);
  }
  return rules.emplace(order, std::move(r)).first->second;
}

}  // namespace

QuadRule gauss_legendre(double a, double b, int order, int panels) {
  if (order < 1 || panels < 1) throw std::invalid_argument("gauss_legendre: order and panels must be positive");
  const QuadRule& ref = reference_rule(order);
  QuadRule r;
  r.x.reserve(static_cast<size_t>(order) * panels);
  r.w.reserve(static_cast<size_t>(order) * panels);
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (int i = 0; i < order; ++i) {
      r.x.push_back(mid + 0.5 * h * ref.x[i]);
      r.w.push_back(0.5 * h * ref.w[i]);
    }
  }
  return r;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol, double abs_tol,
                 int order, int max_panels) {
  auto apply = [&](int panels) {
    QuadRule r = gauss_legendre(a, b, order, panels);
    double s = 0;
    for (size_t i = 0; i < r.size(); ++i) s += r.w[i] * f(r.x[i]);
    return s;
  };
  double prev = apply(1);
  for (int panels = 2; panels <= max_panels; panels *= 2) {
    double cur = apply(panels);
    if (std::abs(cur - prev) <= std::max(rel_tol * std::abs(cur), abs_tol)) return cur;
    prev = cur;
  }
  throw ScaleError("integrate: no convergence within the panel budget");
}

}  // namespace cubicdelta
