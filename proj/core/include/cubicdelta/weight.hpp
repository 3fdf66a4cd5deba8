#pragma once

#include <string>
#include <vector>

namespace cubicdelta {

/// psi(t) = exp(-1 / (1 - t^2)) on |t| < 1, zero elsewhere.
double bump(double t);

struct Bump {
  double center = 0;
  double radius = 1;

  double operator()(double x) const { return bump((x - center) / radius); }
  double lo() const { return center - radius; }
  double hi() const { return center + radius; }
};

/// w(x) = prod_i psi((x_i - a_i) / r_i).
class WeightSpec {
 public:
  WeightSpec() = default;
  explicit WeightSpec(std::vector<Bump> bumps);

  /// Bumps on [1,2]^2 x [-2,-1]^(m-2).
  static WeightSpec default_for(int m);
  /// Parses "center:radius,center:radius,...".
  static WeightSpec parse(const std::string& spec);

  int m() const { return static_cast<int>(bumps_.size()); }
  const Bump& operator[](int i) const { return bumps_[static_cast<size_t>(i)]; }
  const std::vector<Bump>& bumps() const { return bumps_; }

  double operator()(const double* u) const;
  double operator()(const std::vector<double>& u) const { return (*this)(u.data()); }

  std::string to_string() const;

 private:
  std::vector<Bump> bumps_;
};

}  // namespace cubicdelta
