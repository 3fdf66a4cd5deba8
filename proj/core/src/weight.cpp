#include "cubicdelta/weight.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cubicdelta {

double bump(double t) {
  double s = 1.0 - t * t;
  return s > 0 ? std::exp(-1.0 / s) : 0.0;
}

WeightSpec::WeightSpec(std::vector<Bump> bumps) : bumps_(std::move(bumps)) {
  bool origin_excluded = false;
  for (const auto& b : bumps_) {
    if (!(b.radius > 0)) throw std::invalid_argument("weight: radius must be positive");
    if (std::abs(b.center) >= b.radius) origin_excluded = true;
  }
  if (!bumps_.empty() && !origin_excluded) throw std::invalid_argument("weight: 0 must lie outside the support");
}

WeightSpec WeightSpec::default_for(int m) {
  std::vector<Bump> b;
  for (int i = 0; i < m; ++i) b.push_back({i < 2 ? 1.5 : -1.5, 0.5});
  return WeightSpec(std::move(b));
}

WeightSpec WeightSpec::parse(const std::string& spec) {
  std::vector<Bump> b;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    auto colon = tok.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("weight: expected center:radius, got '" + tok + "'");
    try {
      b.push_back({std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1))});
    } catch (const std::exception&) {
      throw std::invalid_argument("weight: malformed entry '" + tok + "'");
    }
  }
  return WeightSpec(std::move(b));
}

double WeightSpec::operator()(const double* u) const {
  double w = 1.0;
  for (size_t i = 0; i < bumps_.size() && w != 0.0; ++i) w *= bumps_[i](u[i]);
  return w;
}

std::string WeightSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (size_t i = 0; i < bumps_.size(); ++i) {
    if (i) os << ",";
    os << bumps_[i].center << ":" << bumps_[i].radius;
  }
  return os.str();
}

}  // namespace cubicdelta
