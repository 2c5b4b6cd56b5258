#include "qdecay/growth_curve.hpp"

#include <algorithm>
#include <cmath>

#include "qdecay/errors.hpp"

namespace qdecay {

std::string to_string(VolumeMethod method) {
  switch (method) {
    case VolumeMethod::quadrature: return "quadrature";
    case VolumeMethod::monte_carlo: return "monte-carlo";
    case VolumeMethod::model: return "model";
  }
  return "unknown";
}

double GrowthCurve::volume_at(double radius) const {
  if (t.empty()) throw GridError("empty growth curve");
  if (radius <= t.front()) {
    if (t.size() < 2 || radius == t.front()) return volume.front();
  }
  auto it = std::upper_bound(t.begin(), t.end(), radius);
  std::size_t hi = std::clamp<std::size_t>(it - t.begin(), 1, t.size() - 1);
  std::size_t lo = hi - 1;
  const double v0 = volume[lo], v1 = volume[hi];
  if (v0 > 0.0 && v1 > 0.0 && t[lo] > 0.0) {
    const double s = (std::log(radius) - std::log(t[lo])) / (std::log(t[hi]) - std::log(t[lo]));
    return std::exp(std::log(v0) + s * (std::log(v1) - std::log(v0)));
  }
  const double s = (radius - t[lo]) / (t[hi] - t[lo]);
  return v0 + s * (v1 - v0);
}

void GrowthCurve::validate() const {
  if (t.size() < 2) throw GridError("growth curve needs at least 2 samples");
  if (volume.size() != t.size()) throw ShapeError("growth curve columns differ in length");
  if (!stderr_.empty() && stderr_.size() != t.size())
    throw ShapeError("growth curve stderr column has the wrong length");
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!(t[k] > 0.0)) throw GridError("growth radii must be positive");
    if (k > 0 && !(t[k] > t[k - 1])) throw GridError("growth radii must increase");
    if (!(volume[k] >= 0.0)) throw MonotonicityError("negative ball volume");
  }
  for (std::size_t k = 1; k < t.size(); ++k) {
    double slack = 0.0;
    if (!stderr_.empty()) slack = 3.0 * std::hypot(stderr_[k], stderr_[k - 1]);
    if (volume[k] < volume[k - 1] - slack)
      throw MonotonicityError("ball volume decreases at t = " + std::to_string(t[k]));
  }
}

GrowthCurve GrowthCurve::coarsened(int stride) const {
  if (stride < 1) throw ParameterError("stride must be positive");
  GrowthCurve out = *this;
  out.t.clear();
  out.volume.clear();
  out.stderr_.clear();
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (k % stride != 0 && k + 1 != t.size()) continue;
    out.t.push_back(t[k]);
    out.volume.push_back(volume[k]);
    if (!stderr_.empty()) out.stderr_.push_back(stderr_[k]);
  }
  return out;
}

GrowthCurve GrowthCurve::truncated(double t_max) const {
  GrowthCurve out = *this;
  out.t.clear();
  out.volume.clear();
  out.stderr_.clear();
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] > t_max) break;
    out.t.push_back(t[k]);
    out.volume.push_back(volume[k]);
    if (!stderr_.empty()) out.stderr_.push_back(stderr_[k]);
  }
  return out;
}

}  // namespace qdecay
