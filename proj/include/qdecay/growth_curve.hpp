#pragma once

#include <string>
#include <vector>

namespace qdecay {

enum class VolumeMethod { quadrature, monte_carlo, model };

std::string to_string(VolumeMethod method);

// Ball volumes vol(B_t) sampled on increasing radii.
struct GrowthCurve {
  int n = 2;
  std::vector<double> t;
  std::vector<double> volume;
  std::vector<double> stderr_;  // Monte Carlo standard errors, zero otherwise
  VolumeMethod method = VolumeMethod::model;

  std::size_t size() const { return t.size(); }
  // Piecewise-linear interpolation in (log t, log vol); exact for power laws.
  double volume_at(double radius) const;
  // Throws MonotonicityError when volumes decrease by more than 3 standard
  // errors (or at all, for deterministic curves) and GridError for a bad grid.
  void validate() const;
  // Every `stride`-th sample, keeping the last one.
  GrowthCurve coarsened(int stride) const;
  // Samples with t <= t_max.
  GrowthCurve truncated(double t_max) const;
};

}  // namespace qdecay
