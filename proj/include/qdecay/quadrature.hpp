#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <vector>

namespace qdecay {

// Bisection driver around the 31-point Gauss-Kronrod rule that stops once the
// error estimate is below max(abs_tol, rel_tol |estimate|). Boost's own
// driver has no absolute floor and recurses to full depth on pieces whose
// integral vanishes.
template <class F>
double adaptive_gk(const F& f, double a, double b, double rel_tol, double abs_tol, unsigned depth) {
  double err = 0.0;
  const double est =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, rel_tol, &err);
  if (depth == 0 || err <= std::max(abs_tol, rel_tol * std::abs(est))) return est;
  const double mid = 0.5 * (a + b);
  return adaptive_gk(f, a, mid, rel_tol, 0.5 * abs_tol, depth - 1) +
         adaptive_gk(f, mid, b, rel_tol, 0.5 * abs_tol, depth - 1);
}

// int_a^b f on dyadic pieces [2^k, 2^{k+1}], so that long ranges keep their
// resolution near the origin.
template <class F>
double segmented_integral(const F& f, double a, double b, double tolerance = 1e-12,
                          unsigned max_depth = 15, double abs_tol = 0.0) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  double c = a <= 1.0 ? 1.0 : std::exp2(std::floor(std::log2(a)) + 1.0);
  while (c < b) {
    if (c > a) cuts.push_back(c);
    c *= 2.0;
  }
  cuts.push_back(b);
  double sum = 0.0;
  for (std::size_t k = 1; k < cuts.size(); ++k)
    sum += adaptive_gk(f, cuts[k - 1], cuts[k], tolerance, abs_tol, max_depth);
  return sum;
}

}  // namespace qdecay
