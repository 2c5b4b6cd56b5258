#pragma once

// Second-order forward-mode jets: a value together with its gradient and
// Hessian with respect to up to kMaxDim chart coordinates. Metric and scalar
// field expressions are written once as templates over the scalar type and
// evaluated either on doubles or on jets, which yields exact first and second
// partial derivatives without finite differencing.

#include <array>
#include <cmath>
#include <vector>

namespace qdecay {

struct Jet {
  static constexpr int kMaxDim = 4;

  double v = 0.0;
  std::array<double, kMaxDim> d{};
  std::array<double, kMaxDim * kMaxDim> h{};

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly

  static Jet variable(double value, int index) {
    Jet j(value);
    j.d[index] = 1.0;
    return j;
  }

  double hess(int a, int b) const { return h[a * kMaxDim + b]; }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int a = 0; a < kMaxDim; ++a) d[a] += o.d[a];
    for (int a = 0; a < kMaxDim * kMaxDim; ++a) h[a] += o.h[a];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int a = 0; a < kMaxDim; ++a) d[a] -= o.d[a];
    for (int a = 0; a < kMaxDim * kMaxDim; ++a) h[a] -= o.h[a];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    for (int a = 0; a < kMaxDim; ++a)
      for (int b = 0; b < kMaxDim; ++b)
        h[a * kMaxDim + b] = h[a * kMaxDim + b] * o.v + v * o.h[a * kMaxDim + b] +
                             d[a] * o.d[b] + d[b] * o.d[a];
    for (int a = 0; a < kMaxDim; ++a) d[a] = d[a] * o.v + v * o.d[a];
    v *= o.v;
    return *this;
  }
  Jet& operator*=(double s) {
    v *= s;
    for (auto& x : d) x *= s;
    for (auto& x : h) x *= s;
    return *this;
  }
};

// Applies a scalar function with known value and first two derivatives at
// x.v to the jet x (chain rule to second order).
inline Jet apply(const Jet& x, double f, double df, double d2f) {
  Jet r(f);
  for (int a = 0; a < Jet::kMaxDim; ++a) r.d[a] = df * x.d[a];
  for (int a = 0; a < Jet::kMaxDim; ++a)
    for (int b = 0; b < Jet::kMaxDim; ++b)
      r.h[a * Jet::kMaxDim + b] =
          d2f * x.d[a] * x.d[b] + df * x.h[a * Jet::kMaxDim + b];
  return r;
}

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, const Jet& b) { return a *= b; }
inline Jet operator+(Jet a, double b) { a.v += b; return a; }
inline Jet operator+(double a, Jet b) { b.v += a; return b; }
inline Jet operator-(Jet a, double b) { a.v -= b; return a; }
inline Jet operator-(double a, const Jet& b) { return Jet(a) - b; }
inline Jet operator*(Jet a, double b) { return a *= b; }
inline Jet operator*(double a, Jet b) { return b *= a; }
inline Jet operator-(Jet a) { return a *= -1.0; }

inline Jet reciprocal(const Jet& x) {
  const double r = 1.0 / x.v;
  return apply(x, r, -r * r, 2.0 * r * r * r);
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
inline Jet operator/(const Jet& a, double b) { return a * (1.0 / b); }
inline Jet operator/(double a, const Jet& b) { return a * reciprocal(b); }

inline Jet exp(const Jet& x) {
  const double e = std::exp(x.v);
  return apply(x, e, e, e);
}
inline Jet log(const Jet& x) {
  return apply(x, std::log(x.v), 1.0 / x.v, -1.0 / (x.v * x.v));
}
inline Jet log1p(const Jet& x) {
  const double r = 1.0 / (1.0 + x.v);
  return apply(x, std::log1p(x.v), r, -r * r);
}
inline Jet sqrt(const Jet& x) {
  const double s = std::sqrt(x.v);
  return apply(x, s, 0.5 / s, -0.25 / (s * x.v));
}
inline Jet pow(const Jet& x, double p) {
  const double f = std::pow(x.v, p);
  return apply(x, f, p * std::pow(x.v, p - 1.0), p * (p - 1.0) * std::pow(x.v, p - 2.0));
}
inline Jet sin(const Jet& x) {
  const double s = std::sin(x.v), c = std::cos(x.v);
  return apply(x, s, c, -s);
}
inline Jet cos(const Jet& x) {
  const double s = std::sin(x.v), c = std::cos(x.v);
  return apply(x, c, -s, -c);
}
inline Jet sinh(const Jet& x) {
  const double s = std::sinh(x.v), c = std::cosh(x.v);
  return apply(x, s, c, s);
}
inline Jet cosh(const Jet& x) {
  const double s = std::sinh(x.v), c = std::cosh(x.v);
  return apply(x, c, s, c);
}

// Double overloads so templated expressions can call these unqualified
// inside namespace qdecay for either scalar type.
inline double exp(double x) { return std::exp(x); }
inline double log(double x) { return std::log(x); }
inline double log1p(double x) { return std::log1p(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double pow(double x, double p) { return std::pow(x, p); }
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double sinh(double x) { return std::sinh(x); }
inline double cosh(double x) { return std::cosh(x); }

// Value access usable from templated expressions for branching.
inline double value(double x) { return x; }
inline double value(const Jet& x) { return x.v; }

// Seeds a coordinate vector of jets at the given point.
template <class Vec>
std::vector<Jet> seed_jets(const Vec& p, int n) {
  std::vector<Jet> x;
  x.reserve(n);
  for (int i = 0; i < n; ++i) x.push_back(Jet::variable(p[i], i));
  return x;
}

// One-dimensional evaluation: (f, f', f'') of a templated scalar function.
template <class F>
std::array<double, 3> derivatives_1d(const F& fn, double t) {
  const Jet r = fn(Jet::variable(t, 0));
  return {r.v, r.d[0], r.hess(0, 0)};
}

}  // namespace qdecay
