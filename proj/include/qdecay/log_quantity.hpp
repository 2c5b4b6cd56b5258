#pragma once

// Signed numbers stored as a natural-log magnitude, for quantities such as
// e^{240 j^2} that overflow doubles.

#include <cmath>
#include <limits>
#include <string>

#include "qdecay/errors.hpp"

namespace qdecay {

class LogQuantity {
 public:
  LogQuantity() = default;  // exact zero

  static LogQuantity from_log(double log_magnitude, int sign = 1) {
    if (sign != 1 && sign != -1) throw ParameterError("log quantity sign must be +1 or -1");
    if (std::isnan(log_magnitude)) throw ParameterError("log magnitude is NaN");
    LogQuantity q;
    if (log_magnitude == -std::numeric_limits<double>::infinity()) return q;
    q.sign_ = sign;
    q.log_ = log_magnitude;
    return q;
  }

  static LogQuantity from_double(double x) {
    if (x == 0.0) return {};
    return from_log(std::log(std::abs(x)), x > 0.0 ? 1 : -1);
  }

  int sign() const { return sign_; }
  // log|x|; -inf for zero.
  double log_magnitude() const {
    return sign_ == 0 ? -std::numeric_limits<double>::infinity() : log_;
  }
  bool is_zero() const { return sign_ == 0; }

  // Natural log of a positive quantity.
  double log() const {
    if (sign_ != 1) throw DomainError("log of a non-positive log quantity");
    return log_;
  }

  // May overflow to +-inf or underflow to 0.
  double to_double() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_); }

  LogQuantity operator-() const {
    LogQuantity q = *this;
    q.sign_ = -q.sign_;
    return q;
  }

  friend LogQuantity operator*(const LogQuantity& a, const LogQuantity& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return from_log(a.log_ + b.log_, a.sign_ * b.sign_);
  }

  friend LogQuantity operator/(const LogQuantity& a, const LogQuantity& b) {
    if (b.is_zero()) throw DomainError("division by a zero log quantity");
    if (a.is_zero()) return {};
    return from_log(a.log_ - b.log_, a.sign_ * b.sign_);
  }

  // Log-sum-exp with signs; exact cancellation gives zero.
  friend LogQuantity operator+(const LogQuantity& a, const LogQuantity& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const LogQuantity& big = a.log_ >= b.log_ ? a : b;
    const LogQuantity& small = a.log_ >= b.log_ ? b : a;
    const double r = std::exp(small.log_ - big.log_);
    if (big.sign_ == small.sign_) return from_log(big.log_ + std::log1p(r), big.sign_);
    if (r == 1.0) return {};
    return from_log(big.log_ + std::log1p(-r), big.sign_);
  }

  friend LogQuantity operator-(const LogQuantity& a, const LogQuantity& b) { return a + (-b); }

  LogQuantity pow(double p) const {
    if (sign_ == 0) {
      if (p > 0.0) return {};
      throw DomainError("non-positive power of zero");
    }
    if (sign_ < 0 && p != std::floor(p)) throw DomainError("fractional power of a negative quantity");
    const int s = sign_ < 0 && std::fmod(std::abs(p), 2.0) == 1.0 ? -1 : 1;
    return from_log(p * log_, s);
  }

 private:
  int sign_ = 0;
  double log_ = 0.0;
};

}  // namespace qdecay
