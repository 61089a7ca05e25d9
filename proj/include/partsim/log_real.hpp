#pragma once

#include <cmath>
#include <compare>
#include <stdexcept>

#include "partsim/numerics.hpp"

namespace partsim {

/// Non-negative real held as its natural logarithm, so that quantities like
/// S(1000, 40) stay representable. Zero is encoded as -inf.
class LogReal {
 public:
  constexpr LogReal() : log_(neg_inf) {}

  static constexpr LogReal zero() { return LogReal(); }
  static constexpr LogReal one() { return from_log(0.0); }

  static constexpr LogReal from_log(double log_value) {
    LogReal r;
    r.log_ = log_value;
    return r;
  }

  static LogReal from_value(double value) {
    if (value < 0.0 || std::isnan(value))
      throw std::domain_error("LogReal requires a non-negative value");
    return from_log(std::log(value));
  }

  double log() const { return log_; }

  /// Converts back to double; may overflow to +inf for huge magnitudes.
  double value() const { return std::exp(log_); }

  bool is_zero() const { return log_ == neg_inf; }

  friend LogReal operator*(LogReal a, LogReal b) {
    if (a.is_zero() || b.is_zero()) return zero();
    return from_log(a.log_ + b.log_);
  }

  friend LogReal operator/(LogReal a, LogReal b) {
    if (b.is_zero()) throw std::domain_error("LogReal division by zero");
    if (a.is_zero()) return zero();
    return from_log(a.log_ - b.log_);
  }

  friend LogReal operator+(LogReal a, LogReal b) {
    return from_log(log_add_exp(a.log_, b.log_));
  }

  LogReal& operator*=(LogReal o) { return *this = *this * o; }
  LogReal& operator/=(LogReal o) { return *this = *this / o; }
  LogReal& operator+=(LogReal o) { return *this = *this + o; }

  friend auto operator<=>(LogReal a, LogReal b) { return a.log_ <=> b.log_; }
  friend bool operator==(LogReal a, LogReal b) { return a.log_ == b.log_; }

 private:
  double log_;
};

}  // namespace partsim
