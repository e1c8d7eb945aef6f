#pragma once

// Signed log-magnitude reals. Products like q^{x(2x-1)} with q > 1 leave the
// double range quickly; carrying (sign, log|value|) keeps them exact enough
// to multiply freely and convert back only when a sum is needed.

#include <cmath>
#include <limits>
#include <ostream>

namespace qasep {

class LogReal {
 public:
  LogReal() : sign_(0), log_(-inf()) {}

  static LogReal zero() { return LogReal(); }
  static LogReal one() { return from_log(+1, 0.0L); }

  static LogReal from_value(long double v) {
    LogReal r;
    if (v == 0.0L || std::isnan((double)v)) {
      r.sign_ = 0;
      r.log_ = -inf();
    } else {
      r.sign_ = v > 0 ? +1 : -1;
      r.log_ = std::log(v > 0 ? v : -v);
    }
    return r;
  }

  static LogReal from_log(int sign, long double log_magnitude) {
    LogReal r;
    r.sign_ = sign;
    r.log_ = sign == 0 ? -inf() : log_magnitude;
    return r;
  }

  int sign() const { return sign_; }
  long double log_abs() const { return log_; }
  bool is_zero() const { return sign_ == 0; }

  long double value_ld() const {
    if (sign_ == 0) return 0.0L;
    return sign_ * std::exp(log_);
  }
  double value() const { return (double)value_ld(); }

  LogReal operator-() const { return from_log(-sign_, log_); }

  LogReal& operator*=(const LogReal& o) {
    if (sign_ == 0 || o.sign_ == 0) {
      sign_ = 0;
      log_ = -inf();
    } else {
      sign_ *= o.sign_;
      log_ += o.log_;
    }
    return *this;
  }
  LogReal& operator/=(const LogReal& o) {
    if (sign_ == 0) return *this;
    sign_ *= o.sign_;  // division by zero -> sign 0, caller beware
    if (o.sign_ == 0) {
      log_ = inf();
      sign_ = 0;
    } else {
      log_ -= o.log_;
    }
    return *this;
  }

  friend LogReal operator*(LogReal a, const LogReal& b) { return a *= b; }
  friend LogReal operator/(LogReal a, const LogReal& b) { return a /= b; }

  LogReal pow_int(long long n) const {
    if (n == 0) return one();
    if (sign_ == 0) return zero();
    int s = (sign_ < 0 && (n % 2 != 0)) ? -1 : +1;
    return from_log(s, log_ * (long double)n);
  }

  friend LogReal operator+(const LogReal& a, const LogReal& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    long double hi = a.log_ > b.log_ ? a.log_ : b.log_;
    long double lo = a.log_ > b.log_ ? b.log_ : a.log_;
    int hi_sign = a.log_ > b.log_ ? a.sign_ : b.sign_;
    if (a.sign_ == b.sign_) {
      return from_log(a.sign_, hi + std::log1p(std::exp(lo - hi)));
    }
    if (a.log_ == b.log_) return zero();
    return from_log(hi_sign, hi + std::log1p(-std::exp(lo - hi)));
  }
  friend LogReal operator-(const LogReal& a, const LogReal& b) { return a + (-b); }

  friend std::ostream& operator<<(std::ostream& os, const LogReal& x) {
    if (x.sign_ == 0) return os << "0";
    return os << (x.sign_ < 0 ? "-" : "+") << "exp(" << (double)x.log_ << ")";
  }

 private:
  static long double inf() { return std::numeric_limits<long double>::infinity(); }
  int sign_;
  long double log_;
};

// 1 - x, stable across the whole magnitude range.
inline LogReal one_minus(const LogReal& x) {
  if (x.is_zero()) return LogReal::one();
  if (x.log_abs() < 45.0L && x.log_abs() > -45.0L) {
    long double d = 1.0L - x.value_ld();
    return LogReal::from_value(d);
  }
  return LogReal::one() - x;
}

}  // namespace qasep
