#include "evtlab/extended_scalar.hpp"

#include <ostream>

#include "evtlab/errors.hpp"

namespace evtlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

}  // namespace

ExtendedScalar::ExtendedScalar(double value) {
  if (std::isnan(value)) {
    throw DomainError("ExtendedScalar: NaN input");
  }
  if (value == 0.0) {
    return;
  }
  sign_ = value > 0 ? 1 : -1;
  log_mag_ = std::log(std::fabs(value));
}

ExtendedScalar ExtendedScalar::from_log(int sign, double log_mag) {
  ExtendedScalar out;
  if (sign == 0 || log_mag == kNegInf) {
    return out;
  }
  if (std::isnan(log_mag)) {
    throw DomainError("ExtendedScalar: NaN log magnitude");
  }
  out.sign_ = sign > 0 ? 1 : -1;
  out.log_mag_ = log_mag;
  return out;
}

double ExtendedScalar::to_double() const noexcept {
  if (sign_ == 0) {
    return 0.0;
  }
  return sign_ * std::exp(log_mag_);
}

ExtendedScalar ExtendedScalar::operator-() const noexcept {
  ExtendedScalar out = *this;
  out.sign_ = -out.sign_;
  return out;
}

ExtendedScalar& ExtendedScalar::operator+=(const ExtendedScalar& other) {
  if (other.sign_ == 0) {
    return *this;
  }
  if (sign_ == 0) {
    return *this = other;
  }
  const bool self_larger = log_mag_ >= other.log_mag_;
  const double hi = self_larger ? log_mag_ : other.log_mag_;
  const double lo = self_larger ? other.log_mag_ : log_mag_;
  const int hi_sign = self_larger ? sign_ : other.sign_;
  const double ratio = std::exp(lo - hi);
  if (sign_ == other.sign_) {
    log_mag_ = hi + std::log1p(ratio);
    sign_ = hi_sign;
    return *this;
  }
  if (ratio == 1.0) {
    return *this = ExtendedScalar();
  }
  log_mag_ = hi + std::log1p(-ratio);
  sign_ = hi_sign;
  return *this;
}

ExtendedScalar& ExtendedScalar::operator-=(const ExtendedScalar& other) { return *this += -other; }

ExtendedScalar& ExtendedScalar::operator*=(const ExtendedScalar& other) noexcept {
  if (sign_ == 0 || other.sign_ == 0) {
    return *this = ExtendedScalar();
  }
  sign_ *= other.sign_;
  log_mag_ += other.log_mag_;
  return *this;
}

ExtendedScalar& ExtendedScalar::operator/=(const ExtendedScalar& other) {
  if (other.sign_ == 0) {
    throw DomainError("ExtendedScalar: division by zero");
  }
  if (sign_ == 0) {
    return *this;
  }
  sign_ *= other.sign_;
  log_mag_ -= other.log_mag_;
  return *this;
}

ExtendedScalar ExtendedScalar::scaled_by_exp(double shift) const noexcept {
  ExtendedScalar out = *this;
  if (out.sign_ != 0) {
    out.log_mag_ += shift;
  }
  return out;
}

std::partial_ordering operator<=>(const ExtendedScalar& a, const ExtendedScalar& b) noexcept {
  if (a.sign_ != b.sign_) {
    return a.sign_ <=> b.sign_;
  }
  if (a.sign_ == 0) {
    return std::partial_ordering::equivalent;
  }
  return a.sign_ > 0 ? a.log_mag_ <=> b.log_mag_ : b.log_mag_ <=> a.log_mag_;
}

ExtendedScalar abs(const ExtendedScalar& x) noexcept { return x.sign() < 0 ? -x : x; }

ExtendedScalar sqrt(const ExtendedScalar& x) {
  if (x.sign() < 0) {
    throw DomainError("ExtendedScalar: sqrt of negative value");
  }
  return ExtendedScalar::from_log(x.sign(), 0.5 * x.log_mag());
}

std::ostream& operator<<(std::ostream& os, const ExtendedScalar& x) {
  if (x.is_zero()) {
    return os << "0";
  }
  return os << (x.sign() < 0 ? "-" : "") << "exp(" << x.log_mag() << ")";
}

}  // namespace evtlab
