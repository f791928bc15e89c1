#pragma once

#include <cmath>
#include <compare>
#include <iosfwd>
#include <limits>

namespace evtlab {

/// A real number stored as sign and natural log of its magnitude.
///
/// Products and quotients are exact shifts of the exponent, so values such as
/// e^{+-775} that appear when lattices are pushed far along a diagonal flow
/// stay representable. Sums go through log-sum-exp and lose relative
/// precision under cancellation exactly like ordinary doubles do.
class ExtendedScalar {
 public:
  /// Zero.
  constexpr ExtendedScalar() noexcept = default;

  explicit ExtendedScalar(double value);

  /// Builds sign * exp(log_mag). A zero sign yields zero regardless of log_mag.
  static ExtendedScalar from_log(int sign, double log_mag);

  int sign() const noexcept { return sign_; }
  /// Natural log of |value|; -infinity for zero.
  double log_mag() const noexcept { return log_mag_; }
  bool is_zero() const noexcept { return sign_ == 0; }

  /// Converts back to double. Overflows to +-inf and underflows to 0 outside
  /// the double range.
  double to_double() const noexcept;

  ExtendedScalar operator-() const noexcept;
  ExtendedScalar& operator+=(const ExtendedScalar& other);
  ExtendedScalar& operator-=(const ExtendedScalar& other);
  ExtendedScalar& operator*=(const ExtendedScalar& other) noexcept;
  /// Throws DomainError on division by zero.
  ExtendedScalar& operator/=(const ExtendedScalar& other);

  /// Multiplies by e^{shift}.
  ExtendedScalar scaled_by_exp(double shift) const noexcept;

  friend ExtendedScalar operator+(ExtendedScalar a, const ExtendedScalar& b) { return a += b; }
  friend ExtendedScalar operator-(ExtendedScalar a, const ExtendedScalar& b) { return a -= b; }
  friend ExtendedScalar operator*(ExtendedScalar a, const ExtendedScalar& b) noexcept { return a *= b; }
  friend ExtendedScalar operator/(ExtendedScalar a, const ExtendedScalar& b) { return a /= b; }

  friend bool operator==(const ExtendedScalar& a, const ExtendedScalar& b) noexcept {
    return a.sign_ == b.sign_ && (a.sign_ == 0 || a.log_mag_ == b.log_mag_);
  }
  friend std::partial_ordering operator<=>(const ExtendedScalar& a, const ExtendedScalar& b) noexcept;

 private:
  int sign_ = 0;
  double log_mag_ = -std::numeric_limits<double>::infinity();
};

ExtendedScalar abs(const ExtendedScalar& x) noexcept;
/// Throws DomainError for negative input.
ExtendedScalar sqrt(const ExtendedScalar& x);

std::ostream& operator<<(std::ostream& os, const ExtendedScalar& x);

}  // namespace evtlab
