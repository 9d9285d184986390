#pragma once

// Exact rational numbers backed by GMP.
//
// Every time, distance, dual value and simplex coefficient in the library is a
// Rational, so tight-edge events and LP pivots are computed without rounding.
// Values are kept in canonical form: positive denominator, coprime parts.

#include <compare>
#include <concepts>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace kmpmd {

class Rational {
 public:
  Rational() = default;

  template <std::signed_integral I>
  Rational(I value) : value_(static_cast<long>(value)) {}  // NOLINT(implicit)

  template <std::unsigned_integral I>
  Rational(I value) : value_(static_cast<unsigned long>(value)) {}  // NOLINT(implicit)

  // Throws std::domain_error on a zero denominator.
  Rational(long numerator, long denominator);

  // Accepts "[-]D+", "[-]D+/D+" and "[-]D+.D+". Decimals are converted exactly.
  // Throws std::invalid_argument on malformed text and std::domain_error on a
  // zero denominator.
  static Rational parse(std::string_view text);

  // "p/q", with "/q" omitted when q == 1.
  std::string str() const;
  double to_double() const { return value_.get_d(); }

  int sign() const { return sgn(value_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const;

  std::string numerator_str() const;
  std::string denominator_str() const;

  Rational abs() const;
  Rational operator-() const;

  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  // Throws std::domain_error when rhs is zero.
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  explicit Rational(mpq_class value) : value_(std::move(value)) {}

  mpq_class value_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace kmpmd
