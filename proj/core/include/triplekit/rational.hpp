#ifndef TRIPLEKIT_RATIONAL_HPP
#define TRIPLEKIT_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace triplekit {

/// Arbitrary-precision rational scalar. Always stored in lowest terms with
/// positive denominator.
class Rational {
 public:
  Rational() : value_(0) {}
  Rational(long n) : value_(n) {}  // NOLINT: implicit by design
  Rational(int n) : value_(n) {}   // NOLINT
  Rational(long num, long den);
  explicit Rational(mpq_class v);

  static Rational from_string(const std::string& s);

  const mpz_class& num() const { return value_.get_num(); }
  const mpz_class& den() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  Rational operator-() const { return Rational(mpq_class(-value_)); }
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.value_ != b.value_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

  Rational abs() const { return sign() < 0 ? -*this : *this; }
  Rational inverse() const;

  double to_double() const { return value_.get_d(); }

  /// Serialized as "p" for integers, "p/q" otherwise.
  std::string str() const;

  /// sqrt if the value is the square of a rational, nullopt otherwise.
  std::optional<Rational> sqrt_exact() const;

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  mpq_class value_;
};

/// gcd of the absolute values, zero entries ignored; gcd({}) = 0.
Rational rational_gcd(const Rational& a, const Rational& b);

}  // namespace triplekit

#endif
