#ifndef TRIPLEKIT_POLY_HPP
#define TRIPLEKIT_POLY_HPP

#include <optional>
#include <vector>

#include "triplekit/matrix.hpp"

namespace triplekit {

/// Dense univariate polynomial over Q, coefficient of x^k at index k.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly constant(const Rational& r) { return Poly({r}); }
  static Poly x_minus(const Rational& r) { return Poly({-r, Rational(1)}); }

  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational eval(const Rational& x) const;
  Poly derivative() const;
  Poly monic() const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  /// (quotient, remainder) with remainder degree < divisor degree.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
  static Poly gcd(Poly a, Poly b);
  /// (g, u, v) with u*a + v*b = g = gcd(a, b), g monic.
  static std::tuple<Poly, Poly, Poly> extended_gcd(const Poly& a, const Poly& b);

  /// All rational roots with multiplicity stripped to the set of values.
  std::vector<Rational> rational_roots() const;

  bool operator==(const Poly& o) const { return c_ == o.c_; }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// Monic minimal polynomial of a square matrix.
Poly minimal_polynomial(const Matrix& t);

/// Characteristic polynomial via Faddeev-LeVerrier.
Poly characteristic_polynomial(const Matrix& t);

/// Evaluates p(T).
Matrix poly_apply(const Poly& p, const Matrix& t);

}  // namespace triplekit

#endif
