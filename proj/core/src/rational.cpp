#include "triplekit/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace triplekit {

Rational::Rational(long num, long den) : value_(num, den) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  value_.canonicalize();
}

Rational::Rational(mpq_class v) : value_(std::move(v)) {
  if (value_.get_den() == 0) throw std::invalid_argument("Rational: zero denominator");
  value_.canonicalize();
}

Rational Rational::from_string(const std::string& s) {
  mpq_class v;
  if (v.set_str(s, 10) != 0) throw std::invalid_argument("Rational: cannot parse '" + s + "'");
  if (v.get_den() == 0) throw std::invalid_argument("Rational: zero denominator in '" + s + "'");
  v.canonicalize();
  return Rational(std::move(v));
}

Rational& Rational::operator+=(const Rational& o) {
  value_ += o.value_;
  return *this;
}
Rational& Rational::operator-=(const Rational& o) {
  value_ -= o.value_;
  return *this;
}
Rational& Rational::operator*=(const Rational& o) {
  value_ *= o.value_;
  return *this;
}
Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("Rational: division by zero");
  value_ /= o.value_;
  return *this;
}

Rational Rational::inverse() const {
  if (is_zero()) throw std::domain_error("Rational: inverse of zero");
  return Rational(mpq_class(1) / value_);
}

std::string Rational::str() const { return value_.get_str(); }

std::optional<Rational> Rational::sqrt_exact() const {
  if (sign() < 0) return std::nullopt;
  mpz_class n = value_.get_num(), d = value_.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t()))
    return std::nullopt;
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
  return Rational(mpq_class(rn, rd));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.value_; }

Rational rational_gcd(const Rational& a, const Rational& b) {
  if (a.is_zero()) return b.abs();
  if (b.is_zero()) return a.abs();
  mpz_class num, den;
  mpz_gcd(num.get_mpz_t(), a.num().get_mpz_t(), b.num().get_mpz_t());
  mpz_lcm(den.get_mpz_t(), a.den().get_mpz_t(), b.den().get_mpz_t());
  return Rational(mpq_class(num, den));
}

}  // namespace triplekit
