#ifndef TRIPLEKIT_QUADEXT_HPP
#define TRIPLEKIT_QUADEXT_HPP

#include <stdexcept>

#include "triplekit/rational.hpp"

namespace triplekit {

/// Element a + b*sqrt(r) of a real quadratic extension of Q, r > 0 rational.
/// Square radicands are folded into the rational part on construction, so
/// the representation with b != 0 always has irrational sqrt(r).
class QuadExt {
 public:
  QuadExt() : a_(0), b_(0), r_(1) {}
  QuadExt(int v) : a_(v), b_(0), r_(1) {}  // NOLINT: field scalar conversions
  QuadExt(const Rational& v) : a_(v), b_(0), r_(1) {}  // NOLINT
  QuadExt(Rational a, Rational b, Rational r) : a_(std::move(a)), b_(std::move(b)), r_(std::move(r)) {
    normalize();
  }

  static QuadExt sqrt_of(const Rational& r) {
    if (r.sign() <= 0) throw std::invalid_argument("QuadExt: radicand must be positive");
    return QuadExt(Rational(0), Rational(1), r);
  }

  const Rational& rat() const { return a_; }
  const Rational& irr() const { return b_; }
  const Rational& radicand() const { return r_; }
  bool is_rational() const { return b_.is_zero(); }

  friend QuadExt operator+(const QuadExt& x, const QuadExt& y) {
    Rational r = merge(x, y);
    return QuadExt(x.a_ + y.a_, x.b_ + y.b_, r);
  }
  friend QuadExt operator-(const QuadExt& x, const QuadExt& y) {
    Rational r = merge(x, y);
    return QuadExt(x.a_ - y.a_, x.b_ - y.b_, r);
  }
  QuadExt operator-() const { return QuadExt(-a_, -b_, r_); }
  friend QuadExt operator*(const QuadExt& x, const QuadExt& y) {
    Rational r = merge(x, y);
    return QuadExt(x.a_ * y.a_ + x.b_ * y.b_ * r, x.a_ * y.b_ + x.b_ * y.a_, r);
  }
  friend QuadExt operator/(const QuadExt& x, const QuadExt& y) {
    Rational r = merge(x, y);
    Rational norm = y.a_ * y.a_ - y.b_ * y.b_ * r;
    if (norm.is_zero()) throw std::domain_error("QuadExt: division by zero");
    QuadExt conj(y.a_, -y.b_, r);
    QuadExt prod = x * conj;
    return QuadExt(prod.a_ / norm, prod.b_ / norm, r);
  }
  QuadExt& operator+=(const QuadExt& o) { return *this = *this + o; }
  QuadExt& operator-=(const QuadExt& o) { return *this = *this - o; }
  QuadExt& operator*=(const QuadExt& o) { return *this = *this * o; }

  friend bool operator==(const QuadExt& x, const QuadExt& y) {
    if (!x.b_.is_zero() && !y.b_.is_zero() && x.r_ != y.r_) return false;
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const QuadExt& x, const QuadExt& y) { return !(x == y); }


 private:
  void normalize() {
    if (b_.is_zero()) {
      r_ = Rational(1);
      return;
    }
    if (r_.sign() <= 0) throw std::invalid_argument("QuadExt: radicand must be positive");
    if (auto root = r_.sqrt_exact()) {
      a_ += b_ * *root;
      b_ = Rational(0);
      r_ = Rational(1);
    }
  }
  // Common radicand of two operands; rational values adapt to the other side.
  static Rational merge(const QuadExt& x, const QuadExt& y) {
    if (x.b_.is_zero()) return y.b_.is_zero() ? Rational(1) : y.r_;
    if (y.b_.is_zero()) return x.r_;
    if (x.r_ != y.r_) throw std::invalid_argument("QuadExt: mixed radicands");
    return x.r_;
  }

  Rational a_, b_, r_;
};

}  // namespace triplekit

#endif
