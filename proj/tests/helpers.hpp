#ifndef TRIPLEKIT_TEST_HELPERS_HPP
#define TRIPLEKIT_TEST_HELPERS_HPP

#include <random>

#include "triplekit/bilinear.hpp"

namespace triplekit::testing {

inline Rational rr(long n, long d = 1) { return Rational(n, d); }

inline Vector vec(std::initializer_list<long> vals) {
  Vector v;
  for (long x : vals) v.push_back(Rational(x));
  return v;
}

inline std::vector<Rational> rlist(std::initializer_list<long> vals) {
  std::vector<Rational> v;
  for (long x : vals) v.push_back(Rational(x));
  return v;
}

/// Random small nonzero rational.
inline Rational random_rational(std::mt19937_64& rng, bool nonzero = false) {
  std::uniform_int_distribution<long> num(-4, 4);
  std::uniform_int_distribution<long> den(1, 3);
  Rational r(num(rng), den(rng));
  while (nonzero && r.is_zero()) r = Rational(num(rng), den(rng));
  return r;
}

/// Random invertible matrix: product of unitriangular matrices and a signed
/// permutation, so the result is exactly invertible.
inline Matrix random_invertible(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<long> val(-2, 2);
  Matrix lower = Matrix::identity(n), upper = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      lower(i, j) = Rational(val(rng));
      upper(j, i) = Rational(val(rng));
    }
  Matrix perm(n, n);
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  std::uniform_int_distribution<int> sgn(0, 1);
  for (std::size_t i = 0; i < n; ++i) perm(p[i], i) = Rational(sgn(rng) ? 1 : -1);
  return lower * perm * upper;
}

/// Random nondegenerate symmetric form: P^T D P with D = diag(+-1).
inline Matrix random_nondegenerate_gram(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> sgn(0, 1);
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = Rational(sgn(rng) ? 1 : -1);
  Matrix p = random_invertible(rng, n);
  return p.transpose() * d * p;
}

/// Independent float cross-check of a Sylvester signature: Jacobi rotations
/// on the Gram matrix; counts eigenvalue signs at tolerance.
inline Signature float_signature(const Matrix& gram, double tol = 1e-9) {
  std::size_t n = gram.rows();
  std::vector<std::vector<double>> a(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = gram(i, j).to_double();
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < tol * tol) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-15) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  Signature sig;
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i][i] > tol)
      ++sig.pos;
    else if (a[i][i] < -tol)
      ++sig.neg;
    else
      ++sig.null;
  }
  return sig;
}

}  // namespace triplekit::testing

#endif
