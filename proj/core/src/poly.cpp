#include "triplekit/poly.hpp"

#include <stdexcept>

namespace triplekit {

Rational Poly::eval(const Rational& x) const {
  Rational acc;
  for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
  return acc;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = Rational(static_cast<long>(k)) * c_[k];
  return Poly(std::move(d));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  Rational inv = leading().inverse();
  std::vector<Rational> m(c_);
  for (auto& v : m) v *= inv;
  return Poly(std::move(m));
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] += b.c_[k];
  return Poly(std::move(r));
}

Poly operator-(const Poly& a, const Poly& b) {
  std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()), Rational(0));
  for (std::size_t k = 0; k < a.c_.size(); ++k) r[k] += a.c_[k];
  for (std::size_t k = 0; k < b.c_.size(); ++k) r[k] -= b.c_[k];
  return Poly(std::move(r));
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return Poly(std::move(r));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("Poly: division by zero polynomial");
  std::vector<Rational> rem = a.c_;
  std::vector<Rational> quot(a.c_.size() > b.c_.size() ? a.c_.size() - b.c_.size() + 1 : 1,
                             Rational(0));
  Rational lead_inv = b.leading().inverse();
  while (rem.size() >= b.c_.size() && !(rem.size() == 1 && rem[0].is_zero()) && !rem.empty()) {
    while (!rem.empty() && rem.back().is_zero()) rem.pop_back();
    if (rem.size() < b.c_.size()) break;
    std::size_t shift = rem.size() - b.c_.size();
    Rational f = rem.back() * lead_inv;
    quot[shift] = f;
    for (std::size_t k = 0; k < b.c_.size(); ++k) rem[shift + k] -= f * b.c_[k];
  }
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly Poly::gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

std::tuple<Poly, Poly, Poly> Poly::extended_gcd(const Poly& a, const Poly& b) {
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::constant(1), s1;
  Poly t0, t1 = Poly::constant(1);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    Poly s = s0 - q * s1;
    Poly t = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
    t0 = std::move(t1);
    t1 = std::move(t);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  Rational inv = r0.leading().inverse();
  auto scale = [&inv](const Poly& p) {
    std::vector<Rational> c = p.coeffs();
    for (auto& v : c) v *= inv;
    return Poly(std::move(c));
  };
  return {scale(r0), scale(s0), scale(t0)};
}

namespace {

// Divisors of |n| by trial division; the unfactored cofactor (if any) is
// treated as prime. Throws if that cofactor is provably composite, since the
// divisor list would then be incomplete.
std::vector<mpz_class> divisors(mpz_class n) {
  n = abs(n);
  if (n == 0) throw std::domain_error("divisors: zero");
  std::vector<std::pair<mpz_class, unsigned>> factors;
  mpz_class p = 2;
  const mpz_class bound = 1 << 20;
  while (p * p <= n && p <= bound) {
    if (n % p == 0) {
      unsigned e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      factors.push_back({p, e});
    }
    p += (p == 2) ? 1 : 2;
  }
  if (n > 1) {
    if (n > bound && mpz_probab_prime_p(n.get_mpz_t(), 25) == 0)
      throw std::domain_error("rational_roots: coefficient too hard to factor");
    factors.push_back({n, 1});
  }
  std::vector<mpz_class> divs{1};
  for (const auto& [q, e] : factors) {
    std::size_t old = divs.size();
    mpz_class pw = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pw *= q;
      for (std::size_t i = 0; i < old; ++i) divs.push_back(divs[i] * pw);
    }
  }
  return divs;
}

}  // namespace

std::vector<Rational> Poly::rational_roots() const {
  std::vector<Rational> roots;
  if (is_zero()) return roots;
  // Strip x^k factors first.
  std::size_t low = 0;
  while (low < c_.size() && c_[low].is_zero()) ++low;
  if (low > 0) roots.push_back(Rational(0));
  if (low + 1 >= c_.size()) return roots;
  // Clear denominators to an integer polynomial.
  mpz_class den_lcm = 1;
  for (std::size_t k = low; k < c_.size(); ++k)
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c_[k].den().get_mpz_t());
  std::vector<mpz_class> ic;
  for (std::size_t k = low; k < c_.size(); ++k)
    ic.push_back(c_[k].num() * (den_lcm / c_[k].den()));
  for (const auto& p : divisors(ic.front()))
    for (const auto& q : divisors(ic.back()))
      for (int s : {1, -1}) {
        Rational cand(mpq_class(s * p, q));
        if (eval(cand).is_zero()) {
          bool seen = false;
          for (const auto& r : roots) seen = seen || r == cand;
          if (!seen) roots.push_back(cand);
        }
      }
  return roots;
}

Poly minimal_polynomial(const Matrix& t) {
  if (t.rows() != t.cols()) throw std::invalid_argument("minimal_polynomial: non-square");
  std::size_t n = t.rows();
  if (n == 0) return Poly::constant(1);
  std::vector<Matrix> powers{Matrix::identity(n)};
  for (std::size_t d = 1; d <= n; ++d) {
    powers.push_back(t * powers.back());
    Matrix sys(n * n, d + 1);
    for (std::size_t k = 0; k <= d; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) sys(i * n + j, k) = powers[k](i, j);
    Matrix ker = sys.kernel();
    if (ker.cols() > 0) {
      Vector v = ker.column(0);
      if (v[d].is_zero()) continue;  // dependence not involving the top power
      Rational inv = v[d].inverse();
      std::vector<Rational> coeffs(d + 1);
      for (std::size_t k = 0; k <= d; ++k) coeffs[k] = v[k] * inv;
      return Poly(std::move(coeffs));
    }
  }
  throw std::logic_error("minimal_polynomial: no dependence found");
}

Poly characteristic_polynomial(const Matrix& t) {
  if (t.rows() != t.cols()) throw std::invalid_argument("characteristic_polynomial: non-square");
  std::size_t n = t.rows();
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  Matrix m = Matrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    if (k > 1) {
      Matrix tm = t * m;
      for (std::size_t i = 0; i < n; ++i) tm(i, i) += c[n - k + 1];
      m = std::move(tm);
    }
    Matrix tm = t * m;
    Rational tr;
    for (std::size_t i = 0; i < n; ++i) tr += tm(i, i);
    c[n - k] = -tr / Rational(static_cast<long>(k));
  }
  return Poly(std::move(c));
}

Matrix poly_apply(const Poly& p, const Matrix& t) {
  std::size_t n = t.rows();
  Matrix acc(n, n);
  for (std::size_t k = p.coeffs().size(); k-- > 0;) {
    acc = t * acc;
    for (std::size_t i = 0; i < n; ++i) acc(i, i) += p.coeffs()[k];
  }
  return acc;
}

}  // namespace triplekit
