#include "triplekit/bilinear.hpp"

#include <stdexcept>

namespace triplekit {

BilinearForm::BilinearForm(Matrix gram) : gram_(std::move(gram)) {
  if (!gram_.is_symmetric()) throw std::invalid_argument("BilinearForm: gram not symmetric");
  nondegenerate_ = gram_.rank() == gram_.rows();
}

BilinearForm BilinearForm::diagonal(const std::vector<Rational>& d) {
  Matrix g(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) g(i, i) = d[i];
  return BilinearForm(g);
}

Rational BilinearForm::eval(const Vector& u, const Vector& v) const {
  if (u.size() != dim() || v.size() != dim())
    throw std::invalid_argument("BilinearForm: dimension mismatch");
  Rational acc;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (u[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim(); ++j) acc += u[i] * gram_(i, j) * v[j];
  }
  return acc;
}

Matrix BilinearForm::restrict_gram(const std::vector<Vector>& vectors) const {
  Matrix g(vectors.size(), vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i)
    for (std::size_t j = i; j < vectors.size(); ++j) g(i, j) = g(j, i) = eval(vectors[i], vectors[j]);
  return g;
}

Subspace BilinearForm::radical() const { return orthogonal_complement(Subspace::full(dim()), *this); }

Signature signature_of_gram(const Matrix& gram) {
  if (!gram.is_symmetric()) throw std::invalid_argument("signature: gram not symmetric");
  Matrix g = gram;
  std::size_t n = g.rows();
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < n; ++i) live.push_back(i);
  Signature sig;
  while (!live.empty()) {
    // Largest |diagonal| pivot among the live indices.
    std::size_t best = n;
    Rational best_abs;
    for (auto i : live) {
      Rational a = g(i, i).abs();
      if (!a.is_zero() && (best == n || a > best_abs)) {
        best = i;
        best_abs = a;
      }
    }
    if (best != n) {
      Rational d = g(best, best);
      if (d.sign() > 0)
        ++sig.pos;
      else
        ++sig.neg;
      std::vector<std::size_t> rest;
      for (auto k : live)
        if (k != best) rest.push_back(k);
      for (auto k : rest) {
        Rational fk = g(best, k) / d;
        if (fk.is_zero()) continue;
        for (auto l : rest) g(k, l) -= fk * g(best, l);
      }
      for (auto k : rest) g(best, k) = g(k, best) = Rational(0);
      live = std::move(rest);
      continue;
    }
    // Whole live diagonal is zero: hyperbolic pivot on the first nonzero
    // off-diagonal pair, contributing (1,1,0).
    std::size_t hi = n, hj = n;
    for (std::size_t a = 0; a < live.size() && hi == n; ++a)
      for (std::size_t b = a + 1; b < live.size(); ++b)
        if (!g(live[a], live[b]).is_zero()) {
          hi = live[a];
          hj = live[b];
          break;
        }
    if (hi == n) {
      sig.null += live.size();
      break;
    }
    ++sig.pos;
    ++sig.neg;
    Rational b = g(hi, hj);
    std::vector<std::size_t> rest;
    for (auto k : live)
      if (k != hi && k != hj) rest.push_back(k);
    for (auto k : rest)
      for (auto l : rest) g(k, l) -= (g(hi, k) * g(hj, l) + g(hi, l) * g(hj, k)) / b;
    for (auto k : rest) g(hi, k) = g(k, hi) = g(hj, k) = g(k, hj) = Rational(0);
    live = std::move(rest);
  }
  return sig;
}

Signature signature(const BilinearForm& b) { return signature_of_gram(b.gram()); }

Subspace orthogonal_complement(const Subspace& s, const BilinearForm& b) {
  if (s.ambient_dim() != b.dim()) throw std::invalid_argument("orthogonal_complement: dimension mismatch");
  std::size_t n = b.dim();
  Matrix sys(s.dim(), n);
  for (std::size_t r = 0; r < s.dim(); ++r) {
    const Vector& v = s.basis()[r];
    for (std::size_t j = 0; j < n; ++j) {
      Rational acc;
      for (std::size_t i = 0; i < n; ++i) acc += v[i] * b.gram()(i, j);
      sys(r, j) = acc;
    }
  }
  Matrix ker = sys.kernel();
  std::vector<Vector> vecs;
  for (std::size_t c = 0; c < ker.cols(); ++c) vecs.push_back(ker.column(c));
  return Subspace::span(n, vecs);
}

bool is_totally_isotropic(const Subspace& s, const BilinearForm& b) {
  if (s.ambient_dim() != b.dim()) throw std::invalid_argument("is_totally_isotropic: dimension mismatch");
  return b.restrict_gram(s.basis()).is_zero();
}

}  // namespace triplekit
