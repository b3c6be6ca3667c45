#include "triplekit/subspace.hpp"

#include <stdexcept>

namespace triplekit {

namespace {

// Canonical basis of the span: nonzero rows of the RREF of the vectors laid
// out as rows.
std::vector<Vector> canonicalize(std::size_t ambient, const std::vector<Vector>& vectors) {
  Matrix rows(vectors.size(), ambient);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != ambient) throw std::invalid_argument("Subspace: bad vector length");
    for (std::size_t j = 0; j < ambient; ++j) rows(i, j) = vectors[i][j];
  }
  std::vector<std::size_t> pivots = rows.reduce_to_rref();
  std::vector<Vector> basis;
  basis.reserve(pivots.size());
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    Vector v(ambient);
    for (std::size_t j = 0; j < ambient; ++j) v[j] = rows(i, j);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

Subspace Subspace::span(std::size_t ambient_dim, const std::vector<Vector>& vectors) {
  Subspace s(ambient_dim);
  s.basis_ = canonicalize(ambient_dim, vectors);
  return s;
}

Subspace Subspace::full(std::size_t ambient_dim) {
  std::vector<Vector> id;
  for (std::size_t i = 0; i < ambient_dim; ++i) {
    Vector v(ambient_dim);
    v[i] = 1;
    id.push_back(std::move(v));
  }
  return span(ambient_dim, id);
}

bool Subspace::contains(const Vector& v) const {
  if (v.size() != ambient_) throw std::invalid_argument("Subspace: dimension mismatch");
  if (is_zero_vector(v)) return true;
  std::vector<Vector> augmented = basis_;
  augmented.push_back(v);
  return canonicalize(ambient_, augmented).size() == basis_.size();
}

bool Subspace::contains(const Subspace& other) const {
  for (const auto& v : other.basis_)
    if (!contains(v)) return false;
  return true;
}

Subspace Subspace::sum(const Subspace& other) const {
  if (ambient_ != other.ambient_) throw std::invalid_argument("Subspace: dimension mismatch");
  std::vector<Vector> all = basis_;
  all.insert(all.end(), other.basis_.begin(), other.basis_.end());
  return span(ambient_, all);
}

Subspace Subspace::intersect(const Subspace& other) const {
  if (ambient_ != other.ambient_) throw std::invalid_argument("Subspace: dimension mismatch");
  // x in both spans: solve [B1 | -B2] c = 0 and map back through B1.
  std::size_t d1 = dim(), d2 = other.dim();
  if (d1 == 0 || d2 == 0) return Subspace(ambient_);
  Matrix sys(ambient_, d1 + d2);
  for (std::size_t i = 0; i < ambient_; ++i) {
    for (std::size_t j = 0; j < d1; ++j) sys(i, j) = basis_[j][i];
    for (std::size_t j = 0; j < d2; ++j) sys(i, d1 + j) = -other.basis_[j][i];
  }
  Matrix ker = sys.kernel();
  std::vector<Vector> vectors;
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    Vector v(ambient_, Rational(0));
    for (std::size_t j = 0; j < d1; ++j)
      for (std::size_t i = 0; i < ambient_; ++i) v[i] += ker(j, c) * basis_[j][i];
    vectors.push_back(std::move(v));
  }
  return span(ambient_, vectors);
}

std::vector<Vector> Subspace::quotient_basis(const Subspace& ambient) const {
  if (ambient_ != ambient.ambient_) throw std::invalid_argument("Subspace: dimension mismatch");
  if (!ambient.contains(*this)) throw std::invalid_argument("Subspace: not a subspace of ambient");
  std::vector<Vector> current = basis_;
  std::vector<Vector> reps;
  std::size_t have = dim();
  for (const auto& cand : ambient.basis()) {
    std::vector<Vector> trial = current;
    trial.push_back(cand);
    if (canonicalize(ambient_, trial).size() > have) {
      current.push_back(cand);
      reps.push_back(cand);
      ++have;
    }
  }
  if (have != ambient.dim()) throw std::logic_error("Subspace: completion failed");
  return reps;
}

Vector solve_linear(const Matrix& a, const Vector& b) {
  auto x = a.solve(b);
  if (!x) throw std::domain_error("solve_linear: inconsistent system");
  return *x;
}

}  // namespace triplekit
