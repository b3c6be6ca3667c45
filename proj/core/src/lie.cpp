#include "triplekit/lie.hpp"

#include <stdexcept>

namespace triplekit {

LieAlgebra::LieAlgebra(std::size_t dim, const std::vector<BracketEntry>& brackets,
                       std::vector<std::string> labels)
    : dim_(dim), table_(dim * dim, Vector(dim, Rational(0))), labels_(std::move(labels)) {
  if (labels_.empty())
    for (std::size_t i = 0; i < dim_; ++i) labels_.push_back("e" + std::to_string(i + 1));
  if (labels_.size() != dim_) throw std::invalid_argument("LieAlgebra: bad label count");
  for (const auto& e : brackets) {
    if (e.i >= dim_ || e.j >= dim_ || e.coeffs.size() != dim_)
      throw std::invalid_argument("LieAlgebra: bracket entry out of range");
    if (e.i == e.j) {
      if (!is_zero_vector(e.coeffs))
        throw std::invalid_argument("LieAlgebra: [e_i, e_i] must vanish");
      continue;
    }
    table_[e.i * dim_ + e.j] = e.coeffs;
    Vector neg(dim_);
    for (std::size_t k = 0; k < dim_; ++k) neg[k] = -e.coeffs[k];
    table_[e.j * dim_ + e.i] = neg;
  }
}

Vector LieAlgebra::bracket(const Vector& x, const Vector& y) const {
  if (x.size() != dim_ || y.size() != dim_) throw std::invalid_argument("bracket: dimension mismatch");
  Vector r(dim_, Rational(0));
  for (std::size_t i = 0; i < dim_; ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (y[j].is_zero()) continue;
      const Vector& c = bracket_basis(i, j);
      Rational f = x[i] * y[j];
      for (std::size_t k = 0; k < dim_; ++k) r[k] += f * c[k];
    }
  }
  return r;
}

Matrix LieAlgebra::ad(const Vector& x) const {
  Matrix m(dim_, dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    Vector col = bracket(x, basis_vector(j));
    for (std::size_t i = 0; i < dim_; ++i) m(i, j) = col[i];
  }
  return m;
}

Matrix LieAlgebra::ad_basis(std::size_t i) const { return ad(basis_vector(i)); }

Vector LieAlgebra::basis_vector(std::size_t i) const {
  Vector v(dim_, Rational(0));
  v[i] = 1;
  return v;
}

std::vector<JacobiViolation> LieAlgebra::check_jacobi() const {
  std::vector<JacobiViolation> out;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j)
      for (std::size_t k = j + 1; k < dim_; ++k) {
        Vector r = bracket(bracket_basis(i, j), basis_vector(k));
        r = r + bracket(bracket_basis(j, k), basis_vector(i));
        r = r + bracket(bracket_basis(k, i), basis_vector(j));
        if (!is_zero_vector(r)) out.push_back({i, j, k, std::move(r)});
      }
  return out;
}

Subspace LieAlgebra::derived_subalgebra() const {
  std::vector<Vector> gens;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i + 1; j < dim_; ++j) gens.push_back(bracket_basis(i, j));
  return Subspace::span(dim_, gens);
}

std::vector<Subspace> LieAlgebra::derived_series() const {
  std::vector<Subspace> series{Subspace::full(dim_)};
  while (true) {
    const Subspace& prev = series.back();
    std::vector<Vector> gens;
    for (std::size_t a = 0; a < prev.dim(); ++a)
      for (std::size_t b = a + 1; b < prev.dim(); ++b)
        gens.push_back(bracket(prev.basis()[a], prev.basis()[b]));
    Subspace next = Subspace::span(dim_, gens);
    if (next == prev) break;
    series.push_back(next);
    if (next.dim() == 0) break;
  }
  return series;
}

std::vector<Subspace> LieAlgebra::lower_central_series() const {
  std::vector<Subspace> series{Subspace::full(dim_)};
  while (true) {
    const Subspace& prev = series.back();
    std::vector<Vector> gens;
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t b = 0; b < prev.dim(); ++b)
        gens.push_back(bracket(basis_vector(i), prev.basis()[b]));
    Subspace next = Subspace::span(dim_, gens);
    if (next == prev) break;
    series.push_back(next);
    if (next.dim() == 0) break;
  }
  return series;
}

bool LieAlgebra::is_solvable() const { return derived_series().back().dim() == 0; }
bool LieAlgebra::is_nilpotent() const { return lower_central_series().back().dim() == 0; }

BilinearForm LieAlgebra::killing_form() const {
  std::vector<Matrix> ads;
  ads.reserve(dim_);
  for (std::size_t i = 0; i < dim_; ++i) ads.push_back(ad_basis(i));
  Matrix k(dim_, dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = i; j < dim_; ++j) {
      Rational tr;
      for (std::size_t a = 0; a < dim_; ++a)
        for (std::size_t b = 0; b < dim_; ++b) tr += ads[i](a, b) * ads[j](b, a);
      k(i, j) = k(j, i) = tr;
    }
  return BilinearForm(k);
}

Subspace LieAlgebra::center_subspace() const {
  // [x, e_j] = 0 for all j: stack the structure maps.
  Matrix sys(dim_ * dim_, dim_);
  for (std::size_t j = 0; j < dim_; ++j)
    for (std::size_t k = 0; k < dim_; ++k)
      for (std::size_t i = 0; i < dim_; ++i) sys(j * dim_ + k, i) = bracket_basis(i, j)[k];
  Matrix ker = sys.kernel();
  std::vector<Vector> vecs;
  for (std::size_t c = 0; c < ker.cols(); ++c) vecs.push_back(ker.column(c));
  return Subspace::span(dim_, vecs);
}

}  // namespace triplekit
