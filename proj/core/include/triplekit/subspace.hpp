#ifndef TRIPLEKIT_SUBSPACE_HPP
#define TRIPLEKIT_SUBSPACE_HPP

#include <vector>

#include "triplekit/matrix.hpp"

namespace triplekit {

/// Linear subspace of Q^n, canonicalized to reduced (column) echelon form so
/// that equality is representation-independent.
class Subspace {
 public:
  explicit Subspace(std::size_t ambient_dim) : ambient_(ambient_dim) {}
  /// Span of the given vectors; dependent vectors are dropped by the
  /// canonicalization.
  static Subspace span(std::size_t ambient_dim, const std::vector<Vector>& vectors);
  static Subspace full(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Vector>& basis() const { return basis_; }
  Matrix basis_matrix() const { return Matrix::from_columns(ambient_, basis_); }

  bool contains(const Vector& v) const;
  bool contains(const Subspace& other) const;
  bool operator==(const Subspace& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }
  bool operator!=(const Subspace& o) const { return !(*this == o); }

  Subspace intersect(const Subspace& other) const;
  Subspace sum(const Subspace& other) const;

  /// Representatives completing this subspace to `ambient` (echelon
  /// completion from the given vectors of `ambient`).
  std::vector<Vector> quotient_basis(const Subspace& ambient) const;

 private:
  std::size_t ambient_;
  std::vector<Vector> basis_;  // canonical, linearly independent
};

/// Solves A x = b exactly; throws on inconsistent systems.
Vector solve_linear(const Matrix& a, const Vector& b);

}  // namespace triplekit

#endif
