#ifndef TRIPLEKIT_BILINEAR_HPP
#define TRIPLEKIT_BILINEAR_HPP

#include <tuple>

#include "triplekit/matrix.hpp"
#include "triplekit/subspace.hpp"

namespace triplekit {

/// Sylvester signature: (negative, positive, null) inertia counts.
struct Signature {
  std::size_t neg = 0, pos = 0, null = 0;
  bool operator==(const Signature&) const = default;
};

/// Symmetric bilinear form given by its Gram matrix.
class BilinearForm {
 public:
  explicit BilinearForm(Matrix gram);

  static BilinearForm diagonal(const std::vector<Rational>& d);

  std::size_t dim() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }
  bool nondegenerate() const { return nondegenerate_; }

  Rational eval(const Vector& u, const Vector& v) const;

  /// Gram matrix of the restriction to span(vectors), w.r.t. those vectors.
  Matrix restrict_gram(const std::vector<Vector>& vectors) const;

  Subspace radical() const;

  bool operator==(const BilinearForm& o) const { return gram_ == o.gram_; }

 private:
  Matrix gram_;
  bool nondegenerate_;
};

/// Exact Sylvester signature via congruence diagonalization with symmetric
/// pivoting (largest |pivot|, hyperbolic 2x2 pivot when the remaining
/// diagonal vanishes).
Signature signature(const BilinearForm& b);
Signature signature_of_gram(const Matrix& gram);

Subspace orthogonal_complement(const Subspace& s, const BilinearForm& b);
bool is_totally_isotropic(const Subspace& s, const BilinearForm& b);

}  // namespace triplekit

#endif
