#ifndef TRIPLEKIT_LIE_HPP
#define TRIPLEKIT_LIE_HPP

#include <string>
#include <vector>

#include "triplekit/bilinear.hpp"

namespace triplekit {

/// Bracket tensor entry [e_i, e_j] = sum_k c_{ij}^k e_k, listed for i < j.
struct BracketEntry {
  std::size_t i = 0, j = 0;
  Vector coeffs;  // length = dim
};

struct JacobiViolation {
  std::size_t i = 0, j = 0, k = 0;
  Vector residual;  // sum of the cyclic double brackets
};

/// Finite-dimensional Lie algebra over Q given by structure constants.
/// Antisymmetry is enforced at construction; the Jacobi identity is checked
/// on demand so that raw inputs failing it stay reportable.
class LieAlgebra {
 public:
  LieAlgebra(std::size_t dim, const std::vector<BracketEntry>& brackets,
             std::vector<std::string> labels = {});

  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// c_{ij}^* as a vector; valid for all i, j (antisymmetrized).
  const Vector& bracket_basis(std::size_t i, std::size_t j) const { return table_[i * dim_ + j]; }
  Vector bracket(const Vector& x, const Vector& y) const;

  /// Matrix of ad(x): y -> [x, y].
  Matrix ad(const Vector& x) const;
  Matrix ad_basis(std::size_t i) const;

  std::vector<JacobiViolation> check_jacobi() const;
  bool jacobi_ok() const { return check_jacobi().empty(); }

  Subspace derived_subalgebra() const;  // span of all brackets
  std::vector<Subspace> derived_series() const;
  std::vector<Subspace> lower_central_series() const;
  bool is_solvable() const;
  bool is_nilpotent() const;

  /// K(x, y) = tr(ad x . ad y).
  BilinearForm killing_form() const;

  /// {x : [x, g] = 0}.
  Subspace center_subspace() const;

  Vector basis_vector(std::size_t i) const;

 private:
  std::size_t dim_;
  std::vector<Vector> table_;  // dim*dim entries, each a dim-vector
  std::vector<std::string> labels_;
};

}  // namespace triplekit

#endif
