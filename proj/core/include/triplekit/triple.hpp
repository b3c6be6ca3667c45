#ifndef TRIPLEKIT_TRIPLE_HPP
#define TRIPLEKIT_TRIPLE_HPP

#include <string>

#include "triplekit/metric_lie.hpp"

namespace triplekit {

/// R(X,Y,U,V) = B([[X,Y],U],V) over an m-basis.
class CurvatureTensor {
 public:
  explicit CurvatureTensor(std::size_t dim_m)
      : dim_(dim_m), entries_(dim_m * dim_m * dim_m * dim_m, Rational(0)) {}

  std::size_t dim_m() const { return dim_; }
  Rational& at(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return entries_[((a * dim_ + b) * dim_ + c) * dim_ + d];
  }
  const Rational& at(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return entries_[((a * dim_ + b) * dim_ + c) * dim_ + d];
  }

  bool is_zero() const;
  bool pair_symmetric() const;       // R(a,b,c,d) = R(c,d,a,b)
  bool skew_symmetric() const;       // skew in (1,2) and (3,4)
  bool first_bianchi() const;        // cyclic sum over (1,2,3) vanishes

 private:
  std::size_t dim_;
  std::vector<Rational> entries_;
};

struct TripleReport {
  bool grading_ok = false;
  bool jacobi_ok = false;
  bool h_is_mm = false;
  bool sigma_invariant = false;  // B(h, m) = 0
  bool ad_invariant = false;
  bool b_m_nondegenerate = false;
  bool b_h_nondegenerate = false;
  bool faithful = false;  // ad(.)|_m injective on h
  Signature m_signature;
  bool pass() const {
    return grading_ok && jacobi_ok && h_is_mm && sigma_invariant && ad_invariant &&
           b_m_nondegenerate && b_h_nondegenerate && faithful;
  }
  std::string summary() const;
};

struct DecompositionResult {
  enum class Kind { Decomposable, Indecomposable, Unknown };
  Kind kind = Kind::Unknown;
  // For Decomposable: the two B-orthogonal ad(h)-invariant nonsingular parts
  // of m, in m-coordinates.
  Subspace m1{0}, m2{0};
  std::string reason;
};

/// Symmetric triple (g, sigma, B) = (h + m, B). The involution is the grading
/// itself: +1 on h, -1 on m; it is never stored as a matrix.
class SymmetricTriple {
 public:
  SymmetricTriple(MetricLieAlgebra metric_algebra, std::vector<std::size_t> h_indices,
                  std::vector<std::size_t> m_indices);

  const MetricLieAlgebra& metric() const { return metric_; }
  const LieAlgebra& algebra() const { return metric_.algebra(); }
  const BilinearForm& form() const { return metric_.form(); }
  const std::vector<std::size_t>& h_indices() const { return h_; }
  const std::vector<std::size_t>& m_indices() const { return m_; }
  std::size_t dim_g() const { return metric_.dim(); }
  std::size_t dim_h() const { return h_.size(); }
  std::size_t dim_m() const { return m_.size(); }

  /// g-basis vector of the a-th m-basis element.
  Vector m_basis_vector(std::size_t a) const { return algebra().basis_vector(m_[a]); }
  Vector h_basis_vector(std::size_t a) const { return algebra().basis_vector(h_[a]); }
  /// Coordinates of a g-vector supported on m, in the m-basis.
  Vector project_m(const Vector& g_vec) const;
  /// Embeds m-coordinates into g.
  Vector embed_m(const Vector& m_vec) const;

  BilinearForm form_on_m() const;
  BilinearForm form_on_h() const;
  /// Matrix of ad(h)|_m in the m-basis for an h-vector given in g-coords.
  Matrix ad_m(const Vector& h_vec) const;

  TripleReport verify() const;
  Signature m_signature() const { return signature(form_on_m()); }

  CurvatureTensor curvature() const;
  /// Ric(X,Y) = tr_m(Z -> [[X,Z],Y]) as a form on m.
  BilinearForm ricci() const;
  /// True iff (G^-1 Ric)^2 = 0 on m.
  bool ricci_two_step() const;

  bool is_solvable() const { return algebra().is_solvable(); }
  bool is_nilpotent() const { return algebra().is_nilpotent(); }
  /// Center of g as a subspace of g (it lies in m for verified triples with
  /// h = [m,m] faithful).
  Subspace center() const { return metric_.center(); }
  /// Center expressed in m-coordinates.
  Subspace center_in_m() const;

  SymmetricTriple direct_sum(const SymmetricTriple& other) const;

  DecompositionResult decomposability() const;

  /// Re-expresses the triple with the m-part of the basis replaced by the
  /// columns of q (an isometry of B|_m); h-basis unchanged.
  SymmetricTriple rebase_m(const Matrix& q) const;

 private:
  MetricLieAlgebra metric_;
  std::vector<std::size_t> h_, m_;
};

/// Unique invariant extension: given a graded algebra and a nondegenerate
/// ad(h)|_m-invariant form on m, produces the triple with B_h defined through
/// B(h, [X,Y]) = B_m([h,X], Y). Throws if ad(.)|_m is not faithful on h (the
/// extension is degenerate exactly then).
SymmetricTriple extend_form(const LieAlgebra& algebra, const std::vector<std::size_t>& h_indices,
                            const std::vector<std::size_t>& m_indices, const Matrix& gram_m);

}  // namespace triplekit

#endif
