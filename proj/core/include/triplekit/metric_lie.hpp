#ifndef TRIPLEKIT_METRIC_LIE_HPP
#define TRIPLEKIT_METRIC_LIE_HPP

#include "triplekit/lie.hpp"

namespace triplekit {

struct InvarianceViolation {
  std::size_t i = 0, j = 0, k = 0;
  Rational residual;  // B([e_i,e_j],e_k) + B(e_j,[e_i,e_k])
};

/// Lie algebra together with a symmetric bilinear form on the whole algebra.
/// ad-invariance is checked on demand.
class MetricLieAlgebra {
 public:
  MetricLieAlgebra(LieAlgebra algebra, BilinearForm form);

  const LieAlgebra& algebra() const { return algebra_; }
  const BilinearForm& form() const { return form_; }
  std::size_t dim() const { return algebra_.dim(); }

  std::vector<InvarianceViolation> check_ad_invariance() const;
  bool ad_invariant() const { return check_ad_invariance().empty(); }

  /// Center {X : [X, g] = 0}; requires a nondegenerate ad-invariant form and
  /// cross-checks the result against [g,g]-perp.
  Subspace center() const;

  /// Verdict of the nilpotent center bound (dim z >= 2). Preconditions:
  /// nilpotent algebra of dim >= 2 with nondegenerate ad-invariant form.
  bool nilpotent_center_bound_check() const;

 private:
  LieAlgebra algebra_;
  BilinearForm form_;
};

}  // namespace triplekit

#endif
