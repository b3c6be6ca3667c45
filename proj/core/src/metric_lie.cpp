#include "triplekit/metric_lie.hpp"

#include <stdexcept>

namespace triplekit {

MetricLieAlgebra::MetricLieAlgebra(LieAlgebra algebra, BilinearForm form)
    : algebra_(std::move(algebra)), form_(std::move(form)) {
  if (algebra_.dim() != form_.dim())
    throw std::invalid_argument("MetricLieAlgebra: form dimension mismatch");
}

std::vector<InvarianceViolation> MetricLieAlgebra::check_ad_invariance() const {
  std::vector<InvarianceViolation> out;
  std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    Vector ei = algebra_.basis_vector(i);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j; k < n; ++k) {
        Rational r = form_.eval(algebra_.bracket_basis(i, j), algebra_.basis_vector(k)) +
                     form_.eval(algebra_.basis_vector(j), algebra_.bracket_basis(i, k));
        if (!r.is_zero()) out.push_back({i, j, k, r});
      }
  }
  return out;
}

Subspace MetricLieAlgebra::center() const {
  if (!form_.nondegenerate())
    throw std::domain_error("center: form degenerate, [g,g]-perp identity unavailable");
  Subspace direct = algebra_.center_subspace();
  Subspace via_perp = orthogonal_complement(algebra_.derived_subalgebra(), form_);
  if (direct != via_perp) throw std::logic_error("center: [g,g]-perp cross-check failed");
  return direct;
}

bool MetricLieAlgebra::nilpotent_center_bound_check() const {
  if (dim() < 2) throw std::domain_error("nilpotent_center_bound_check: dim < 2");
  if (!algebra_.is_nilpotent())
    throw std::domain_error("nilpotent_center_bound_check: algebra not nilpotent");
  if (!form_.nondegenerate() || !ad_invariant())
    throw std::domain_error("nilpotent_center_bound_check: form not invariant nondegenerate");
  return center().dim() >= 2;
}

}  // namespace triplekit
