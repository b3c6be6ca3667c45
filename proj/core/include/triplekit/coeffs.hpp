#ifndef TRIPLEKIT_COEFFS_HPP
#define TRIPLEKIT_COEFFS_HPP

#include <string>

#include "triplekit/triple.hpp"

namespace triplekit {

/// Structure-coefficient families (a_{ijk alpha}, b_{ijkl}, f_{ij alpha beta})
/// of a maximal-center triple relative to an adapted basis with z-dimension p
/// and Euclidean W-dimension s = q - p.
class CoefficientSet {
 public:
  CoefficientSet(std::size_t p, std::size_t s);

  std::size_t p() const { return p_; }
  std::size_t s() const { return s_; }

  Rational& a(std::size_t i, std::size_t j, std::size_t k, std::size_t al);
  const Rational& a(std::size_t i, std::size_t j, std::size_t k, std::size_t al) const;
  Rational& b(std::size_t i, std::size_t j, std::size_t k, std::size_t l);
  const Rational& b(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const;
  Rational& f(std::size_t i, std::size_t j, std::size_t al, std::size_t be);
  const Rational& f(std::size_t i, std::size_t j, std::size_t al, std::size_t be) const;

  bool operator==(const CoefficientSet& o) const {
    return p_ == o.p_ && s_ == o.s_ && a_ == o.a_ && b_ == o.b_ && f_ == o.f_;
  }

 private:
  std::size_t p_, s_;
  std::vector<Rational> a_, b_, f_;
};

struct RelationViolation {
  std::string relation;  // "a-skew", "a-bianchi", "b-pair", ..., "ff", "fa", "aa"
  std::vector<std::size_t> indices;
};

/// Checks the curvature symmetries of (a, b, f) and the three quadratic
/// closure relations; returns every violated instance with its indices.
std::vector<RelationViolation> coefficient_relations_check(const CoefficientSet& c);

/// The bracket table of a maximal-center ansatz on the unreduced space
/// h~ + m, h~ = span{Y_ij (i<j), X_{i alpha}}, m = span{Z_i, W_alpha, Z*_i}.
/// Basis order: Y's, X's, Z's, W's, Z*'s.
struct RawMaxCenter {
  LieAlgebra algebra;
  std::vector<std::size_t> h_indices, m_indices;
  Matrix gram_m;  // Witt pairs B(Z_i, Z*_j) = delta, B(W,W) = I
  std::size_t p, s;
};

RawMaxCenter build_max_center_raw(const CoefficientSet& c);

/// The generators X, Y of the table are linearly dependent in general: the
/// honest algebra is the quotient of h~ by K = ker(ad(.)|_m). The table
/// defines a Lie algebra exactly when K is an ideal of the table brackets
/// and the quotient satisfies Jacobi.
bool max_center_jacobi_ok(const CoefficientSet& c);

/// Faithful quotient plus the invariant form extension; throws when the
/// table does not define a Lie algebra.
SymmetricTriple max_center_triple(const CoefficientSet& c);

/// Reads (a, b, f) back from a triple relative to an adapted basis of m given
/// by z-, W- and z*-vectors (m-coordinates).
CoefficientSet extract_coefficients(const SymmetricTriple& t, const std::vector<Vector>& z_basis,
                                    const std::vector<Vector>& w_basis,
                                    const std::vector<Vector>& zstar_basis);

}  // namespace triplekit

#endif
