#ifndef TRIPLEKIT_NORMAL_FORMS_HPP
#define TRIPLEKIT_NORMAL_FORMS_HPP

#include <optional>

#include "triplekit/coeffs.hpp"

namespace triplekit {

enum class Family { Lorentz, LeastNilpotentPQ, Ia, Ib, IIa, IIb, Nil22, Nil23, Nil24, III, IV };

/// Cahen-Wallach family: n-dimensional Lorentzian triple with parameters
/// f^alpha != 0; n = f.size() + 2. The empty list yields the flat
/// 2-dimensional pseudo-Euclidean triple (decomposable).
SymmetricTriple build_lorentz(const std::vector<Rational>& f);

/// Least nilpotent triple of signature (p, q) from an algebraic curvature
/// tensor b on z* (p^4 entries, index order (i,j,k,l)), signs epsilon and
/// nonzero vectors Lambda_alpha in z; q = p + epsilon.size().
SymmetricTriple build_least_nilpotent_pq(std::size_t p, const std::vector<Rational>& b_coeffs,
                                         const std::vector<int>& epsilon,
                                         const std::vector<Vector>& lambda);

SymmetricTriple build_Ia(int eps_y, std::size_t r, const std::vector<Rational>& l1,
                         const std::vector<Rational>& l2);
SymmetricTriple build_Ib(std::size_t r, const std::vector<Rational>& l1,
                         const std::vector<Rational>& l2);
SymmetricTriple build_IIa(std::size_t r, const std::vector<Rational>& l1,
                          const std::vector<Rational>& l2);
SymmetricTriple build_IIb(std::size_t r, const std::vector<Rational>& l1,
                          const std::vector<Rational>& l2);
SymmetricTriple build_nil22(int eps_y);
SymmetricTriple build_nil23();
SymmetricTriple build_nil24();

/// The 2x2 block of the one-dimensional-center normal form with
/// [h, z-perp] contained in z. The four admissible (g, Phi) pairs, or None
/// for the purely diagonal form (W-Gram diag(-1, 1, ..., 1)).
struct IIIBlock {
  enum class Kind { None, DiagEqual, JordanPlus, JordanMinus, Rotation } kind = Kind::None;
  Rational phi1, phi2;  // DiagEqual/Jordan use phi1; Rotation uses both
};

SymmetricTriple build_III(const IIIBlock& block, const std::vector<Rational>& f);

/// One-dimensional center with [h, z-perp] not contained in z; the two
/// admissible parameter cases are (b = 0, |a| = 1) and (b = 1, a = f_1).
SymmetricTriple build_IV(const Rational& a, const Rational& b, const std::vector<Rational>& f);

}  // namespace triplekit

#endif
