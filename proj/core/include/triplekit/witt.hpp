#ifndef TRIPLEKIT_WITT_HPP
#define TRIPLEKIT_WITT_HPP

#include <array>

#include "triplekit/triple.hpp"

namespace triplekit {

/// Decomposition V = E + W + U + E* adapted to a subspace F and the form B:
/// E = F cap F-perp, E + W = F, E + U = F-perp, U perp W,
/// (E + E*) perp (U + W), E and E* totally isotropic and singularly paired.
struct AdaptedDecomposition {
  Subspace E, W, U, Estar;
};

AdaptedDecomposition adapted_decompose(const BilinearForm& b, const Subspace& f);

/// Checks every condition of the generalized Witt decomposition exactly.
bool adapted_conditions_hold(const AdaptedDecomposition& d, const BilinearForm& b,
                             const Subspace& f);

/// Ordered basis (E, W, U, E*) with E* dualized against E and W, U made
/// B-orthogonal with diagonal entries scaled to +-1 where the norm is a
/// rational square. Non-square norms are kept and reported.
struct AdaptedBasis {
  std::vector<Vector> e, w, u, estar;
  Matrix gram;                        // w.r.t. the concatenated basis
  std::vector<Rational> w_norms, u_norms;
  std::vector<Rational> nonsquare_norms;  // empty when fully normalized
  Matrix basis_matrix(std::size_t ambient) const;
};

AdaptedBasis adapted_basis(const AdaptedDecomposition& d, const BilinearForm& b);

struct IteratedLevel {
  Subspace E, W, U, Estar;  // all in m-coordinates
};

/// Complete iterated adapted decomposition of a solvable triple,
/// F_{i+1} = pr_{W_i}[h, W_i] at each level, run until the projection dies.
struct IteratedDecomposition {
  std::vector<IteratedLevel> levels;
  Subspace w_final{0};
  std::vector<std::array<std::size_t, 3>> dims() const;  // (dim E_i, dim W_i, dim U_i)
  /// Ordered m-basis (E_0..E_n, W_n, U_1..U_n, E*_n..E*_0) with level-wise
  /// dual pairing.
  AdaptedBasis chain_basis(const BilinearForm& bm) const;
};

IteratedDecomposition iterate_decompose(const SymmetricTriple& t);

/// ad(h)|_m matrices in the chain basis, plus the structural pattern checks
/// (strict block upper triangularity, skewness of the E*-block pairing).
struct TriangularForm {
  std::vector<Matrix> ad_matrices;  // one per h-basis element
  bool pattern_ok = false;
};

TriangularForm triangular_form(const SymmetricTriple& t, const IteratedDecomposition& iter);

/// Elements of Gamma = stab(F) cap O(m, B) as exact matrices on m.
class GammaElement {
 public:
  /// rho_W graph move: w -> w + L(w) with L given over the adapted basis
  /// (rows: E-basis, cols: W-basis), extended isometrically to E*.
  static GammaElement rho_w(const AdaptedBasis& ab, std::size_t ambient, const Matrix& l);
  static GammaElement rho_u(const AdaptedBasis& ab, std::size_t ambient, const Matrix& l);
  /// rho_{E*} move from a skew matrix S: e*_i -> e*_i + sum_k S_{ki} e_k.
  static GammaElement rho_skew(const AdaptedBasis& ab, std::size_t ambient, const Matrix& s);
  /// Block basis change (P_E, P_W, P_U) with the dual change on E*.
  /// P_W, P_U must preserve the diagonal W/U Gram blocks.
  static GammaElement basis_change(const AdaptedBasis& ab, std::size_t ambient, const Matrix& p_e,
                                   const Matrix& p_w, const Matrix& p_u);

  const Matrix& matrix() const { return q_; }

  /// Validates Q^T G Q = G and Q(F) = F.
  bool is_isometry_stabilizing(const BilinearForm& b, const Subspace& f) const;

 private:
  explicit GammaElement(Matrix q) : q_(std::move(q)) {}
  Matrix q_;
};

/// exp(ad h|_m) for h in the holonomy algebra of a solvable triple; the
/// series is finite because ad(h)|_m is nilpotent (throws otherwise).
Matrix exp_ad_m(const SymmetricTriple& t, const Vector& h_vec);

}  // namespace triplekit

#endif
