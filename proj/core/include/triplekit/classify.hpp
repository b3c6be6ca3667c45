#ifndef TRIPLEKIT_CLASSIFY_HPP
#define TRIPLEKIT_CLASSIFY_HPP

#include <optional>
#include <variant>

#include "triplekit/coeffs.hpp"
#include "triplekit/normal_forms.hpp"
#include "triplekit/quadext.hpp"
#include "triplekit/witt.hpp"

namespace triplekit {

struct IrrationalSpectrumError : std::domain_error {
  using std::domain_error::domain_error;
};
struct NonCommutingError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Adapted (z, W, z*) basis of a maximal-center triple in m-coordinates.
struct MaxCenterBasis {
  std::vector<Vector> z, w, zstar;
};

/// First adapted decomposition of a solvable maximal-center triple; throws
/// when the center is not maximal totally isotropic.
MaxCenterBasis max_center_basis(const SymmetricTriple& t);

/// F_ij = pr_W o ad(Z_i*) o ad(Z_j*)|_W as matrices over the W-basis, indexed
/// i*p + j. With the bracket-table conventions the matrix of F_ij is the
/// slice f_{ij..}, so F_ij(w) is evaluated as pr_W [[Z_j*, w], Z_i*].
std::vector<Matrix> fij_operators(const SymmetricTriple& t, const MaxCenterBasis& basis);

struct SpectralRecord {
  Vector w_vector;   // common eigenvector in W-coordinates
  Matrix fvals;      // p x p matrix of the eigenvalues f_{ij}^alpha
  int epsilon;       // common sign of the nonzero diagonal; 0 on W_nil
  Vector lambda_sq;  // eps * f_ii, i.e. (lambda_i^alpha)^2
  std::optional<Rational> lambda_ratio;  // lambda_2/lambda_1 when p = 2 and defined
};

struct SpectralData {
  std::size_t p = 0;
  std::vector<SpectralRecord> records;
};

/// Exact simultaneous diagonalization of the commuting selfadjoint family by
/// rational characteristic-root extraction. Throws IrrationalSpectrumError /
/// NonCommutingError.
SpectralData simultaneous_diagonalize(const std::vector<Matrix>& fs, const Matrix& gram_w,
                                      std::size_t p);

/// Floating fallback (opt-in): Jacobi rotations at the given tolerance;
/// results carry the non-exact flag.
struct ApproxSpectralData {
  bool exact = false;
  double tol = 1e-9;
  std::size_t p = 0;
  std::vector<std::vector<double>> fvals;  // per alpha: p*p row-major values
};
ApproxSpectralData simultaneous_diagonalize_float(const std::vector<Matrix>& fs,
                                                  const Matrix& gram_w, std::size_t p, double tol);

/// Indices of the spectral records with all f_{ij} = 0 (W_nil) and the rest.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_w(const SpectralData& sd);

/// Adapted decomposition move that kills a_{ijk alpha} on I_reg: extracts the
/// mu-parameters from the structural form of a and applies the Gamma_decomp
/// element with L_{i alpha} = a_{n i n alpha} / f^alpha_{nn}. Throws if a on
/// I_reg does not have the structural form.
struct SplitResult {
  MaxCenterBasis basis;
  Matrix gamma;  // the Gamma_decomp element on m
};
SplitResult splitting_transform(const SymmetricTriple& t, const MaxCenterBasis& basis);

/// Explicit family-level isomorphism witness. The m-side base change is
/// witness_rat + witness_irr * sqrt(radicand), rational when radicand is 1.
struct IsomorphismCertificate {
  std::vector<std::size_t> permutation;  // alpha -> Pi(alpha) on W-indices
  std::vector<int> signs;                // per alpha
  Matrix z_change;                       // base change on z* (p x p, rational part)
  Rational radicand = Rational(1);       // sqrt-scaling radicand (1 = rational witness)
  Matrix witness_rat, witness_irr;       // full base change on m
};

struct IsoDecision {
  enum class Verdict { Isomorphic, NotIsomorphic, Unknown } verdict =
      Verdict::Unknown;
  std::optional<IsomorphismCertificate> certificate;
  std::string detail;
};

/// Exact transport check: the witness maps t1's full structure (brackets and
/// form, grading preserved) onto t2's.
bool verify_certificate(const SymmetricTriple& t1, const SymmetricTriple& t2,
                        const IsomorphismCertificate& cert);

IsoDecision lorentz_isomorphic(const std::vector<Rational>& f,
                               const std::vector<Rational>& f_tilde);

struct LorentzParams {
  std::vector<Rational> f;
};
struct IaParams {
  int eps_y = 1;
  std::size_t r = 0;
  std::vector<Rational> l1, l2;
};
struct IbParams {
  std::size_t r = 0;
  std::vector<Rational> l1, l2;
};
struct IIaParams {
  std::size_t r = 0;
  std::vector<Rational> l1, l2;
};
struct IIbParams {
  std::size_t r = 0;
  std::vector<Rational> l1, l2;
};
struct Nil22Params {
  int eps_y = 1;
};
struct Nil23Params {};
struct Nil24Params {};
struct IIIParams {
  IIIBlock block;
  std::vector<Rational> f;
};
struct IVParams {
  Rational a, b;
  std::vector<Rational> f;
};
/// Least nilpotent family data: p, the curvature coefficients b (p^4 flat,
/// index order (i,j,k,l)), signs epsilon and the nonzero Lambda vectors.
struct LeastNilpotentParams {
  std::size_t p = 1;
  std::vector<Rational> b;
  std::vector<int> epsilon;
  std::vector<Vector> lambda;
};
using FamilyParams =
    std::variant<LorentzParams, IaParams, IbParams, IIaParams, IIbParams, Nil22Params,
                 Nil23Params, Nil24Params, IIIParams, IVParams, LeastNilpotentParams>;

SymmetricTriple build_family(const FamilyParams& params);
IsoDecision family_isomorphic(const FamilyParams& a, const FamilyParams& b);

/// V_lambda = sum_{a,b} (l1^a l2^b - l2^a l1^b)^2.
Rational v_lambda(const std::vector<Rational>& l1, const std::vector<Rational>& l2);
/// Same invariant computed from the rational f-data alone (p = 2), via
/// lambda_i lambda_j = eps f_ij.
Rational v_lambda_from_f(const SpectralData& sd);

/// Sufficient indecomposability criteria: 1-dimensional center of a solvable
/// triple, or the least-nilpotent dim(Y) bound. nullopt when none fires.
std::optional<std::string> indecomposable_sufficient(const SymmetricTriple& t);

}  // namespace triplekit

#endif
