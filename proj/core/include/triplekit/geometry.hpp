#ifndef TRIPLEKIT_GEOMETRY_HPP
#define TRIPLEKIT_GEOMETRY_HPP

#include <optional>

#include "triplekit/matrix.hpp"

namespace triplekit {

/// Coordinates on g_f = X + W + z + z* for the Lorentzian group realization.
/// The z*-coordinate is zstar + zstar_half_periods * (lambda/2); the integer
/// part is only meaningful in the lattice case.
struct GroupElement {
  Vector x, w;
  Rational z, zstar;
  long zstar_half_periods = 0;
};

struct GroupElementF {
  std::vector<double> x, w;
  double z = 0, zstar = 0;
};

struct CenterDescription {
  enum class Kind { ZOnly, ZTimesLattice } kind = Kind::ZOnly;
  /// lambda = lambda_coeff * 2 pi / sqrt(-f^1) in the lattice case.
  Rational lambda_coeff;
  double lambda_float = 0.0;
  std::vector<long> m;  // m_alpha = lambda sqrt(-f^alpha) / (2 pi)
};

/// Z_only unless every f^alpha < 0 and all ratios f^alpha/f^beta are rational
/// squares; then the center picks up the lattice lambda Z Z*.
CenterDescription center_of_transvection_group(const std::vector<Rational>& f);

/// Exact group product. The twist exp(-ad zbar*) is evaluated exactly when
/// the right factor has rational z*-part zero (half-period multiples act as
/// signs in the lattice case); otherwise throws, use the floating path.
GroupElement group_multiply(const GroupElement& a, const GroupElement& b,
                            const std::vector<Rational>& f);

/// Inverse of an element of the nilpotent part (zstar = 0).
GroupElement group_inverse_nilpart(const GroupElement& a, const std::vector<Rational>& f);

GroupElementF to_float(const GroupElement& a, const std::vector<Rational>& f);
GroupElementF group_multiply_float(const GroupElementF& a, const GroupElementF& b,
                                   const std::vector<Rational>& f);

/// Gram matrix of g_f at the point (w, z, z*) in the coordinates
/// (w_1..w_s, z, z*): identity on w, dz dz* pairing, and
/// -2 sum f^alpha w_alpha^2 at (z*, z*).
Matrix metric_at(const Vector& w, const std::vector<Rational>& f);

/// The extra central isometry of the lattice case: flips w_alpha by
/// (-1)^{m_alpha} and shifts z* by lambda/2. phi^2 is the lattice shift.
struct PhiIsometry {
  std::vector<int> w_signs;
  long shift_half_periods = 1;  // z* shift in units of lambda/2
  double shift_float = 0.0;
};
PhiIsometry special_isometry_phi(const std::vector<Rational>& f);

GroupElement apply_phi(const PhiIsometry& phi, const GroupElement& g);

}  // namespace triplekit

#endif
