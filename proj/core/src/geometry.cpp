#include "triplekit/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace triplekit {

namespace {

void check_f(const std::vector<Rational>& f) {
  for (std::size_t al = 0; al < f.size(); ++al)
    if (f[al].is_zero())
      throw std::invalid_argument("geometry: f^" + std::to_string(al + 1) + " = 0");
}

void check_dims(const GroupElement& g, std::size_t s) {
  if (g.x.size() != s || g.w.size() != s)
    throw std::invalid_argument("geometry: component dimensions do not match f");
}

}  // namespace

CenterDescription center_of_transvection_group(const std::vector<Rational>& f) {
  check_f(f);
  CenterDescription out;
  for (const auto& v : f)
    if (v.sign() > 0) return out;  // Z_only
  // All f^alpha < 0; ratios f^alpha / f^1 must be rational squares.
  std::vector<Rational> ratio_roots;  // r_alpha = sqrt(f^alpha / f^1)
  for (const auto& v : f) {
    auto root = (v / f[0]).sqrt_exact();
    if (!root) return out;  // incommensurable frequencies
    ratio_roots.push_back(*root);
  }
  // lambda = c 2pi / sqrt(-f^1) with c the reciprocal of the rational gcd of
  // the ratios r_alpha (r_1 = 1 included).
  Rational g;
  for (const auto& r : ratio_roots) g = rational_gcd(g, r);
  out.kind = CenterDescription::Kind::ZTimesLattice;
  out.lambda_coeff = g.inverse();
  out.lambda_float = out.lambda_coeff.to_double() * 2.0 * M_PI / std::sqrt(-f[0].to_double());
  for (const auto& r : ratio_roots) {
    Rational m = out.lambda_coeff * r;
    if (!m.is_integer()) throw std::logic_error("center_of_transvection_group: m not integral");
    out.m.push_back(m.num().get_si());
  }
  return out;
}

GroupElement group_multiply(const GroupElement& a, const GroupElement& b,
                            const std::vector<Rational>& f) {
  check_f(f);
  std::size_t s = f.size();
  check_dims(a, s);
  check_dims(b, s);
  if (!b.zstar.is_zero())
    throw std::domain_error(
        "group_multiply: exact path needs the right factor's rational z*-part zero "
        "(use the floating path)");
  // Twist by exp(-ad zbar*): identity when zbar* = 0; sign flips per plane at
  // half-period multiples of the lattice.
  std::vector<Rational> sigma(s, Rational(1));
  if (b.zstar_half_periods != 0) {
    CenterDescription cd = center_of_transvection_group(f);
    if (cd.kind != CenterDescription::Kind::ZTimesLattice)
      throw std::domain_error("group_multiply: half-period coordinates need the lattice case");
    for (std::size_t al = 0; al < s; ++al)
      if ((b.zstar_half_periods * cd.m[al]) % 2 != 0) sigma[al] = Rational(-1);
  }
  GroupElement out;
  out.x.resize(s);
  out.w.resize(s);
  for (std::size_t al = 0; al < s; ++al) {
    out.x[al] = sigma[al] * a.x[al] + b.x[al];
    out.w[al] = sigma[al] * a.w[al] + b.w[al];
  }
  // z' = z + zbar + 1/2 [e(x + w), xbar + wbar] with
  // [X_a, W_b] = -delta f^a Z.
  Rational zc = a.z + b.z;
  Rational half(1, 2);
  for (std::size_t al = 0; al < s; ++al)
    zc += half * f[al] * (b.x[al] * sigma[al] * a.w[al] - sigma[al] * a.x[al] * b.w[al]);
  out.z = zc;
  out.zstar = a.zstar + b.zstar;
  out.zstar_half_periods = a.zstar_half_periods + b.zstar_half_periods;
  return out;
}

GroupElement group_inverse_nilpart(const GroupElement& a, const std::vector<Rational>& f) {
  check_f(f);
  check_dims(a, f.size());
  if (!a.zstar.is_zero() || a.zstar_half_periods != 0)
    throw std::domain_error("group_inverse_nilpart: element must have z* = 0");
  GroupElement out;
  out.x.resize(f.size());
  out.w.resize(f.size());
  for (std::size_t al = 0; al < f.size(); ++al) {
    out.x[al] = -a.x[al];
    out.w[al] = -a.w[al];
  }
  out.z = -a.z;
  out.zstar = Rational(0);
  return out;
}

GroupElementF to_float(const GroupElement& a, const std::vector<Rational>& f) {
  GroupElementF out;
  for (const auto& v : a.x) out.x.push_back(v.to_double());
  for (const auto& v : a.w) out.w.push_back(v.to_double());
  out.z = a.z.to_double();
  out.zstar = a.zstar.to_double();
  if (a.zstar_half_periods != 0) {
    CenterDescription cd = center_of_transvection_group(f);
    if (cd.kind != CenterDescription::Kind::ZTimesLattice)
      throw std::domain_error("to_float: half-period coordinates need the lattice case");
    out.zstar += 0.5 * cd.lambda_float * static_cast<double>(a.zstar_half_periods);
  }
  return out;
}

GroupElementF group_multiply_float(const GroupElementF& a, const GroupElementF& b,
                                   const std::vector<Rational>& f) {
  std::size_t s = f.size();
  GroupElementF out;
  out.x.resize(s);
  out.w.resize(s);
  // exp(-t N) on the (x, w)-plane with N(x, w) = (f w, x): rotation with
  // frequency sqrt(-f) when f < 0, hyperbolic otherwise.
  double t = b.zstar;
  std::vector<double> ex(s), ew(s);
  for (std::size_t al = 0; al < s; ++al) {
    double fv = f[al].to_double();
    double c, sfac;  // exp(-tN) = c I - sfac N, N(x, w) = (f w, x)
    if (fv < 0) {
      double om = std::sqrt(-fv);
      c = std::cos(om * t);
      sfac = std::sin(om * t) / om;
    } else {
      double om = std::sqrt(fv);
      c = std::cosh(om * t);
      sfac = std::sinh(om * t) / om;
    }
    ex[al] = c * a.x[al] - sfac * fv * a.w[al];
    ew[al] = -sfac * a.x[al] + c * a.w[al];
  }
  double zc = a.z + b.z;
  for (std::size_t al = 0; al < s; ++al) {
    double fv = f[al].to_double();
    zc += 0.5 * fv * (b.x[al] * ew[al] - ex[al] * b.w[al]);
    out.x[al] = ex[al] + b.x[al];
    out.w[al] = ew[al] + b.w[al];
  }
  out.z = zc;
  out.zstar = a.zstar + b.zstar;
  return out;
}

Matrix metric_at(const Vector& w, const std::vector<Rational>& f) {
  if (w.size() != f.size()) throw std::invalid_argument("metric_at: dimension mismatch");
  std::size_t s = f.size();
  Matrix g(s + 2, s + 2);
  for (std::size_t al = 0; al < s; ++al) g(al, al) = Rational(1);
  g(s, s + 1) = g(s + 1, s) = Rational(1);  // 2 dz* dz
  Rational acc;
  for (std::size_t al = 0; al < s; ++al) acc += f[al] * w[al] * w[al];
  g(s + 1, s + 1) = Rational(-2) * acc;
  return g;
}

PhiIsometry special_isometry_phi(const std::vector<Rational>& f) {
  CenterDescription cd = center_of_transvection_group(f);
  if (cd.kind != CenterDescription::Kind::ZTimesLattice)
    throw std::domain_error("special_isometry_phi: center is Z_only");
  PhiIsometry phi;
  for (auto m : cd.m) phi.w_signs.push_back(m % 2 == 0 ? 1 : -1);
  phi.shift_half_periods = 1;
  phi.shift_float = 0.5 * cd.lambda_float;
  // phi^2 flips nothing and shifts by lambda.
  for (auto sgn : phi.w_signs)
    if (sgn * sgn != 1) throw std::logic_error("special_isometry_phi: bad sign pattern");
  return phi;
}

GroupElement apply_phi(const PhiIsometry& phi, const GroupElement& g) {
  if (g.w.size() != phi.w_signs.size())
    throw std::invalid_argument("apply_phi: dimension mismatch");
  GroupElement out = g;
  for (std::size_t al = 0; al < g.w.size(); ++al)
    out.w[al] = Rational(phi.w_signs[al]) * g.w[al];
  out.zstar_half_periods += phi.shift_half_periods;
  return out;
}

}  // namespace triplekit
