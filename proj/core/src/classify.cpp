#include "triplekit/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "triplekit/poly.hpp"

namespace triplekit {

namespace {

using QMatrix = MatT<QuadExt>;
using QVector = std::vector<QuadExt>;

QMatrix to_quad(const Matrix& m) {
  QMatrix q(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) q(i, j) = QuadExt(m(i, j));
  return q;
}

QMatrix witness_matrix(const IsomorphismCertificate& cert) {
  QMatrix q(cert.witness_rat.rows(), cert.witness_rat.cols());
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j)
      q(i, j) = QuadExt(cert.witness_rat(i, j), cert.witness_irr(i, j), cert.radicand);
  return q;
}

QVector bracket_quad(const LieAlgebra& g, const QVector& x, const QVector& y) {
  QVector r(g.dim(), QuadExt(0));
  for (std::size_t i = 0; i < g.dim(); ++i) {
    if (x[i] == QuadExt(0)) continue;
    for (std::size_t j = 0; j < g.dim(); ++j) {
      if (y[j] == QuadExt(0)) continue;
      const Vector& c = g.bracket_basis(i, j);
      QuadExt f = x[i] * y[j];
      for (std::size_t k = 0; k < g.dim(); ++k)
        if (!c[k].is_zero()) r[k] += f * QuadExt(c[k]);
    }
  }
  return r;
}

}  // namespace

MaxCenterBasis max_center_basis(const SymmetricTriple& t) {
  BilinearForm bm = t.form_on_m();
  Subspace z = t.center_in_m();
  Signature sig = signature(bm);
  std::size_t p = std::min(sig.neg, sig.pos);
  if (z.dim() != p || p == 0)
    throw std::domain_error("max_center_basis: center is not maximal");
  if (!is_totally_isotropic(z, bm))
    throw std::domain_error("max_center_basis: center not totally isotropic");

  std::vector<Vector> f_gens;
  for (std::size_t a = 0; a < t.dim_h(); ++a)
    for (std::size_t b = 0; b < t.dim_m(); ++b)
      f_gens.push_back(t.project_m(t.algebra().bracket(t.h_basis_vector(a), t.m_basis_vector(b))));
  Subspace f = Subspace::span(t.dim_m(), f_gens);
  AdaptedDecomposition d = adapted_decompose(bm, f);
  if (d.U.dim() != 0 || d.E != z)
    throw std::domain_error("max_center_basis: [h,m] is not z-perp (center not maximal)");
  AdaptedBasis ab = adapted_basis(d, bm);
  return MaxCenterBasis{ab.e, ab.w, ab.estar};
}

std::vector<Matrix> fij_operators(const SymmetricTriple& t, const MaxCenterBasis& basis) {
  std::size_t p = basis.z.size(), s = basis.w.size();
  std::vector<Vector> all = basis.z;
  all.insert(all.end(), basis.w.begin(), basis.w.end());
  all.insert(all.end(), basis.zstar.begin(), basis.zstar.end());
  Matrix change_inv = *Matrix::from_columns(t.dim_m(), all).inverse();

  BilinearForm bm = t.form_on_m();
  Matrix gram_w = bm.restrict_gram(basis.w);
  std::vector<Matrix> fs;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      Matrix fij(s, s);
      for (std::size_t al = 0; al < s; ++al) {
        Vector x = t.algebra().bracket(t.embed_m(basis.zstar[j]), t.embed_m(basis.w[al]));
        Vector v = change_inv.apply(t.project_m(t.algebra().bracket(x, t.embed_m(basis.zstar[i]))));
        for (std::size_t be = 0; be < s; ++be) fij(be, al) = v[p + be];
      }
      if (!(gram_w * fij).is_symmetric())
        throw std::domain_error("fij_operators: operator not selfadjoint");
      fs.push_back(std::move(fij));
    }
  return fs;
}

SpectralData simultaneous_diagonalize(const std::vector<Matrix>& fs, const Matrix& gram_w,
                                      std::size_t p) {
  std::size_t s = gram_w.rows();
  for (std::size_t a = 0; a < fs.size(); ++a)
    for (std::size_t b = a + 1; b < fs.size(); ++b)
      if (fs[a] * fs[b] != fs[b] * fs[a])
        throw NonCommutingError("simultaneous_diagonalize: operators do not commute");

  // Recursive common-eigenspace refinement over Q.
  std::vector<std::vector<Vector>> spaces;
  if (s > 0) {
    std::vector<Vector> full;
    for (std::size_t i = 0; i < s; ++i) {
      Vector v(s, Rational(0));
      v[i] = 1;
      full.push_back(std::move(v));
    }
    spaces.push_back(std::move(full));
  }
  for (const auto& f : fs) {
    std::vector<std::vector<Vector>> next;
    for (const auto& space : spaces) {
      Matrix bs = Matrix::from_columns(s, space);
      // Restriction R: F bs = bs R.
      Matrix r(space.size(), space.size());
      for (std::size_t c = 0; c < space.size(); ++c) {
        auto sol = bs.solve(f.apply(space[c]));
        if (!sol)
          throw NonCommutingError("simultaneous_diagonalize: subspace not invariant");
        for (std::size_t k = 0; k < space.size(); ++k) r(k, c) = (*sol)[k];
      }
      Poly chi = characteristic_polynomial(r);
      std::vector<Rational> roots = chi.rational_roots();
      std::size_t found = 0;
      std::vector<std::vector<Vector>> pieces;
      for (const auto& root : roots) {
        Matrix shifted = r;
        for (std::size_t k = 0; k < shifted.rows(); ++k) shifted(k, k) -= root;
        Matrix ker = shifted.kernel();
        if (ker.cols() == 0) continue;
        std::vector<Vector> piece;
        for (std::size_t c = 0; c < ker.cols(); ++c) {
          Vector amb(s, Rational(0));
          for (std::size_t k = 0; k < space.size(); ++k)
            amb = amb + ker(k, c) * space[k];
          piece.push_back(std::move(amb));
        }
        found += piece.size();
        pieces.push_back(std::move(piece));
      }
      if (found != space.size())
        throw IrrationalSpectrumError(
            "simultaneous_diagonalize: spectrum not rational (exact path)");
      for (auto& piece : pieces) next.push_back(std::move(piece));
    }
    spaces = std::move(next);
  }

  SpectralData sd;
  sd.p = p;
  for (const auto& space : spaces)
    for (const auto& vec : space) {
      SpectralRecord rec;
      rec.w_vector = vec;
      rec.fvals = Matrix(p, p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) {
          const Matrix& f = fs[i * p + j];
          Vector im = f.apply(vec);
          // im = mu * vec exactly.
          Rational mu;
          std::size_t nz = vec.size();
          for (std::size_t k = 0; k < vec.size(); ++k)
            if (!vec[k].is_zero()) {
              nz = k;
              break;
            }
          mu = im[nz] / vec[nz];
          if (im != mu * vec)
            throw IrrationalSpectrumError("simultaneous_diagonalize: not a common eigenvector");
          rec.fvals(i, j) = mu;
        }
      rec.epsilon = 0;
      for (std::size_t i = 0; i < p && rec.epsilon == 0; ++i)
        rec.epsilon = rec.fvals(i, i).sign();
      rec.lambda_sq = Vector(p, Rational(0));
      if (rec.epsilon != 0)
        for (std::size_t i = 0; i < p; ++i)
          rec.lambda_sq[i] = Rational(rec.epsilon) * rec.fvals(i, i);
      if (p == 2 && !rec.fvals(0, 0).is_zero())
        rec.lambda_ratio = rec.fvals(0, 1) / rec.fvals(0, 0);
      sd.records.push_back(std::move(rec));
    }
  // Regular records first, deterministic order by eigenvalue data.
  std::stable_sort(sd.records.begin(), sd.records.end(),
                   [](const SpectralRecord& a, const SpectralRecord& b) {
                     bool anil = a.epsilon == 0, bnil = b.epsilon == 0;
                     if (anil != bnil) return !anil;
                     for (std::size_t i = 0; i < a.fvals.rows(); ++i)
                       for (std::size_t j = 0; j < a.fvals.cols(); ++j) {
                         if (a.fvals(i, j) < b.fvals(i, j)) return true;
                         if (b.fvals(i, j) < a.fvals(i, j)) return false;
                       }
                     return false;
                   });
  return sd;
}

namespace {

// Plain Jacobi eigensolver for symmetric matrices (float fallback path).
void jacobi_eigen(std::vector<std::vector<double>>& a, std::vector<std::vector<double>>& v,
                  double tol) {
  std::size_t n = a.size();
  v.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (std::sqrt(off) < tol) return;
    for (std::size_t pi = 0; pi < n; ++pi)
      for (std::size_t qi = pi + 1; qi < n; ++qi) {
        if (std::abs(a[pi][qi]) < tol * 1e-3) continue;
        double theta = (a[qi][qi] - a[pi][pi]) / (2 * a[pi][qi]);
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a[k][pi], akq = a[k][qi];
          a[k][pi] = c * akp - sn * akq;
          a[k][qi] = sn * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a[pi][k], aqk = a[qi][k];
          a[pi][k] = c * apk - sn * aqk;
          a[qi][k] = sn * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v[k][pi], vkq = v[k][qi];
          v[k][pi] = c * vkp - sn * vkq;
          v[k][qi] = sn * vkp + c * vkq;
        }
      }
  }
}

}  // namespace

ApproxSpectralData simultaneous_diagonalize_float(const std::vector<Matrix>& fs,
                                                  const Matrix& gram_w, std::size_t p,
                                                  double tol) {
  ApproxSpectralData out;
  out.tol = tol;
  out.p = p;
  std::size_t s = gram_w.rows();
  if (s == 0) return out;
  // Orthonormalize W (Gram-Schmidt on the positive-definite block), then
  // diagonalize a generic combination and read the eigenvalues per operator.
  std::vector<std::vector<double>> basis(s, std::vector<double>(s, 0.0));
  for (std::size_t i = 0; i < s; ++i) basis[i][i] = 1.0;
  auto dot = [&](const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0;
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) acc += x[i] * gram_w(i, j).to_double() * y[j];
    return acc;
  };
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double c = dot(basis[i], basis[j]);
      for (std::size_t k = 0; k < s; ++k) basis[i][k] -= c * basis[j][k];
    }
    double nrm = std::sqrt(dot(basis[i], basis[i]));
    for (std::size_t k = 0; k < s; ++k) basis[i][k] /= nrm;
  }
  auto in_basis = [&](const Matrix& f) {
    // A_{ij} = B(F b_j, b_i) in the orthonormal basis.
    std::vector<std::vector<double>> a(s, std::vector<double>(s, 0.0));
    for (std::size_t j = 0; j < s; ++j) {
      std::vector<double> fb(s, 0.0);
      for (std::size_t r = 0; r < s; ++r)
        for (std::size_t k = 0; k < s; ++k) fb[r] += f(r, k).to_double() * basis[j][k];
      for (std::size_t i = 0; i < s; ++i) {
        double acc = 0;
        for (std::size_t r = 0; r < s; ++r)
          for (std::size_t k = 0; k < s; ++k) acc += fb[r] * gram_w(r, k).to_double() * basis[i][k];
        a[i][j] = acc;
      }
    }
    return a;
  };
  std::vector<std::vector<std::vector<double>>> mats;
  for (const auto& f : fs) mats.push_back(in_basis(f));
  std::vector<std::vector<double>> combo(s, std::vector<double>(s, 0.0));
  double w = 1.0;
  for (const auto& m : mats) {
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) combo[i][j] += w * m[i][j];
    w *= 2.718281828;
  }
  std::vector<std::vector<double>> evecs;
  jacobi_eigen(combo, evecs, tol);
  for (std::size_t al = 0; al < s; ++al) {
    std::vector<double> fv;
    for (const auto& m : mats) {
      double acc = 0;
      for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) acc += evecs[i][al] * m[i][j] * evecs[j][al];
      fv.push_back(acc);
    }
    out.fvals.push_back(std::move(fv));
  }
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_w(const SpectralData& sd) {
  std::vector<std::size_t> nil, reg;
  for (std::size_t al = 0; al < sd.records.size(); ++al) {
    if (sd.records[al].fvals.is_zero())
      nil.push_back(al);
    else
      reg.push_back(al);
  }
  return {nil, reg};
}

SplitResult splitting_transform(const SymmetricTriple& t, const MaxCenterBasis& basis) {
  std::size_t p = basis.z.size();
  BilinearForm bm = t.form_on_m();
  Matrix gram_w = bm.restrict_gram(basis.w);

  // Rediagonalize W so the f-tensor is diagonal in the working basis.
  std::vector<Matrix> fs = fij_operators(t, basis);
  SpectralData sd = simultaneous_diagonalize(fs, gram_w, p);
  MaxCenterBasis diag = basis;
  diag.w.clear();
  for (const auto& rec : sd.records) {
    Vector v(t.dim_m(), Rational(0));
    for (std::size_t k = 0; k < rec.w_vector.size(); ++k)
      v = v + rec.w_vector[k] * basis.w[k];
    diag.w.push_back(std::move(v));
  }
  std::size_t s = diag.w.size();

  CoefficientSet c = extract_coefficients(t, diag.z, diag.w, diag.zstar);
  Matrix l(p, s);
  for (std::size_t al = 0; al < s; ++al) {
    const SpectralRecord& rec = sd.records[al];
    if (rec.epsilon == 0) continue;  // a on I_nil is invariant; leave it alone
    std::size_t n_al = p;
    for (std::size_t i = 0; i < p; ++i)
      if (!rec.fvals(i, i).is_zero()) {
        n_al = i;
        break;
      }
    for (std::size_t i = 0; i < p; ++i)
      l(i, al) = c.a(n_al, i, n_al, al) / rec.fvals(n_al, n_al);
  }

  AdaptedBasis ab;
  ab.e = diag.z;
  ab.w = diag.w;
  ab.estar = diag.zstar;
  BilinearForm bmw = t.form_on_m();
  for (const auto& wv : diag.w) ab.w_norms.push_back(bmw.eval(wv, wv));
  ab.gram = bmw.restrict_gram([&] {
    std::vector<Vector> all = ab.e;
    all.insert(all.end(), ab.w.begin(), ab.w.end());
    all.insert(all.end(), ab.estar.begin(), ab.estar.end());
    return all;
  }());
  GammaElement rho = GammaElement::rho_w(ab, t.dim_m(), l);

  SplitResult out;
  out.gamma = rho.matrix();
  out.basis.z.reserve(p);
  for (const auto& v : diag.z) out.basis.z.push_back(out.gamma.apply(v));
  for (const auto& v : diag.w) out.basis.w.push_back(out.gamma.apply(v));
  for (const auto& v : diag.zstar) out.basis.zstar.push_back(out.gamma.apply(v));

  // Post-condition: a vanishes on I_reg, is unchanged on I_nil, f unchanged.
  CoefficientSet after = extract_coefficients(t, out.basis.z, out.basis.w, out.basis.zstar);
  for (std::size_t al = 0; al < s; ++al) {
    bool regular = sd.records[al].epsilon != 0;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = 0; k < p; ++k) {
          if (regular && !after.a(i, j, k, al).is_zero())
            throw std::domain_error(
                "splitting_transform: a-tensor on I_reg lacks the structural form");
          if (!regular && after.a(i, j, k, al) != c.a(i, j, k, al))
            throw std::logic_error("splitting_transform: invariant a-coefficients moved");
        }
        for (std::size_t be = 0; be < s; ++be)
          if (after.f(i, j, al, be) != c.f(i, j, al, be))
            throw std::logic_error("splitting_transform: f-coefficients moved");
      }
  }
  return out;
}

bool verify_certificate(const SymmetricTriple& t1, const SymmetricTriple& t2,
                        const IsomorphismCertificate& cert) {
  if (t1.dim_m() != t2.dim_m() || t1.dim_h() != t2.dim_h()) return false;
  std::size_t dm = t1.dim_m(), dh = t1.dim_h();
  QMatrix q = witness_matrix(cert);
  if (q.rows() != dm || q.cols() != dm) return false;

  // Isometry: Q^T G2 Q = G1 on m.
  QMatrix g1 = to_quad(t1.form_on_m().gram()), g2 = to_quad(t2.form_on_m().gram());
  if (q.transpose() * g2 * q != g1) return false;

  auto embed_q = [&](const SymmetricTriple& t, const QVector& mv) {
    QVector g(t.dim_g(), QuadExt(0));
    for (std::size_t a = 0; a < t.dim_m(); ++a) g[t.m_indices()[a]] = mv[a];
    return g;
  };
  auto h_coords = [&](const SymmetricTriple& t, const QVector& gv) {
    QVector h(t.dim_h(), QuadExt(0));
    for (std::size_t a = 0; a < t.dim_h(); ++a) h[a] = gv[t.h_indices()[a]];
    for (std::size_t a = 0; a < t.dim_m(); ++a)
      if (!(gv[t.m_indices()[a]] == QuadExt(0))) throw std::logic_error("witness: m leak");
    return h;
  };
  auto m_coords = [&](const SymmetricTriple& t, const QVector& gv) {
    QVector m(t.dim_m(), QuadExt(0));
    for (std::size_t a = 0; a < t.dim_m(); ++a) m[a] = gv[t.m_indices()[a]];
    for (std::size_t a = 0; a < t.dim_h(); ++a)
      if (!(gv[t.h_indices()[a]] == QuadExt(0))) return std::optional<QVector>{};
    return std::optional<QVector>{std::move(m)};
  };

  // Determine phi on h from the [m,m] brackets.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < dm; ++a)
    for (std::size_t b = a + 1; b < dm; ++b) pairs.push_back({a, b});
  Matrix r(dh, pairs.size());
  QMatrix lmat(dh, pairs.size());
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    auto [a, b] = pairs[c];
    Vector br1 = t1.algebra().bracket_basis(t1.m_indices()[a], t1.m_indices()[b]);
    for (std::size_t k = 0; k < dh; ++k) r(k, c) = br1[t1.h_indices()[k]];
    QVector qa(dm, QuadExt(0)), qb(dm, QuadExt(0));
    for (std::size_t i = 0; i < dm; ++i) {
      qa[i] = q(i, a);
      qb[i] = q(i, b);
    }
    QVector br2 = bracket_quad(t2.algebra(), embed_q(t2, qa), embed_q(t2, qb));
    QVector h2;
    try {
      h2 = h_coords(t2, br2);
    } catch (const std::logic_error&) {
      return false;
    }
    for (std::size_t k = 0; k < dh; ++k) lmat(k, c) = h2[k];
  }
  // Solve phi R = L using a full-rank pivot set of R.
  Matrix rr = r;
  std::vector<std::size_t> piv = rr.reduce_to_rref();
  if (piv.size() != dh) return false;  // h1 not spanned by [m,m]
  Matrix rp(dh, dh);
  QMatrix lp(dh, dh);
  for (std::size_t c = 0; c < dh; ++c)
    for (std::size_t k = 0; k < dh; ++k) {
      rp(k, c) = r(k, piv[c]);
      lp(k, c) = lmat(k, piv[c]);
    }
  QMatrix phi = lp * to_quad(*rp.inverse());
  if (phi * to_quad(r) != lmat) return false;

  // [phi h, Q m] = Q [h, m].
  for (std::size_t a = 0; a < dh; ++a) {
    QVector phia(dh, QuadExt(0));
    for (std::size_t k = 0; k < dh; ++k) phia[k] = phi(k, a);
    QVector phia_g(t2.dim_g(), QuadExt(0));
    for (std::size_t k = 0; k < dh; ++k) phia_g[t2.h_indices()[k]] = phia[k];
    for (std::size_t b = 0; b < dm; ++b) {
      QVector qb(dm, QuadExt(0));
      for (std::size_t i = 0; i < dm; ++i) qb[i] = q(i, b);
      QVector lhs_g = bracket_quad(t2.algebra(), phia_g, embed_q(t2, qb));
      auto lhs = m_coords(t2, lhs_g);
      if (!lhs) return false;
      Vector br1 = t1.project_m(
          t1.algebra().bracket(t1.h_basis_vector(a), t1.m_basis_vector(b)));
      QVector rhs(dm, QuadExt(0));
      for (std::size_t i = 0; i < dm; ++i)
        for (std::size_t k = 0; k < dm; ++k)
          if (!br1[k].is_zero()) rhs[i] += q(i, k) * QuadExt(br1[k]);
      if (*lhs != rhs) return false;
    }
  }

  // [phi h, phi h'] = phi [h, h'] and B2(phi h, phi h') = B1(h, h').
  Matrix gh1 = t1.form_on_h().gram(), gh2 = t2.form_on_h().gram();
  for (std::size_t a = 0; a < dh; ++a)
    for (std::size_t b = 0; b < dh; ++b) {
      QVector pa(t2.dim_g(), QuadExt(0)), pb(t2.dim_g(), QuadExt(0));
      for (std::size_t k = 0; k < dh; ++k) {
        pa[t2.h_indices()[k]] = phi(k, a);
        pb[t2.h_indices()[k]] = phi(k, b);
      }
      QVector lhs = bracket_quad(t2.algebra(), pa, pb);
      Vector br1 = t1.algebra().bracket_basis(t1.h_indices()[a], t1.h_indices()[b]);
      QVector rhs(t2.dim_g(), QuadExt(0));
      for (std::size_t k = 0; k < dh; ++k) {
        if (br1[t1.h_indices()[k]].is_zero()) continue;
        QuadExt f(br1[t1.h_indices()[k]]);
        for (std::size_t i = 0; i < dh; ++i) rhs[t2.h_indices()[i]] += phi(i, k) * f;
      }
      if (lhs != rhs) return false;
      QuadExt metric(0);
      for (std::size_t i = 0; i < dh; ++i)
        for (std::size_t j = 0; j < dh; ++j) metric += phi(i, a) * QuadExt(gh2(i, j)) * phi(j, b);
      if (metric != QuadExt(gh1(a, b))) return false;
    }
  return true;
}

namespace {

// Enumerates the group S_r x S_{s-r} x {+-1}^s; calls fn(perm, signs) and
// stops early when fn returns true.
bool for_each_signed_perm(std::size_t r, std::size_t s,
                          const std::function<bool(const std::vector<std::size_t>&,
                                                   const std::vector<int>&)>& fn) {
  std::vector<std::size_t> p1, p2;
  for (std::size_t i = 0; i < r; ++i) p1.push_back(i);
  for (std::size_t i = r; i < s; ++i) p2.push_back(i);
  std::vector<std::size_t> perm(s);
  do {
    do {
      for (std::size_t i = 0; i < r; ++i) perm[i] = p1[i];
      for (std::size_t i = r; i < s; ++i) perm[i] = p2[i - r];
      for (std::size_t mask = 0; mask < (std::size_t{1} << s); ++mask) {
        std::vector<int> signs(s, 1);
        for (std::size_t i = 0; i < s; ++i)
          if (mask & (std::size_t{1} << i)) signs[i] = -1;
        if (fn(perm, signs)) return true;
      }
    } while (std::next_permutation(p2.begin(), p2.end()));
  } while (std::next_permutation(p1.begin(), p1.end()));
  return false;
}

}  // namespace

Rational v_lambda(const std::vector<Rational>& l1, const std::vector<Rational>& l2) {
  Rational v;
  for (std::size_t al = 0; al < l1.size(); ++al)
    for (std::size_t be = 0; be < l1.size(); ++be) {
      Rational w = l1[al] * l2[be] - l2[al] * l1[be];
      v += w * w;
    }
  return v;
}

Rational v_lambda_from_f(const SpectralData& sd) {
  if (sd.p != 2) throw std::invalid_argument("v_lambda_from_f: p = 2 required");
  Rational v;
  for (const auto& ra : sd.records)
    for (const auto& rb : sd.records) {
      Rational ea(ra.epsilon), eb(rb.epsilon);
      v += ea * eb *
           (ra.fvals(0, 0) * rb.fvals(1, 1) - Rational(2) * ra.fvals(0, 1) * rb.fvals(0, 1) +
            ra.fvals(1, 1) * rb.fvals(0, 0));
    }
  return v;
}

IsoDecision lorentz_isomorphic(const std::vector<Rational>& f,
                               const std::vector<Rational>& f_tilde) {
  if (f.size() != f_tilde.size())
    throw std::invalid_argument("lorentz_isomorphic: length mismatch");
  std::size_t s = f.size();
  IsoDecision dec;
  auto build_certificate = [&](const Rational& c, const std::vector<std::size_t>& perm) {
    IsomorphismCertificate cert;
    cert.permutation = perm;
    cert.signs.assign(s, 1);
    cert.z_change = Matrix{{c}};
    cert.radicand = c;
    std::size_t dm = s + 2;
    cert.witness_rat = Matrix(dm, dm);
    cert.witness_irr = Matrix(dm, dm);
    // m-basis order (Z, W_1..W_s, Z*): the scaling gamma on Z must satisfy
    // gamma^2 = f_target/f_source = 1/c, so Z -> sqrt(1/c) Z = (1/c) sqrt(c) Z
    // and Z* -> sqrt(c) Z*.
    cert.witness_irr(0, 0) = c.inverse();
    for (std::size_t al = 0; al < s; ++al) cert.witness_rat(1 + perm[al], 1 + al) = Rational(1);
    cert.witness_irr(dm - 1, dm - 1) = Rational(1);
    return cert;
  };
  if (s == 0) {
    dec.verdict = IsoDecision::Verdict::Isomorphic;
    dec.certificate = build_certificate(Rational(1), {});
    return dec;
  }
  std::vector<Rational> candidates;
  for (std::size_t be = 0; be < s; ++be) {
    Rational c = f[0] / f_tilde[be];
    if (c.sign() > 0) candidates.push_back(c);
  }
  for (const auto& c : candidates) {
    // f^alpha = c * f~^{Pi(alpha)}: greedy multiset matching.
    std::vector<bool> used(s, false);
    std::vector<std::size_t> perm(s, s);
    bool ok = true;
    for (std::size_t al = 0; al < s && ok; ++al) {
      ok = false;
      for (std::size_t be = 0; be < s; ++be)
        if (!used[be] && f[al] == c * f_tilde[be]) {
          used[be] = true;
          perm[al] = be;
          ok = true;
          break;
        }
    }
    if (!ok) continue;
    dec.verdict = IsoDecision::Verdict::Isomorphic;
    dec.certificate = build_certificate(c, perm);
    dec.detail = "f = c f~ o Pi with c = " + c.str();
    return dec;
  }
  dec.verdict = IsoDecision::Verdict::NotIsomorphic;
  dec.detail = "no positive scaling matches the f-multisets";
  return dec;
}

SymmetricTriple build_family(const FamilyParams& params) {
  return std::visit(
      [](const auto& p) -> SymmetricTriple {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LorentzParams>) return build_lorentz(p.f);
        if constexpr (std::is_same_v<T, IaParams>) return build_Ia(p.eps_y, p.r, p.l1, p.l2);
        if constexpr (std::is_same_v<T, IbParams>) return build_Ib(p.r, p.l1, p.l2);
        if constexpr (std::is_same_v<T, IIaParams>) return build_IIa(p.r, p.l1, p.l2);
        if constexpr (std::is_same_v<T, IIbParams>) return build_IIb(p.r, p.l1, p.l2);
        if constexpr (std::is_same_v<T, Nil22Params>) return build_nil22(p.eps_y);
        if constexpr (std::is_same_v<T, Nil23Params>) return build_nil23();
        if constexpr (std::is_same_v<T, Nil24Params>) return build_nil24();
        if constexpr (std::is_same_v<T, IIIParams>) return build_III(p.block, p.f);
        if constexpr (std::is_same_v<T, IVParams>) return build_IV(p.a, p.b, p.f);
        if constexpr (std::is_same_v<T, LeastNilpotentParams>)
          return build_least_nilpotent_pq(p.p, p.b, p.epsilon, p.lambda);
      },
      params);
}

namespace {

// Witness assembly for the (2, n-2) maximal-center families over the m-basis
// (Z_1, Z_2, W_reg..., slots..., Z*_1, Z*_2): S acts on z* (possibly with a
// sqrt factor), (S^-1)^T on z, signed permutation on the regular W-block and
// identity on the nilpotent slots.
IsomorphismCertificate p2_witness(std::size_t sreg, std::size_t slots,
                                  const std::vector<std::size_t>& perm,
                                  const std::vector<int>& signs, const Matrix& s_rat,
                                  const Matrix& s_irr, const Rational& radicand) {
  IsomorphismCertificate cert;
  cert.permutation = perm;
  cert.signs = signs;
  cert.z_change = s_rat;
  cert.radicand = radicand;
  std::size_t dm = 2 * 2 + sreg + slots;
  QMatrix s(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      s(i, j) = QuadExt(s_rat(i, j), s_irr(i, j), radicand);
  // S is the parameter transform (new adapted basis of the source); the
  // isomorphism carries that basis to the standard one of the target, so
  // the witness blocks are S^-1 on z* and S^T on z (dual pairing).
  auto sinv = s.inverse();
  if (!sinv) throw std::logic_error("p2_witness: singular S");
  QMatrix q(dm, dm);
  std::size_t w0 = 2, zs0 = 2 + sreg + slots;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      q(i, j) = s(j, i);                    // z-block = S^T
      q(zs0 + i, zs0 + j) = (*sinv)(i, j);  // z*-block = S^-1
    }
  for (std::size_t al = 0; al < sreg; ++al)
    q(w0 + perm[al], w0 + al) = QuadExt(Rational(signs[al]));
  for (std::size_t k = 0; k < slots; ++k) q(w0 + sreg + k, w0 + sreg + k) = QuadExt(1);
  cert.witness_rat = Matrix(dm, dm);
  cert.witness_irr = Matrix(dm, dm);
  for (std::size_t i = 0; i < dm; ++i)
    for (std::size_t j = 0; j < dm; ++j) {
      cert.witness_rat(i, j) = q(i, j).rat();
      cert.witness_irr(i, j) = q(i, j).irr();
    }
  return cert;
}

Matrix lambda_matrix(const std::vector<Rational>& l1, const std::vector<Rational>& l2) {
  Matrix m(2, l1.size());
  for (std::size_t al = 0; al < l1.size(); ++al) {
    m(0, al) = l1[al];
    m(1, al) = l2[al];
  }
  return m;
}

// Applies the signed permutation to the columns: out(i, al) = sign_al *
// in(i, perm[al]).
Matrix apply_signed_perm(const Matrix& lam, const std::vector<std::size_t>& perm,
                         const std::vector<int>& signs) {
  Matrix out(2, lam.cols());
  for (std::size_t al = 0; al < lam.cols(); ++al)
    for (std::size_t i = 0; i < 2; ++i) out(i, al) = Rational(signs[al]) * lam(i, perm[al]);
  return out;
}

// Solve S (2x2, rational) with lt(i, al) = sum_k S(k, i) lam(k, al).
std::optional<Matrix> solve_lambda_change(const Matrix& lam, const Matrix& lt) {
  Matrix sys(2 * lam.cols(), 4);
  Vector rhs(2 * lam.cols());
  for (std::size_t al = 0; al < lam.cols(); ++al)
    for (std::size_t i = 0; i < 2; ++i) {
      // unknowns S(0,0), S(0,1), S(1,0), S(1,1)
      sys(al * 2 + i, 0 * 2 + i) = lam(0, al);
      sys(al * 2 + i, 1 * 2 + i) = lam(1, al);
      rhs[al * 2 + i] = lt(i, al);
    }
  auto sol = sys.solve(rhs);
  if (!sol) return std::nullopt;
  Matrix s(2, 2);
  s(0, 0) = (*sol)[0];
  s(0, 1) = (*sol)[1];
  s(1, 0) = (*sol)[2];
  s(1, 1) = (*sol)[3];
  // Verify (solve() ignores over-determination mismatches only when
  // inconsistent, which returns nullopt; re-check anyway).
  for (std::size_t al = 0; al < lam.cols(); ++al)
    for (std::size_t i = 0; i < 2; ++i) {
      Rational acc = s(0, i) * lam(0, al) + s(1, i) * lam(1, al);
      if (acc != lt(i, al)) return std::nullopt;
    }
  return s;
}

IsoDecision decide_ia(const IaParams& x, const IaParams& y) {
  IsoDecision dec;
  if (x.l1.size() != y.l1.size())
    throw std::invalid_argument("family_isomorphic: dimension mismatch");
  std::size_t s = x.l1.size();
  if (x.eps_y != y.eps_y || x.r != y.r) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "(eps_Y, r) differ";
    return dec;
  }
  Matrix lam = lambda_matrix(x.l1, x.l2), lt = lambda_matrix(y.l1, y.l2);
  std::size_t rank1 = lam.rank(), rank2 = lt.rank();
  if (rank1 != rank2) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "lambda ranks differ";
    return dec;
  }
  if (rank1 == 2) {
    Rational v1 = v_lambda(x.l1, x.l2), v2 = v_lambda(y.l1, y.l2);
    if (v1 != v2) {
      dec.verdict = IsoDecision::Verdict::NotIsomorphic;
      dec.detail = "V_lambda differs";
      return dec;
    }
  }
  bool found = for_each_signed_perm(
      x.r, s, [&](const std::vector<std::size_t>& perm, const std::vector<int>& signs) {
        Matrix target = apply_signed_perm(lt, perm, signs);
        auto sm = solve_lambda_change(lam, target);
        if (!sm) return false;
        Rational det = sm->determinant();
        if (rank1 == 2) {
          if (det != Rational(1) && det != Rational(-1)) return false;
        } else {
          // Rank 1: complete the underdetermined solve to det +-1 by hand.
          // Try a direct construction instead of the raw solve result.
          return false;  // handled by the rank-1 branch below
        }
        dec.verdict = IsoDecision::Verdict::Isomorphic;
        dec.certificate =
            p2_witness(s, 0, perm, signs, *sm, Matrix(2, 2), Rational(1));
        return true;
      });
  if (!found && rank1 <= 1) {
    // Rank-1 orbit: both rows lie on a line; compare directions up to signed
    // permutation, with free rational rescaling of determinant one.
    found = for_each_signed_perm(
        x.r, s, [&](const std::vector<std::size_t>& perm, const std::vector<int>& signs) {
          Matrix target = apply_signed_perm(lt, perm, signs);
          // Need S in GL2 with det +-1 and target = S^T-action on lam.
          // Both matrices have rank <= 1: write lam = u (x) d, target = u~ (x) d~
          // with a common direction d = d~ (after the signed permutation).
          // Solve with one free scaling: S = A * diag-scale completion.
          // Direct approach: find any S via solve on an augmented system with
          // a slack basis, then rescale the kernel direction to reach det 1.
          auto sm = solve_lambda_change(lam, target);
          if (!sm) return false;
          // The solution is unique only modulo columns from the left kernel
          // of lam; det(S + kv (x) t) is affine in t, so tune det = +-1
          // exactly.
          Matrix ker = lam.transpose().kernel();
          if (ker.cols() == 0) return false;  // rank 2, handled above
          Vector kv = ker.column(0);
          Rational d0 = sm->determinant();
          // det(S + [t0 kv | t1 kv]) = d0 + t0 (kv x S_col1) + t1 (S_col0 x kv).
          Rational a_coef = kv[0] * (*sm)(1, 1) - kv[1] * (*sm)(0, 1);
          Rational b_coef = (*sm)(0, 0) * kv[1] - (*sm)(1, 0) * kv[0];
          for (int target_det : {1, -1}) {
            Rational t0, t1;
            Rational want = Rational(target_det) - d0;
            if (!a_coef.is_zero())
              t0 = want / a_coef;
            else if (!b_coef.is_zero())
              t1 = want / b_coef;
            else if (!want.is_zero())
              continue;
            Matrix cand = *sm;
            cand(0, 0) += t0 * kv[0];
            cand(1, 0) += t0 * kv[1];
            cand(0, 1) += t1 * kv[0];
            cand(1, 1) += t1 * kv[1];
            Rational det = cand.determinant();
            if (det != Rational(1) && det != Rational(-1)) continue;
            dec.verdict = IsoDecision::Verdict::Isomorphic;
            dec.certificate = p2_witness(s, 0, perm, signs, cand, Matrix(2, 2), Rational(1));
            return true;
          }
          return false;
        });
  }
  if (!found && dec.verdict != IsoDecision::Verdict::Isomorphic) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "no signed permutation matches the lambda data";
  }
  return dec;
}

IsoDecision decide_ib(const IbParams& x, const IbParams& y) {
  IsoDecision dec;
  if (x.l1.size() != y.l1.size())
    throw std::invalid_argument("family_isomorphic: dimension mismatch");
  std::size_t s = x.l1.size();
  if (x.r != y.r) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "r differs";
    return dec;
  }
  Matrix lam = lambda_matrix(x.l1, x.l2), lt = lambda_matrix(y.l1, y.l2);
  bool found = for_each_signed_perm(
      x.r, s, [&](const std::vector<std::size_t>& perm, const std::vector<int>& signs) {
        Matrix target = apply_signed_perm(lt, perm, signs);
        auto sm = solve_lambda_change(lam, target);
        if (!sm || sm->determinant().is_zero()) return false;
        dec.verdict = IsoDecision::Verdict::Isomorphic;
        dec.certificate = p2_witness(s, 0, perm, signs, *sm, Matrix(2, 2), Rational(1));
        return true;
      });
  if (!found) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "lambda planes in different signed-permutation orbits";
  }
  return dec;
}

IsoDecision decide_iia(const IIaParams& x, const IIaParams& y) {
  IsoDecision dec;
  if (x.l1.size() != y.l1.size())
    throw std::invalid_argument("family_isomorphic: dimension mismatch");
  std::size_t s = x.l1.size();
  if (x.r != y.r) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "r differs";
    return dec;
  }
  Matrix lam = lambda_matrix(x.l1, x.l2), lt = lambda_matrix(y.l1, y.l2);
  std::size_t rank1 = lam.rank(), rank2 = lt.rank();
  if (rank1 != rank2) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "lambda ranks differ";
    return dec;
  }
  auto finish = [&](const std::vector<std::size_t>& perm, const std::vector<int>& signs,
                    const Matrix& s_rat, const Matrix& s_irr, const Rational& rad) {
    dec.verdict = IsoDecision::Verdict::Isomorphic;
    dec.certificate = p2_witness(s, 1, perm, signs, s_rat, s_irr, rad);
    return true;
  };
  bool found = for_each_signed_perm(
      x.r, s, [&](const std::vector<std::size_t>& perm, const std::vector<int>& signs) {
        Matrix tgt = apply_signed_perm(lt, perm, signs);
        // stab(a) element: S = [[alpha, 0], [beta, alpha^-2]], i.e.
        // l~1 = alpha l1 + beta l2, l~2 = alpha^-2 l2.
        Vector l2(s), lt2(s), l1(s), lt1(s);
        for (std::size_t al = 0; al < s; ++al) {
          l1[al] = lam(0, al);
          l2[al] = lam(1, al);
          lt1[al] = tgt(0, al);
          lt2[al] = tgt(1, al);
        }
        bool z2 = is_zero_vector(l2), zt2 = is_zero_vector(lt2);
        if (z2 != zt2) return false;
        if (z2) {
          // lambda_2 = 0 on both sides: l~1 = alpha l1, any rational alpha.
          Rational alpha;
          bool got = false;
          for (std::size_t al = 0; al < s && !got; ++al)
            if (!l1[al].is_zero()) {
              alpha = lt1[al] / l1[al];
              got = true;
            }
          if (!got || alpha.is_zero()) return false;
          if (lt1 != alpha * l1) return false;
          Matrix sm(2, 2);
          sm(0, 0) = alpha;
          sm(1, 1) = (alpha * alpha).inverse();
          return finish(perm, signs, sm, Matrix(2, 2), Rational(1));
        }
        // t with l~2 = t l2, t > 0.
        Rational t;
        bool got = false;
        for (std::size_t al = 0; al < s && !got; ++al)
          if (!l2[al].is_zero()) {
            t = lt2[al] / l2[al];
            got = true;
          }
        if (!got || t.sign() <= 0) return false;
        if (lt2 != t * l2) return false;
        // alpha^2 = 1/t; alpha = sqrt(1/t) (QuadExt when 1/t is not square).
        Rational rad = t.inverse();
        // l~1 = alpha l1 + beta l2 with beta = b0 + b1 sqrt(rad).
        // Rational parts: l~1 = b0 l2 + (alpha l1 + b1 sqrt(rad) l2) ...
        // Split: alpha = sqrt(rad); sqrt-part: l1 + b1 l2 = 0 or b1 chosen so
        // that sqrt-part vanishes against rational l~1.
        if (auto root = rad.sqrt_exact()) {
          // alpha rational: plain linear solve for beta.
          Rational alpha = *root;
          // l~1 - alpha l1 = beta l2.
          Vector delta(s);
          for (std::size_t al = 0; al < s; ++al) delta[al] = lt1[al] - alpha * l1[al];
          Rational beta;
          bool bg = false;
          for (std::size_t al = 0; al < s && !bg; ++al)
            if (!l2[al].is_zero()) {
              beta = delta[al] / l2[al];
              bg = true;
            }
          if (!bg || delta != beta * l2) {
            // Also try alpha = -root.
            alpha = -*root;
            for (std::size_t al = 0; al < s; ++al) delta[al] = lt1[al] - alpha * l1[al];
            bg = false;
            for (std::size_t al = 0; al < s && !bg; ++al)
              if (!l2[al].is_zero()) {
                beta = delta[al] / l2[al];
                bg = true;
              }
            if (!bg || delta != beta * l2) return false;
          }
          Matrix sm(2, 2);
          sm(0, 0) = alpha;
          sm(1, 0) = beta;
          sm(1, 1) = t;
          return finish(perm, signs, sm, Matrix(2, 2), Rational(1));
        }
        // alpha irrational: rational data forces l1 in the span of l2 on the
        // sqrt-part, i.e. l1 = -b1 l2, and l~1 = b0 l2 on the rational part.
        Rational b1, b0;
        bool okb = true;
        {
          Rational ratio;
          bool got2 = false;
          for (std::size_t al = 0; al < s && okb; ++al) {
            if (l2[al].is_zero()) {
              okb = l1[al].is_zero() && lt1[al].is_zero();
              continue;
            }
            Rational c1 = l1[al] / l2[al], c0 = lt1[al] / l2[al];
            if (!got2) {
              b1 = -c1;
              b0 = c0;
              got2 = true;
            } else {
              okb = (b1 == -c1) && (b0 == c0);
            }
          }
          if (!got2) okb = false;
        }
        if (!okb) return false;
        Matrix s_rat(2, 2), s_irr(2, 2);
        s_irr(0, 0) = Rational(1);  // alpha = sqrt(rad)
        s_rat(1, 0) = b0;
        s_irr(1, 0) = b1;
        s_rat(1, 1) = t;  // alpha^-2 = t
        return finish(perm, signs, s_rat, s_irr, rad);
      });
  if (!found) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "lambda data in different stab(a)-orbits";
  }
  return dec;
}

IsoDecision decide_iib(const IIbParams& x, const IIbParams& y) {
  IsoDecision dec;
  if (x.l1.size() != y.l1.size())
    throw std::invalid_argument("family_isomorphic: dimension mismatch");
  std::size_t s = x.l1.size();
  if (x.r != y.r) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "r differs";
    return dec;
  }
  Matrix lam = lambda_matrix(x.l1, x.l2), lt = lambda_matrix(y.l1, y.l2);
  bool found = for_each_signed_perm(
      x.r, s, [&](const std::vector<std::size_t>& perm, const std::vector<int>& signs) {
        if (apply_signed_perm(lt, perm, signs) != lam) return false;
        dec.verdict = IsoDecision::Verdict::Isomorphic;
        dec.certificate =
            p2_witness(s, 2, perm, signs, Matrix::identity(2), Matrix(2, 2), Rational(1));
        return true;
      });
  if (!found) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "lambda pairs in different signed-permutation orbits";
  }
  return dec;
}

IsomorphismCertificate identity_certificate(std::size_t dm) {
  IsomorphismCertificate cert;
  cert.z_change = Matrix::identity(1);
  cert.witness_rat = Matrix::identity(dm);
  cert.witness_irr = Matrix(dm, dm);
  return cert;
}

IsoDecision decide_iii(const IIIParams& x, const IIIParams& y) {
  IsoDecision dec;
  if (x.block.kind != y.block.kind || x.f.size() != y.f.size()) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "block kinds or dimensions differ";
    return dec;
  }
  std::size_t nf = x.f.size();
  std::size_t block_dim = x.block.kind == IIIBlock::Kind::None ? 0 : 2;
  std::size_t wn = block_dim + nf;
  std::size_t dm = wn + 2;
  // Candidate c^2: forced by the block when present, else by the timelike
  // slot f_1.
  std::vector<Rational> cands;
  switch (x.block.kind) {
    case IIIBlock::Kind::None:
      cands.push_back(y.f[0] / x.f[0]);
      break;
    case IIIBlock::Kind::DiagEqual:
    case IIIBlock::Kind::JordanPlus:
    case IIIBlock::Kind::JordanMinus:
      cands.push_back(y.block.phi1 / x.block.phi1);
      break;
    case IIIBlock::Kind::Rotation: {
      if (!x.block.phi1.is_zero())
        cands.push_back(y.block.phi1 / x.block.phi1);
      else if (!x.block.phi2.is_zero()) {
        cands.push_back(y.block.phi2 / x.block.phi2);
        cands.push_back(-(y.block.phi2 / x.block.phi2));
      }
      break;
    }
  }
  for (const auto& c2 : cands) {
    if (c2.sign() <= 0) continue;
    bool phi_ok = true;
    bool flip_phi2 = false;
    switch (x.block.kind) {
      case IIIBlock::Kind::None:
        phi_ok = y.f[0] == c2 * x.f[0];
        break;
      case IIIBlock::Kind::DiagEqual:
      case IIIBlock::Kind::JordanPlus:
      case IIIBlock::Kind::JordanMinus:
        phi_ok = y.block.phi1 == c2 * x.block.phi1;
        break;
      case IIIBlock::Kind::Rotation: {
        if (y.block.phi1 != c2 * x.block.phi1) {
          phi_ok = false;
          break;
        }
        if (y.block.phi2 == c2 * x.block.phi2)
          flip_phi2 = false;
        else if (y.block.phi2 == -(c2 * x.block.phi2))
          flip_phi2 = true;
        else
          phi_ok = false;
        break;
      }
    }
    if (!phi_ok) continue;
    // Euclidean slots: multiset y.f == c2 * x.f (timelike slot already fixed
    // in the None case).
    std::size_t first = x.block.kind == IIIBlock::Kind::None ? 1 : 0;
    std::vector<bool> used(nf, false);
    std::vector<std::size_t> perm(nf, nf);
    if (x.block.kind == IIIBlock::Kind::None) {
      perm[0] = 0;
      used[0] = true;
    }
    bool ok = true;
    for (std::size_t i = first; i < nf && ok; ++i) {
      ok = false;
      for (std::size_t j = first; j < nf; ++j)
        if (!used[j] && y.f[j] == c2 * x.f[i]) {
          used[j] = true;
          perm[i] = j;
          ok = true;
          break;
        }
    }
    if (!ok) continue;

    // Witness: Z -> gamma Z, Z* -> gamma^-1 Z*, gamma = 1/c (radicand c2);
    // W-block conjugation fixing the Gram.
    IsomorphismCertificate cert;
    cert.permutation = perm;
    cert.signs.assign(wn, 1);
    cert.z_change = Matrix{{c2}};
    cert.radicand = c2;
    QuadExt cval = QuadExt::sqrt_of(c2);
    QMatrix q(dm, dm);
    // f scales by gamma^2 under Z -> gamma Z; the target data is c^2 times
    // the source, so gamma = c.
    q(0, 0) = cval;
    q(dm - 1, dm - 1) = QuadExt(1) / cval;
    if (block_dim == 2) {
      switch (x.block.kind) {
        case IIIBlock::Kind::DiagEqual:
          q(1, 1) = q(2, 2) = QuadExt(1);
          break;
        case IIIBlock::Kind::JordanPlus:
        case IIIBlock::Kind::JordanMinus: {
          // diag(c, 1/c) rescales the Jordan off-entry back to 1.
          q(1, 1) = cval;
          q(2, 2) = QuadExt(1) / cval;
          break;
        }
        case IIIBlock::Kind::Rotation: {
          if (flip_phi2) {
            q(1, 2) = QuadExt(1);
            q(2, 1) = QuadExt(1);
          } else {
            q(1, 1) = q(2, 2) = QuadExt(1);
          }
          break;
        }
        default:
          break;
      }
    }
    for (std::size_t i = 0; i < nf; ++i)
      q(1 + block_dim + perm[i], 1 + block_dim + i) = QuadExt(1);
    cert.witness_rat = Matrix(dm, dm);
    cert.witness_irr = Matrix(dm, dm);
    for (std::size_t i = 0; i < dm; ++i)
      for (std::size_t j = 0; j < dm; ++j) {
        cert.witness_rat(i, j) = q(i, j).rat();
        cert.witness_irr(i, j) = q(i, j).irr();
      }
    dec.verdict = IsoDecision::Verdict::Isomorphic;
    dec.certificate = cert;
    return dec;
  }
  dec.verdict = IsoDecision::Verdict::NotIsomorphic;
  dec.detail = "no admissible scaling matches (Phi, f)";
  return dec;
}

IsoDecision decide_iv(const IVParams& x, const IVParams& y) {
  IsoDecision dec;
  if (x.f.size() != y.f.size())
    throw std::invalid_argument("family_isomorphic: dimension mismatch");
  if (x.b != y.b) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "parameter cases differ";
    return dec;
  }
  std::size_t nf = x.f.size();
  bool case_ii = x.b == Rational(1);
  if (x.a != y.a) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "a differs";
    return dec;
  }
  std::size_t first = case_ii ? 1 : 0;
  if (case_ii && nf > 0 && x.f[0] != y.f[0]) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "f_1 differs";
    return dec;
  }
  std::vector<bool> used(nf, false);
  std::vector<std::size_t> perm(nf, nf);
  if (case_ii && nf > 0) {
    perm[0] = 0;
    used[0] = true;
  }
  for (std::size_t i = first; i < nf; ++i) {
    bool ok = false;
    for (std::size_t j = first; j < nf; ++j)
      if (!used[j] && y.f[j] == x.f[i]) {
        used[j] = true;
        perm[i] = j;
        ok = true;
        break;
      }
    if (!ok) {
      dec.verdict = IsoDecision::Verdict::NotIsomorphic;
      dec.detail = "f-multisets differ";
      return dec;
    }
  }
  // Witness: permute the U-slots; m-order (Z, e, w, U..., e*, Z*).
  std::size_t dm = nf + 5;
  IsomorphismCertificate cert;
  cert.permutation = perm;
  cert.signs.assign(nf, 1);
  cert.z_change = Matrix::identity(1);
  cert.witness_rat = Matrix(dm, dm);
  cert.witness_irr = Matrix(dm, dm);
  cert.witness_rat(0, 0) = cert.witness_rat(1, 1) = cert.witness_rat(2, 2) = Rational(1);
  for (std::size_t i = 0; i < nf; ++i) cert.witness_rat(3 + perm[i], 3 + i) = Rational(1);
  cert.witness_rat(dm - 2, dm - 2) = cert.witness_rat(dm - 1, dm - 1) = Rational(1);
  dec.verdict = IsoDecision::Verdict::Isomorphic;
  dec.certificate = cert;
  return dec;
}


IsoDecision decide_least_nilpotent(const LeastNilpotentParams& x,
                                   const LeastNilpotentParams& y) {
  IsoDecision dec;
  if (x.p != y.p || x.lambda.size() != y.lambda.size())
    throw std::invalid_argument("family_isomorphic: dimension mismatch");
  std::size_t p = x.p, s = x.lambda.size();
  if (p >= 3) {
    dec.verdict = IsoDecision::Verdict::Unknown;
    dec.detail = "least nilpotent decision implemented for p in {1, 2}; p = " +
                 std::to_string(p) + " (epsilon multiset and dims computed only)";
    return dec;
  }
  if (p == 1) {
    // Reduces to the Lorentzian decision with f_a = eps_a Lambda_a^2; the
    // m-layout matches the Lorentz one, so the same witness applies.
    auto f_of = [](const LeastNilpotentParams& q) {
      std::vector<Rational> f;
      for (std::size_t al = 0; al < q.lambda.size(); ++al)
        f.push_back(Rational(q.epsilon[al]) * q.lambda[al][0] * q.lambda[al][0]);
      return f;
    };
    return lorentz_isomorphic(f_of(x), f_of(y));
  }
  // p = 2: need a permutation/sign choice g and P in GL(z) with
  // P Lambda_a = sign_a Lambda~_{g(a)} and det(P)^2 b = b~.
  Rational bx = x.b.empty() ? Rational(0) : x.b[((0 * 2 + 1) * 2 + 0) * 2 + 1];
  Rational by = y.b.empty() ? Rational(0) : y.b[((0 * 2 + 1) * 2 + 0) * 2 + 1];
  if (bx.sign() != by.sign()) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "curvature coefficients have different signs";
    return dec;
  }
  Matrix lam(2, s), lt(2, s);
  for (std::size_t al = 0; al < s; ++al)
    for (std::size_t i = 0; i < 2; ++i) {
      lam(i, al) = x.lambda[al][i];
      lt(i, al) = y.lambda[al][i];
    }
  bool found = for_each_signed_perm(
      0, s, [&](const std::vector<std::size_t>& perm, const std::vector<int>& signs) {
        // epsilon must match along the permutation.
        for (std::size_t al = 0; al < s; ++al)
          if (x.epsilon[al] != y.epsilon[perm[al]]) return false;
        Matrix target = apply_signed_perm(lt, perm, signs);
        // target = P lam (left action); solve P exactly, kernel shifts tune
        // the determinant.
        Matrix sys(2 * s, 4);
        Vector rhs(2 * s);
        for (std::size_t al = 0; al < s; ++al)
          for (std::size_t i = 0; i < 2; ++i) {
            sys(al * 2 + i, i * 2 + 0) = lam(0, al);
            sys(al * 2 + i, i * 2 + 1) = lam(1, al);
            rhs[al * 2 + i] = target(i, al);
          }
        auto sol = sys.solve(rhs);
        if (!sol) return false;
        Matrix pmat(2, 2);
        pmat(0, 0) = (*sol)[0];
        pmat(0, 1) = (*sol)[1];
        pmat(1, 0) = (*sol)[2];
        pmat(1, 1) = (*sol)[3];
        for (std::size_t al = 0; al < s; ++al)
          for (std::size_t i = 0; i < 2; ++i) {
            Rational acc = pmat(i, 0) * lam(0, al) + pmat(i, 1) * lam(1, al);
            if (acc != target(i, al)) return false;
          }
        // Want det(P)^2 bx = by.
        auto finish_with = [&](const Matrix& prat, const Matrix& pirr, const Rational& rad) {
          // Parameter transform on z* is S = P^T (the witness then carries P
          // on the z-block and its dual on z*).
          Matrix s_rat = prat.transpose(), s_irr = pirr.transpose();
          dec.verdict = IsoDecision::Verdict::Isomorphic;
          dec.certificate = p2_witness(s, 0, perm, signs, s_rat, s_irr, rad);
          return true;
        };
        if (bx.is_zero()) {
          // No determinant constraint beyond invertibility.
          if (!pmat.determinant().is_zero()) return finish_with(pmat, Matrix(2, 2), Rational(1));
          // Complete a rank-deficient solve over the kernel of lam^T.
          Matrix ker = lam.transpose().kernel();
          if (ker.cols() == 0) return false;
          Vector kv = ker.column(0);
          for (long t0 : {1L, -1L, 2L})
            for (long t1 : {0L, 1L, -1L}) {
              Matrix cand = pmat;
              cand(0, 0) += Rational(t0) * kv[0];
              cand(1, 0) += Rational(t0) * kv[1];
              cand(0, 1) += Rational(t1) * kv[0];
              cand(1, 1) += Rational(t1) * kv[1];
              if (!cand.determinant().is_zero())
                return finish_with(cand, Matrix(2, 2), Rational(1));
            }
          return false;
        }
        Rational ratio = by / bx;  // det(P)^2 must equal this (positive here)
        Rational d0 = pmat.determinant();
        if (d0 * d0 == ratio) return finish_with(pmat, Matrix(2, 2), Rational(1));
        // Shift along the kernel of lam^T: det is affine in the shifts.
        Matrix ker = lam.transpose().kernel();
        if (ker.cols() == 0) return false;  // P fully determined, ratio off
        Vector kv = ker.column(0);
        Rational a_coef = kv[0] * pmat(1, 1) - kv[1] * pmat(0, 1);
        Rational b_coef = pmat(0, 0) * kv[1] - pmat(1, 0) * kv[0];
        // Target determinant +-sqrt(ratio), possibly irrational.
        auto root = ratio.sqrt_exact();
        for (int sgn : {1, -1}) {
          if (a_coef.is_zero() && b_coef.is_zero()) break;
          bool use_t0 = !a_coef.is_zero();
          Rational coef = use_t0 ? a_coef : b_coef;
          if (root) {
            Rational want = Rational(sgn) * *root - d0;
            Rational tshift = want / coef;
            Matrix cand = pmat;
            std::size_t col = use_t0 ? 0 : 1;
            cand(0, col) += tshift * kv[0];
            cand(1, col) += tshift * kv[1];
            if (cand.determinant() * cand.determinant() == ratio)
              return finish_with(cand, Matrix(2, 2), Rational(1));
          } else {
            // det target is sqrt(ratio): shift coefficient lives in
            // Q(sqrt(ratio)): t = (sgn sqrt(ratio) - d0)/coef.
            Rational t_rat = -d0 / coef;
            Rational t_irr = Rational(sgn) / coef;
            Matrix cand_rat = pmat, cand_irr(2, 2);
            std::size_t col = use_t0 ? 0 : 1;
            cand_rat(0, col) += t_rat * kv[0];
            cand_rat(1, col) += t_rat * kv[1];
            cand_irr(0, col) = t_irr * kv[0];
            cand_irr(1, col) = t_irr * kv[1];
            return finish_with(cand_rat, cand_irr, ratio);
          }
        }
        return false;
      });
  if (!found && dec.verdict != IsoDecision::Verdict::Isomorphic) {
    dec.verdict = IsoDecision::Verdict::NotIsomorphic;
    dec.detail = "no (P, permutation, signs) matches (b, epsilon, Lambda)";
  }
  return dec;
}

}  // namespace

IsoDecision family_isomorphic(const FamilyParams& a, const FamilyParams& b) {
  if (a.index() != b.index()) throw std::invalid_argument("family_isomorphic: family mismatch");
  IsoDecision dec;
  if (std::holds_alternative<LorentzParams>(a))
    dec = lorentz_isomorphic(std::get<LorentzParams>(a).f, std::get<LorentzParams>(b).f);
  else if (std::holds_alternative<IaParams>(a))
    dec = decide_ia(std::get<IaParams>(a), std::get<IaParams>(b));
  else if (std::holds_alternative<IbParams>(a))
    dec = decide_ib(std::get<IbParams>(a), std::get<IbParams>(b));
  else if (std::holds_alternative<IIaParams>(a))
    dec = decide_iia(std::get<IIaParams>(a), std::get<IIaParams>(b));
  else if (std::holds_alternative<IIbParams>(a))
    dec = decide_iib(std::get<IIbParams>(a), std::get<IIbParams>(b));
  else if (std::holds_alternative<Nil22Params>(a)) {
    if (std::get<Nil22Params>(a).eps_y == std::get<Nil22Params>(b).eps_y) {
      dec.verdict = IsoDecision::Verdict::Isomorphic;
      dec.certificate = identity_certificate(4);
    } else {
      dec.verdict = IsoDecision::Verdict::NotIsomorphic;
      dec.detail = "eps_Y differs";
    }
  } else if (std::holds_alternative<Nil23Params>(a)) {
    dec.verdict = IsoDecision::Verdict::Isomorphic;
    dec.certificate = identity_certificate(5);
  } else if (std::holds_alternative<Nil24Params>(a)) {
    dec.verdict = IsoDecision::Verdict::Isomorphic;
    dec.certificate = identity_certificate(6);
  } else if (std::holds_alternative<IIIParams>(a))
    dec = decide_iii(std::get<IIIParams>(a), std::get<IIIParams>(b));
  else if (std::holds_alternative<IVParams>(a))
    dec = decide_iv(std::get<IVParams>(a), std::get<IVParams>(b));
  else if (std::holds_alternative<LeastNilpotentParams>(a))
    dec = decide_least_nilpotent(std::get<LeastNilpotentParams>(a),
                                 std::get<LeastNilpotentParams>(b));

  if (dec.verdict == IsoDecision::Verdict::Isomorphic) {
    // Certificates are checked before they leave the decider.
    SymmetricTriple t1 = build_family(a), t2 = build_family(b);
    if (!dec.certificate || !verify_certificate(t1, t2, *dec.certificate))
      throw std::logic_error("family_isomorphic: certificate failed exact verification");
  }
  return dec;
}

std::optional<std::string> indecomposable_sufficient(const SymmetricTriple& t) {
  if (!t.is_solvable()) return std::nullopt;
  Subspace z = t.center_in_m();
  if (z.dim() == 1) return "solvable with 1-dimensional center";
  Signature sig = t.m_signature();
  std::size_t p = std::min(sig.neg, sig.pos);
  if (p >= 1 && z.dim() == p && is_totally_isotropic(z, t.form_on_m())) {
    try {
      MaxCenterBasis basis = max_center_basis(t);
      std::vector<Matrix> fs = fij_operators(t, basis);
      Matrix gram_w = t.form_on_m().restrict_gram(basis.w);
      SpectralData sd = simultaneous_diagonalize(fs, gram_w, basis.z.size());
      auto [nil, reg] = split_w(sd);
      if (nil.empty()) {
        // dim Y = dim h - dim span{X} with X = [z-perp, m].
        Subspace zperp = orthogonal_complement(z, t.form_on_m());
        std::vector<Vector> x_gens;
        for (const auto& v : zperp.basis())
          for (std::size_t b = 0; b < t.dim_m(); ++b)
            x_gens.push_back(t.algebra().bracket(t.embed_m(v), t.m_basis_vector(b)));
        long dim_y = static_cast<long>(t.dim_h()) -
                     static_cast<long>(Subspace::span(t.dim_g(), x_gens).dim());
        long pl = static_cast<long>(p);
        if (2 * dim_y > pl * (pl - 2))
          return "least nilpotent with dim(Y) > p(p-2)/2";
      }
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace triplekit
