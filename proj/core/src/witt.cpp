#include "triplekit/witt.hpp"

#include <stdexcept>

namespace triplekit {

namespace {

// Echelon-completion complement of inner inside outer (inner must be
// contained in outer); deterministic given the canonical bases.
Subspace echelon_complement(const Subspace& inner, const Subspace& outer) {
  return Subspace::span(outer.ambient_dim(), inner.quotient_basis(outer));
}

}  // namespace

AdaptedDecomposition adapted_decompose(const BilinearForm& b, const Subspace& f) {
  if (!b.nondegenerate()) throw std::invalid_argument("adapted_decompose: degenerate form");
  std::size_t n = b.dim();
  if (f.ambient_dim() != n) throw std::invalid_argument("adapted_decompose: dimension mismatch");
  Subspace fperp = orthogonal_complement(f, b);
  Subspace e = f.intersect(fperp);
  Subspace w = echelon_complement(e, f);
  Subspace u = echelon_complement(e, fperp);

  // E*: for each E-basis vector solve the dual-pairing system, then
  // isotropize by Gram correction inside E (always possible since E perp E).
  std::size_t p = e.dim();
  std::vector<Vector> x(p);
  if (p > 0) {
    std::vector<Vector> constraints = e.basis();
    for (const auto& v : w.basis()) constraints.push_back(v);
    for (const auto& v : u.basis()) constraints.push_back(v);
    Matrix sys(constraints.size(), n);
    for (std::size_t r = 0; r < constraints.size(); ++r)
      for (std::size_t j = 0; j < n; ++j) {
        Rational acc;
        for (std::size_t i = 0; i < n; ++i) acc += constraints[r][i] * b.gram()(i, j);
        sys(r, j) = acc;
      }
    for (std::size_t i = 0; i < p; ++i) {
      Vector rhs(constraints.size(), Rational(0));
      rhs[i] = 1;
      x[i] = solve_linear(sys, rhs);
    }
    // Gram correction: e*_i = x_i - 1/2 sum_j B(x_i,x_j) e_j.
    Matrix g(p, p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i; j < p; ++j) g(i, j) = g(j, i) = b.eval(x[i], x[j]);
    Rational half(1, 2);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) x[i] = x[i] - (half * g(i, j)) * e.basis()[j];
  }
  return AdaptedDecomposition{e, w, u, Subspace::span(n, x)};
}

bool adapted_conditions_hold(const AdaptedDecomposition& d, const BilinearForm& b,
                             const Subspace& f) {
  std::size_t n = b.dim();
  Subspace fperp = orthogonal_complement(f, b);
  if (d.E != f.intersect(fperp)) return false;
  if (d.E.sum(d.W) != f) return false;
  if (d.E.intersect(d.W).dim() != 0) return false;
  if (d.E.sum(d.U) != fperp) return false;
  if (d.E.intersect(d.U).dim() != 0) return false;
  if (!is_totally_isotropic(d.E, b) || !is_totally_isotropic(d.Estar, b)) return false;
  for (const auto& uv : d.U.basis())
    for (const auto& wv : d.W.basis())
      if (!b.eval(uv, wv).is_zero()) return false;
  Subspace ee = d.E.sum(d.Estar), wu = d.W.sum(d.U);
  for (const auto& a : ee.basis())
    for (const auto& c : wu.basis())
      if (!b.eval(a, c).is_zero()) return false;
  // Singular pairing of E and E*.
  if (d.E.dim() != d.Estar.dim()) return false;
  Matrix pairing(d.E.dim(), d.E.dim());
  for (std::size_t i = 0; i < d.E.dim(); ++i)
    for (std::size_t j = 0; j < d.E.dim(); ++j)
      pairing(i, j) = b.eval(d.Estar.basis()[i], d.E.basis()[j]);
  if (pairing.rank() != d.E.dim()) return false;
  // Everything together spans V.
  return d.E.sum(d.W).sum(d.U).sum(d.Estar).dim() == n;
}

namespace {

// B-orthogonalizes span(basis) (nondegenerate restriction required); then
// scales square norms to +-1 and orders negatives first.
struct DiagonalizedBlock {
  std::vector<Vector> vectors;
  std::vector<Rational> norms;
  std::vector<Rational> nonsquare;
};

DiagonalizedBlock orthogonalize_block(const std::vector<Vector>& basis, const BilinearForm& b) {
  DiagonalizedBlock out;
  std::vector<Vector> work = basis;
  std::vector<Vector> done;
  while (!work.empty()) {
    // Pick a vector of nonzero norm; when the whole remaining block is
    // isotropic on the diagonal, split a hyperbolic pair (w_i +- w_j).
    std::size_t pick = work.size();
    for (std::size_t i = 0; i < work.size(); ++i)
      if (!b.eval(work[i], work[i]).is_zero()) {
        pick = i;
        break;
      }
    Vector v;
    if (pick != work.size()) {
      v = work[pick];
      work.erase(work.begin() + static_cast<long>(pick));
    } else {
      std::size_t bi = work.size(), bj = work.size();
      for (std::size_t i = 0; i < work.size() && bi == work.size(); ++i)
        for (std::size_t j = i + 1; j < work.size(); ++j)
          if (!b.eval(work[i], work[j]).is_zero()) {
            bi = i;
            bj = j;
            break;
          }
      if (bi == work.size())
        throw std::invalid_argument("orthogonalize_block: degenerate restriction");
      v = work[bi] + work[bj];
      Vector other = work[bi] - work[bj];
      work.erase(work.begin() + static_cast<long>(bj));
      work.erase(work.begin() + static_cast<long>(bi));
      work.push_back(std::move(other));
    }
    Rational nv = b.eval(v, v);
    for (auto& rem : work) rem = rem - (b.eval(rem, v) / nv) * v;
    done.push_back(v);
  }
  // Scale and order: negatives first.
  std::vector<std::pair<Rational, Vector>> scaled;
  for (auto& v : done) {
    Rational nv = b.eval(v, v);
    if (auto root = nv.abs().sqrt_exact()) {
      if (!root->is_zero()) {
        Vector sv = root->inverse() * v;
        scaled.push_back({b.eval(sv, sv), sv});
        continue;
      }
    }
    scaled.push_back({nv, v});
  }
  std::stable_sort(scaled.begin(), scaled.end(),
                   [](const auto& a, const auto& b2) { return a.first.sign() < b2.first.sign(); });
  for (auto& [norm, vec] : scaled) {
    out.vectors.push_back(vec);
    out.norms.push_back(norm);
    if (norm != Rational(1) && norm != Rational(-1)) out.nonsquare.push_back(norm);
  }
  return out;
}

}  // namespace

Matrix AdaptedBasis::basis_matrix(std::size_t ambient) const {
  std::vector<Vector> all;
  for (const auto& v : e) all.push_back(v);
  for (const auto& v : w) all.push_back(v);
  for (const auto& v : u) all.push_back(v);
  for (const auto& v : estar) all.push_back(v);
  return Matrix::from_columns(ambient, all);
}

AdaptedBasis adapted_basis(const AdaptedDecomposition& d, const BilinearForm& b) {
  AdaptedBasis out;
  out.e = d.E.basis();

  DiagonalizedBlock wb = orthogonalize_block(d.W.basis(), b);
  DiagonalizedBlock ub = orthogonalize_block(d.U.basis(), b);
  out.w = wb.vectors;
  out.u = ub.vectors;
  out.w_norms = wb.norms;
  out.u_norms = ub.norms;
  out.nonsquare_norms = wb.nonsquare;
  out.nonsquare_norms.insert(out.nonsquare_norms.end(), ub.nonsquare.begin(), ub.nonsquare.end());

  // Dualize E* against the E-basis: B(e*_i, e_j) = delta_ij.
  std::size_t p = d.E.dim();
  if (p > 0) {
    Matrix pairing(p, p);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j) pairing(i, j) = b.eval(d.Estar.basis()[j], out.e[i]);
    auto inv = pairing.inverse();
    if (!inv) throw std::invalid_argument("adapted_basis: E/E* pairing degenerate");
    for (std::size_t i = 0; i < p; ++i) {
      Vector dual(b.dim(), Rational(0));
      for (std::size_t j = 0; j < p; ++j) dual = dual + (*inv)(j, i) * d.Estar.basis()[j];
      out.estar.push_back(dual);
    }
  }

  std::vector<Vector> all;
  for (const auto& v : out.e) all.push_back(v);
  for (const auto& v : out.w) all.push_back(v);
  for (const auto& v : out.u) all.push_back(v);
  for (const auto& v : out.estar) all.push_back(v);
  out.gram = b.restrict_gram(all);
  return out;
}

std::vector<std::array<std::size_t, 3>> IteratedDecomposition::dims() const {
  std::vector<std::array<std::size_t, 3>> out;
  for (const auto& l : levels) out.push_back({l.E.dim(), l.W.dim(), l.U.dim()});
  return out;
}

IteratedDecomposition iterate_decompose(const SymmetricTriple& t) {
  std::size_t dm = t.dim_m();
  BilinearForm bm = t.form_on_m();
  if (!t.is_solvable()) throw std::domain_error("iterate_decompose: triple not solvable");
  if (dm > 1) {
    Subspace z = t.center_in_m();
    if (!is_totally_isotropic(z, bm))
      throw std::domain_error("iterate_decompose: center not totally isotropic (decomposable input)");
  }

  // F_0 = [h, m] in m-coordinates.
  std::vector<Vector> f_gens;
  for (std::size_t a = 0; a < t.dim_h(); ++a)
    for (std::size_t b = 0; b < dm; ++b)
      f_gens.push_back(t.project_m(t.algebra().bracket(t.h_basis_vector(a), t.m_basis_vector(b))));
  Subspace f = Subspace::span(dm, f_gens);

  IteratedDecomposition out;
  AdaptedDecomposition first = adapted_decompose(bm, f);
  out.levels.push_back({first.E, first.W, first.U, first.Estar});
  Subspace current_w = first.W;

  while (true) {
    if (out.levels.size() > dm + 1) throw std::logic_error("iterate_decompose: no termination");
    // F_{i+1} = pr_{W_i}[h, W_i]; the projection kills the components along
    // all previously split-off summands.
    std::size_t wd = current_w.dim();
    if (wd == 0) {
      out.w_final = current_w;
      break;
    }
    // Complement of W_i in m: m = (sum E_k) + W_i + (sum U_k) + (sum E*_k).
    Subspace others(dm);
    for (const auto& lvl : out.levels)
      others = others.sum(lvl.E).sum(lvl.U).sum(lvl.Estar);
    std::vector<Vector> full = current_w.basis();
    for (const auto& v : others.basis()) full.push_back(v);
    Matrix change = Matrix::from_columns(dm, full);
    auto change_inv = change.inverse();
    if (!change_inv) throw std::logic_error("iterate_decompose: summands do not span");

    std::vector<Vector> proj_gens;
    for (std::size_t a = 0; a < t.dim_h(); ++a)
      for (const auto& wv : current_w.basis()) {
        Vector br = t.project_m(t.algebra().bracket(t.h_basis_vector(a), t.embed_m(wv)));
        Vector coords = change_inv->apply(br);
        Vector proj(wd, Rational(0));
        for (std::size_t k = 0; k < wd; ++k) proj[k] = coords[k];
        proj_gens.push_back(proj);  // in W_i-coordinates
      }
    Subspace f_next_w = Subspace::span(wd, proj_gens);
    if (f_next_w.dim() == 0) {
      out.w_final = current_w;
      break;
    }
    // Decompose inside W_i.
    BilinearForm bw{bm.restrict_gram(current_w.basis())};
    AdaptedDecomposition sub = adapted_decompose(bw, f_next_w);
    if (sub.E.dim() == 0)
      throw std::domain_error("iterate_decompose: nonzero non-singular F (input is not a triple)");
    auto lift = [&](const Subspace& s) {
      std::vector<Vector> lifted;
      for (const auto& v : s.basis()) {
        Vector amb(dm, Rational(0));
        for (std::size_t k = 0; k < wd; ++k) amb = amb + v[k] * current_w.basis()[k];
        lifted.push_back(amb);
      }
      return Subspace::span(dm, lifted);
    };
    IteratedLevel lvl{lift(sub.E), lift(sub.W), lift(sub.U), lift(sub.Estar)};
    out.levels.push_back(lvl);
    current_w = lvl.W;
  }
  return out;
}

AdaptedBasis IteratedDecomposition::chain_basis(const BilinearForm& bm) const {
  AdaptedBasis out;
  std::size_t n = bm.dim();
  // E-chain in level order; per-level dual E*; E* listed in reverse level order.
  std::vector<std::vector<Vector>> estars(levels.size());
  for (std::size_t li = 0; li < levels.size(); ++li) {
    const auto& lvl = levels[li];
    std::size_t p = lvl.E.dim();
    for (const auto& v : lvl.E.basis()) out.e.push_back(v);
    if (p > 0) {
      Matrix pairing(p, p);
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
          pairing(i, j) = bm.eval(lvl.Estar.basis()[j], lvl.E.basis()[i]);
      auto inv = pairing.inverse();
      if (!inv) throw std::invalid_argument("chain_basis: E/E* pairing degenerate");
      for (std::size_t i = 0; i < p; ++i) {
        Vector dual(n, Rational(0));
        for (std::size_t j = 0; j < p; ++j) dual = dual + (*inv)(j, i) * lvl.Estar.basis()[j];
        estars[li].push_back(dual);
      }
    }
    DiagonalizedBlock ub = orthogonalize_block(lvl.U.basis(), bm);
    for (std::size_t k = 0; k < ub.vectors.size(); ++k) {
      out.u.push_back(ub.vectors[k]);
      out.u_norms.push_back(ub.norms[k]);
    }
    out.nonsquare_norms.insert(out.nonsquare_norms.end(), ub.nonsquare.begin(),
                               ub.nonsquare.end());
  }
  DiagonalizedBlock wb = orthogonalize_block(w_final.basis(), bm);
  out.w = wb.vectors;
  out.w_norms = wb.norms;
  out.nonsquare_norms.insert(out.nonsquare_norms.end(), wb.nonsquare.begin(), wb.nonsquare.end());
  for (std::size_t li = levels.size(); li-- > 0;)
    for (const auto& v : estars[li]) out.estar.push_back(v);

  std::vector<Vector> all;
  for (const auto& v : out.e) all.push_back(v);
  for (const auto& v : out.w) all.push_back(v);
  for (const auto& v : out.u) all.push_back(v);
  for (const auto& v : out.estar) all.push_back(v);
  out.gram = bm.restrict_gram(all);
  return out;
}

TriangularForm triangular_form(const SymmetricTriple& t, const IteratedDecomposition& iter) {
  TriangularForm out;
  BilinearForm bm = t.form_on_m();
  AdaptedBasis ab = iter.chain_basis(bm);
  Matrix c = ab.basis_matrix(t.dim_m());
  auto c_inv = c.inverse();
  if (!c_inv) throw std::logic_error("triangular_form: chain basis not a basis");

  // Block layout sizes in the chain order E_0..E_n, W, U_0..U_n, E*_n..E*_0.
  std::vector<std::size_t> block_sizes;
  for (const auto& lvl : iter.levels) block_sizes.push_back(lvl.E.dim());
  block_sizes.push_back(ab.w.size());
  for (const auto& lvl : iter.levels) block_sizes.push_back(lvl.U.dim());
  for (std::size_t li = iter.levels.size(); li-- > 0;)
    block_sizes.push_back(iter.levels[li].E.dim());
  std::vector<std::size_t> offsets{0};
  for (auto s : block_sizes) offsets.push_back(offsets.back() + s);

  out.pattern_ok = true;
  std::size_t nlev = iter.levels.size();
  std::size_t estar_block_start = 2 * nlev + 1;
  for (std::size_t a = 0; a < t.dim_h(); ++a) {
    Matrix ad = *c_inv * t.ad_m(t.h_basis_vector(a)) * c;
    out.ad_matrices.push_back(ad);
    // Strict block upper triangularity.
    for (std::size_t bi = 0; bi < block_sizes.size(); ++bi)
      for (std::size_t bj = 0; bj <= bi; ++bj)
        for (std::size_t r = offsets[bi]; r < offsets[bi + 1]; ++r)
          for (std::size_t col = offsets[bj]; col < offsets[bj + 1]; ++col)
            if (!ad(r, col).is_zero()) out.pattern_ok = false;
    // I_1 M_{E*} skew: with the per-level pairing, this reads
    // B(ad(h) e*_x, e*_y) skew over the E* block; equivalent formulation
    // avoiding the I_1 bookkeeping.
    std::size_t estart = offsets[estar_block_start];
    std::size_t esz = offsets.back() - estart;
    for (std::size_t x = 0; x < esz; ++x)
      for (std::size_t y = 0; y <= x; ++y) {
        Vector ex = ab.estar[x], ey = ab.estar[y];
        Rational v1 = bm.eval(c.apply(ad.column(estart + x)), ey);
        Rational v2 = bm.eval(c.apply(ad.column(estart + y)), ex);
        if (!(v1 + v2).is_zero()) out.pattern_ok = false;
      }
    // so(B) membership in the chain basis.
    Matrix g = ab.gram;
    if (!((ad.transpose() * g) + (g * ad)).is_zero()) out.pattern_ok = false;
  }
  return out;
}

namespace {

Matrix assemble_gamma(const AdaptedBasis& ab, std::size_t ambient,
                      const std::vector<Vector>& new_e, const std::vector<Vector>& new_w,
                      const std::vector<Vector>& new_u, const std::vector<Vector>& new_estar) {
  Matrix c = ab.basis_matrix(ambient);
  std::vector<Vector> imgs;
  for (const auto& v : new_e) imgs.push_back(v);
  for (const auto& v : new_w) imgs.push_back(v);
  for (const auto& v : new_u) imgs.push_back(v);
  for (const auto& v : new_estar) imgs.push_back(v);
  Matrix img = Matrix::from_columns(ambient, imgs);
  auto c_inv = c.inverse();
  if (!c_inv) throw std::invalid_argument("GammaElement: adapted basis singular");
  return img * *c_inv;
}

}  // namespace

GammaElement GammaElement::rho_w(const AdaptedBasis& ab, std::size_t ambient, const Matrix& l) {
  std::size_t p = ab.e.size(), wn = ab.w.size();
  if (l.rows() != p || l.cols() != wn) throw std::invalid_argument("rho_w: bad L shape");
  std::vector<Vector> new_w = ab.w;
  for (std::size_t bcol = 0; bcol < wn; ++bcol)
    for (std::size_t k = 0; k < p; ++k) new_w[bcol] = new_w[bcol] + l(k, bcol) * ab.e[k];
  std::vector<Vector> new_estar = ab.estar;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t bcol = 0; bcol < wn; ++bcol) {
      Rational coef = -(l(i, bcol) / ab.w_norms[bcol]);
      new_estar[i] = new_estar[i] + coef * ab.w[bcol];
    }
    for (std::size_t j = 0; j < p; ++j) {
      Rational acc;
      for (std::size_t bcol = 0; bcol < wn; ++bcol)
        acc += l(i, bcol) * l(j, bcol) / ab.w_norms[bcol];
      new_estar[i] = new_estar[i] + (Rational(-1, 2) * acc) * ab.e[j];
    }
  }
  return GammaElement(assemble_gamma(ab, ambient, ab.e, new_w, ab.u, new_estar));
}

GammaElement GammaElement::rho_u(const AdaptedBasis& ab, std::size_t ambient, const Matrix& l) {
  std::size_t p = ab.e.size(), un = ab.u.size();
  if (l.rows() != p || l.cols() != un) throw std::invalid_argument("rho_u: bad L shape");
  std::vector<Vector> new_u = ab.u;
  for (std::size_t bcol = 0; bcol < un; ++bcol)
    for (std::size_t k = 0; k < p; ++k) new_u[bcol] = new_u[bcol] + l(k, bcol) * ab.e[k];
  std::vector<Vector> new_estar = ab.estar;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t bcol = 0; bcol < un; ++bcol)
      new_estar[i] = new_estar[i] + (-(l(i, bcol) / ab.u_norms[bcol])) * ab.u[bcol];
    for (std::size_t j = 0; j < p; ++j) {
      Rational acc;
      for (std::size_t bcol = 0; bcol < un; ++bcol)
        acc += l(i, bcol) * l(j, bcol) / ab.u_norms[bcol];
      new_estar[i] = new_estar[i] + (Rational(-1, 2) * acc) * ab.e[j];
    }
  }
  return GammaElement(assemble_gamma(ab, ambient, ab.e, ab.w, new_u, new_estar));
}

GammaElement GammaElement::rho_skew(const AdaptedBasis& ab, std::size_t ambient, const Matrix& s) {
  std::size_t p = ab.e.size();
  if (s.rows() != p || s.cols() != p || !s.is_skew())
    throw std::invalid_argument("rho_skew: S must be p x p skew");
  std::vector<Vector> new_estar = ab.estar;
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t k = 0; k < p; ++k) new_estar[i] = new_estar[i] + s(k, i) * ab.e[k];
  return GammaElement(assemble_gamma(ab, ambient, ab.e, ab.w, ab.u, new_estar));
}

GammaElement GammaElement::basis_change(const AdaptedBasis& ab, std::size_t ambient,
                                        const Matrix& p_e, const Matrix& p_w, const Matrix& p_u) {
  std::size_t p = ab.e.size(), wn = ab.w.size(), un = ab.u.size();
  if (p_e.rows() != p || p_e.cols() != p || p_w.rows() != wn || p_u.rows() != un)
    throw std::invalid_argument("basis_change: bad block shapes");
  auto p_e_inv = p_e.inverse();
  if (!p_e_inv) throw std::invalid_argument("basis_change: P_E singular");
  auto block_ok = [](const Matrix& q, const std::vector<Rational>& norms) {
    Matrix g(norms.size(), norms.size());
    for (std::size_t i = 0; i < norms.size(); ++i) g(i, i) = norms[i];
    return (q.transpose() * g * q) == g;
  };
  if (!block_ok(p_w, ab.w_norms) || !block_ok(p_u, ab.u_norms))
    throw std::invalid_argument("basis_change: W/U block not an isometry of its Gram");

  auto transform = [](const std::vector<Vector>& basis, const Matrix& q) {
    std::vector<Vector> out;
    for (std::size_t c = 0; c < q.cols(); ++c) {
      Vector v(basis.empty() ? 0 : basis[0].size(), Rational(0));
      for (std::size_t r = 0; r < q.rows(); ++r) v = v + q(r, c) * basis[r];
      out.push_back(v);
    }
    return out;
  };
  std::vector<Vector> new_e = transform(ab.e, p_e);
  std::vector<Vector> new_w = transform(ab.w, p_w);
  std::vector<Vector> new_u = transform(ab.u, p_u);
  // Dual change on E*: B(new_e*_i, new_e_j) = delta requires (P_E^-1)^T.
  std::vector<Vector> new_estar = transform(ab.estar, p_e_inv->transpose());
  return GammaElement(assemble_gamma(ab, ambient, new_e, new_w, new_u, new_estar));
}

bool GammaElement::is_isometry_stabilizing(const BilinearForm& b, const Subspace& f) const {
  if ((q_.transpose() * b.gram() * q_) != b.gram()) return false;
  std::vector<Vector> imgs;
  for (const auto& v : f.basis()) imgs.push_back(q_.apply(v));
  return Subspace::span(f.ambient_dim(), imgs) == f;
}

Matrix exp_ad_m(const SymmetricTriple& t, const Vector& h_vec) {
  Matrix ad = t.ad_m(h_vec);
  std::size_t n = ad.rows();
  Matrix acc = Matrix::identity(n);
  Matrix term = Matrix::identity(n);
  for (std::size_t k = 1; k <= n + 1; ++k) {
    term = term * ad;
    if (term.is_zero()) return acc;
    Rational inv_fact(1);
    for (std::size_t j = 1; j <= k; ++j) inv_fact /= Rational(static_cast<long>(j));
    // accumulate ad^k / k!
    Matrix scaled = term;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) scaled(i, j) *= inv_fact;
    acc = acc + scaled;
  }
  throw std::domain_error("exp_ad_m: ad(h)|_m not nilpotent");
}

}  // namespace triplekit
