#include "triplekit/triple.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "triplekit/poly.hpp"

namespace triplekit {

bool CurvatureTensor::is_zero() const {
  for (const auto& v : entries_)
    if (!v.is_zero()) return false;
  return true;
}

bool CurvatureTensor::pair_symmetric() const {
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = 0; b < dim_; ++b)
      for (std::size_t c = 0; c < dim_; ++c)
        for (std::size_t d = 0; d < dim_; ++d)
          if (at(a, b, c, d) != at(c, d, a, b)) return false;
  return true;
}

bool CurvatureTensor::skew_symmetric() const {
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = 0; b < dim_; ++b)
      for (std::size_t c = 0; c < dim_; ++c)
        for (std::size_t d = 0; d < dim_; ++d) {
          if (at(a, b, c, d) != -at(b, a, c, d)) return false;
          if (at(a, b, c, d) != -at(a, b, d, c)) return false;
        }
  return true;
}

bool CurvatureTensor::first_bianchi() const {
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = 0; b < dim_; ++b)
      for (std::size_t c = 0; c < dim_; ++c)
        for (std::size_t d = 0; d < dim_; ++d)
          if (!(at(a, b, c, d) + at(b, c, a, d) + at(c, a, b, d)).is_zero()) return false;
  return true;
}

std::string TripleReport::summary() const {
  std::ostringstream os;
  auto line = [&os](const char* name, bool ok) { os << name << ": " << (ok ? "ok" : "FAIL") << "\n"; };
  line("grading", grading_ok);
  line("jacobi", jacobi_ok);
  line("h = [m,m]", h_is_mm);
  line("sigma-invariance (h perp m)", sigma_invariant);
  line("ad-invariance", ad_invariant);
  line("B|m nondegenerate", b_m_nondegenerate);
  line("B|h nondegenerate", b_h_nondegenerate);
  line("faithful isotropy", faithful);
  os << "signature(B|m): (" << m_signature.neg << "," << m_signature.pos << ","
     << m_signature.null << ")\n";
  os << (pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

SymmetricTriple::SymmetricTriple(MetricLieAlgebra metric_algebra, std::vector<std::size_t> h_indices,
                                 std::vector<std::size_t> m_indices)
    : metric_(std::move(metric_algebra)), h_(std::move(h_indices)), m_(std::move(m_indices)) {
  std::vector<bool> seen(metric_.dim(), false);
  for (auto i : h_) {
    if (i >= metric_.dim() || seen[i]) throw std::invalid_argument("SymmetricTriple: bad h index");
    seen[i] = true;
  }
  for (auto i : m_) {
    if (i >= metric_.dim() || seen[i]) throw std::invalid_argument("SymmetricTriple: bad m index");
    seen[i] = true;
  }
  if (h_.size() + m_.size() != metric_.dim())
    throw std::invalid_argument("SymmetricTriple: indices do not partition the basis");
}

Vector SymmetricTriple::project_m(const Vector& g_vec) const {
  Vector out(m_.size(), Rational(0));
  std::vector<bool> is_m(dim_g(), false);
  for (std::size_t a = 0; a < m_.size(); ++a) {
    is_m[m_[a]] = true;
    out[a] = g_vec[m_[a]];
  }
  for (std::size_t i = 0; i < dim_g(); ++i)
    if (!is_m[i] && !g_vec[i].is_zero())
      throw std::domain_error("project_m: vector not supported on m");
  return out;
}

Vector SymmetricTriple::embed_m(const Vector& m_vec) const {
  if (m_vec.size() != m_.size()) throw std::invalid_argument("embed_m: dimension mismatch");
  Vector out(dim_g(), Rational(0));
  for (std::size_t a = 0; a < m_.size(); ++a) out[m_[a]] = m_vec[a];
  return out;
}

BilinearForm SymmetricTriple::form_on_m() const {
  Matrix g(m_.size(), m_.size());
  for (std::size_t a = 0; a < m_.size(); ++a)
    for (std::size_t b = 0; b < m_.size(); ++b) g(a, b) = form().gram()(m_[a], m_[b]);
  return BilinearForm(g);
}

BilinearForm SymmetricTriple::form_on_h() const {
  Matrix g(h_.size(), h_.size());
  for (std::size_t a = 0; a < h_.size(); ++a)
    for (std::size_t b = 0; b < h_.size(); ++b) g(a, b) = form().gram()(h_[a], h_[b]);
  return BilinearForm(g);
}

Matrix SymmetricTriple::ad_m(const Vector& h_vec) const {
  Matrix out(m_.size(), m_.size());
  for (std::size_t b = 0; b < m_.size(); ++b) {
    Vector col = project_m(algebra().bracket(h_vec, m_basis_vector(b)));
    for (std::size_t a = 0; a < m_.size(); ++a) out(a, b) = col[a];
  }
  return out;
}

namespace {

bool supported_on(const Vector& v, const std::vector<std::size_t>& idx, std::size_t dim) {
  std::vector<bool> ok(dim, false);
  for (auto i : idx) ok[i] = true;
  for (std::size_t i = 0; i < dim; ++i)
    if (!ok[i] && !v[i].is_zero()) return false;
  return true;
}

}  // namespace

TripleReport SymmetricTriple::verify() const {
  TripleReport rep;
  const LieAlgebra& g = algebra();
  std::size_t n = dim_g();

  rep.grading_ok = true;
  for (std::size_t a = 0; a < h_.size() && rep.grading_ok; ++a)
    for (std::size_t b = 0; b < h_.size() && rep.grading_ok; ++b)
      rep.grading_ok = supported_on(g.bracket_basis(h_[a], h_[b]), h_, n);
  for (std::size_t a = 0; a < h_.size() && rep.grading_ok; ++a)
    for (std::size_t b = 0; b < m_.size() && rep.grading_ok; ++b)
      rep.grading_ok = supported_on(g.bracket_basis(h_[a], m_[b]), m_, n);
  for (std::size_t a = 0; a < m_.size() && rep.grading_ok; ++a)
    for (std::size_t b = 0; b < m_.size() && rep.grading_ok; ++b)
      rep.grading_ok = supported_on(g.bracket_basis(m_[a], m_[b]), h_, n);

  rep.jacobi_ok = g.jacobi_ok();

  std::vector<Vector> mm;
  for (std::size_t a = 0; a < m_.size(); ++a)
    for (std::size_t b = a + 1; b < m_.size(); ++b) mm.push_back(g.bracket_basis(m_[a], m_[b]));
  std::vector<Vector> h_basis;
  for (auto i : h_) h_basis.push_back(g.basis_vector(i));
  rep.h_is_mm = Subspace::span(n, mm) == Subspace::span(n, h_basis);

  rep.sigma_invariant = true;
  for (auto i : h_)
    for (auto j : m_)
      if (!form().gram()(i, j).is_zero()) rep.sigma_invariant = false;

  rep.ad_invariant = metric_.ad_invariant();
  rep.b_m_nondegenerate = form_on_m().nondegenerate();
  rep.b_h_nondegenerate = form_on_h().nondegenerate();

  if (rep.grading_ok) {
    // ker(ad(.)|_m) on h via one linear system.
    Matrix sys(m_.size() * m_.size(), h_.size());
    for (std::size_t a = 0; a < h_.size(); ++a) {
      Matrix ad = ad_m(h_basis_vector(a));
      for (std::size_t i = 0; i < m_.size(); ++i)
        for (std::size_t j = 0; j < m_.size(); ++j) sys(i * m_.size() + j, a) = ad(i, j);
    }
    rep.faithful = sys.kernel().cols() == 0;
  }

  rep.m_signature = m_signature();
  return rep;
}

CurvatureTensor SymmetricTriple::curvature() const {
  std::size_t dm = m_.size();
  CurvatureTensor r(dm);
  const LieAlgebra& g = algebra();
  for (std::size_t a = 0; a < dm; ++a)
    for (std::size_t b = 0; b < dm; ++b) {
      Vector hab = g.bracket_basis(m_[a], m_[b]);
      if (is_zero_vector(hab)) continue;
      for (std::size_t c = 0; c < dm; ++c) {
        Vector w = g.bracket(hab, m_basis_vector(c));
        for (std::size_t d = 0; d < dm; ++d)
          r.at(a, b, c, d) = form().eval(w, m_basis_vector(d));
      }
    }
  return r;
}

BilinearForm SymmetricTriple::ricci() const {
  std::size_t dm = m_.size();
  Matrix ric(dm, dm);
  const LieAlgebra& g = algebra();
  for (std::size_t a = 0; a < dm; ++a)
    for (std::size_t b = a; b < dm; ++b) {
      Rational tr;
      for (std::size_t k = 0; k < dm; ++k) {
        Vector w = g.bracket(g.bracket_basis(m_[a], m_[k]), m_basis_vector(b));
        tr += w[m_[k]];
      }
      ric(a, b) = ric(b, a) = tr;
    }
  return BilinearForm(ric);
}

bool SymmetricTriple::ricci_two_step() const {
  BilinearForm bm = form_on_m();
  auto inv = bm.gram().inverse();
  if (!inv) throw std::domain_error("ricci_two_step: B|m degenerate");
  Matrix op = *inv * ricci().gram();
  return (op * op).is_zero();
}

Subspace SymmetricTriple::center_in_m() const {
  Subspace z = center();
  std::vector<Vector> vecs;
  for (const auto& v : z.basis()) vecs.push_back(project_m(v));
  return Subspace::span(m_.size(), vecs);
}

SymmetricTriple SymmetricTriple::direct_sum(const SymmetricTriple& other) const {
  std::size_t n1 = dim_g(), n2 = other.dim_g();
  std::vector<BracketEntry> entries;
  auto add_block = [&entries](const LieAlgebra& g, std::size_t offset, std::size_t total) {
    for (std::size_t i = 0; i < g.dim(); ++i)
      for (std::size_t j = i + 1; j < g.dim(); ++j) {
        const Vector& c = g.bracket_basis(i, j);
        if (is_zero_vector(c)) continue;
        Vector lifted(total, Rational(0));
        for (std::size_t k = 0; k < g.dim(); ++k) lifted[offset + k] = c[k];
        entries.push_back({offset + i, offset + j, std::move(lifted)});
      }
  };
  add_block(algebra(), 0, n1 + n2);
  add_block(other.algebra(), n1, n1 + n2);
  std::vector<std::string> labels = algebra().labels();
  for (const auto& l : other.algebra().labels()) labels.push_back(l + "'");
  LieAlgebra sum(n1 + n2, entries, labels);

  Matrix gram(n1 + n2, n1 + n2);
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j) gram(i, j) = form().gram()(i, j);
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = 0; j < n2; ++j) gram(n1 + i, n1 + j) = other.form().gram()(i, j);

  std::vector<std::size_t> h = h_, m = m_;
  for (auto i : other.h_) h.push_back(n1 + i);
  for (auto i : other.m_) m.push_back(n1 + i);
  return SymmetricTriple(MetricLieAlgebra(std::move(sum), BilinearForm(std::move(gram))), h, m);
}

SymmetricTriple SymmetricTriple::rebase_m(const Matrix& q) const {
  std::size_t dm = m_.size();
  if (q.rows() != dm || q.cols() != dm) throw std::invalid_argument("rebase_m: bad shape");
  Matrix p = Matrix::identity(dim_g());
  for (std::size_t a = 0; a < dm; ++a)
    for (std::size_t b = 0; b < dm; ++b) p(m_[a], m_[b]) = q(a, b);
  auto p_inv = p.inverse();
  if (!p_inv) throw std::invalid_argument("rebase_m: singular base change");

  std::vector<BracketEntry> entries;
  for (std::size_t i = 0; i < dim_g(); ++i)
    for (std::size_t j = i + 1; j < dim_g(); ++j) {
      Vector br = algebra().bracket(p.column(i), p.column(j));
      Vector coords = p_inv->apply(br);
      if (!is_zero_vector(coords)) entries.push_back({i, j, std::move(coords)});
    }
  LieAlgebra rebased(dim_g(), entries, algebra().labels());
  Matrix gram = p.transpose() * form().gram() * p;
  return SymmetricTriple(MetricLieAlgebra(std::move(rebased), BilinearForm(std::move(gram))), h_, m_);
}

namespace {

// Basis of {T : m -> m | T selfadjoint w.r.t. gm, [T, ad_a] = 0 for all a}.
std::vector<Matrix> selfadjoint_commutant(const Matrix& gm, const std::vector<Matrix>& ads) {
  std::size_t dm = gm.rows();
  std::size_t unknowns = dm * dm;
  std::vector<Vector> rows;
  auto row_of = [&](const std::vector<std::pair<std::size_t, Rational>>& terms) {
    Vector r(unknowns, Rational(0));
    for (const auto& [idx, val] : terms) r[idx] += val;
    return r;
  };
  // (gm T)_{ij} = (gm T)_{ji}
  for (std::size_t i = 0; i < dm; ++i)
    for (std::size_t j = i + 1; j < dm; ++j) {
      std::vector<std::pair<std::size_t, Rational>> terms;
      for (std::size_t k = 0; k < dm; ++k) {
        terms.push_back({k * dm + j, gm(i, k)});
        terms.push_back({k * dm + i, -gm(j, k)});
      }
      rows.push_back(row_of(terms));
    }
  // T ad - ad T = 0
  for (const auto& ad : ads)
    for (std::size_t i = 0; i < dm; ++i)
      for (std::size_t j = 0; j < dm; ++j) {
        std::vector<std::pair<std::size_t, Rational>> terms;
        for (std::size_t k = 0; k < dm; ++k) {
          terms.push_back({i * dm + k, ad(k, j)});
          terms.push_back({k * dm + j, -ad(i, k)});
        }
        rows.push_back(row_of(terms));
      }
  Matrix sys(rows.size(), unknowns);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < unknowns; ++c) sys(r, c) = rows[r][c];
  Matrix ker = sys.kernel();
  std::vector<Matrix> basis;
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    Matrix t(dm, dm);
    for (std::size_t i = 0; i < dm; ++i)
      for (std::size_t j = 0; j < dm; ++j) t(i, j) = ker(i * dm + j, c);
    basis.push_back(std::move(t));
  }
  return basis;
}

bool is_scalar_matrix(const Matrix& t) {
  Matrix s = Matrix::identity(t.rows()) * t(0, 0);
  return t == s;
}

std::optional<std::pair<Subspace, Subspace>> try_split_operator(const Matrix& t, const Matrix& gm,
                                                                const std::vector<Matrix>& ads) {
  std::size_t dm = t.rows();
  if (is_scalar_matrix(t)) return std::nullopt;
  Poly mp = minimal_polynomial(t);
  for (const auto& root : mp.rational_roots()) {
    Poly lin = Poly::x_minus(root);
    Poly p1 = Poly::constant(1);
    Poly rest = mp;
    while (true) {
      auto [q, r] = Poly::divmod(rest, lin);
      if (!r.is_zero()) break;
      p1 = p1 * lin;
      rest = q;
    }
    if (rest.degree() == 0) continue;  // single eigenvalue, no split
    Matrix m1op = poly_apply(p1, t), m2op = poly_apply(rest, t);
    Matrix k1 = m1op.kernel(), k2 = m2op.kernel();
    if (k1.cols() == 0 || k2.cols() == 0 || k1.cols() + k2.cols() != dm) continue;
    auto collect = [dm](const Matrix& k) {
      std::vector<Vector> v;
      for (std::size_t c = 0; c < k.cols(); ++c) v.push_back(k.column(c));
      return Subspace::span(dm, v);
    };
    Subspace v1 = collect(k1), v2 = collect(k2);
    // Validate: invariance under ad(h), mutual orthogonality, nonsingularity.
    BilinearForm bm{gm};
    auto good = [&](const Subspace& v) {
      for (const auto& ad : ads)
        for (const auto& b : v.basis())
          if (!v.contains(ad.apply(b))) return false;
      Matrix g = bm.restrict_gram(v.basis());
      return g.rank() == v.dim();
    };
    bool ortho = true;
    for (const auto& a : v1.basis())
      for (const auto& b : v2.basis()) ortho = ortho && bm.eval(a, b).is_zero();
    if (good(v1) && good(v2) && ortho) return std::make_pair(v1, v2);
  }
  return std::nullopt;
}

}  // namespace

DecompositionResult SymmetricTriple::decomposability() const {
  DecompositionResult res;
  std::size_t dm = m_.size();
  if (dm <= 1) {
    res.kind = DecompositionResult::Kind::Indecomposable;
    res.reason = "dim(m) <= 1";
    return res;
  }
  Matrix gm = form_on_m().gram();
  std::vector<Matrix> ads;
  for (std::size_t a = 0; a < h_.size(); ++a) ads.push_back(ad_m(h_basis_vector(a)));

  std::vector<Matrix> commutant = selfadjoint_commutant(gm, ads);
  std::vector<Matrix> candidates = commutant;
  for (std::size_t a = 0; a < commutant.size(); ++a)
    for (std::size_t b = a + 1; b < commutant.size(); ++b)
      candidates.push_back(commutant[a] + commutant[b]);
  for (const auto& t : candidates) {
    if (auto split = try_split_operator(t, gm, ads)) {
      res.kind = DecompositionResult::Kind::Decomposable;
      res.m1 = split->first;
      res.m2 = split->second;
      res.reason = "commutant operator with split minimal polynomial";
      return res;
    }
  }

  if (commutant.size() == 1) {
    res.kind = DecompositionResult::Kind::Indecomposable;
    res.reason = "selfadjoint commutant of ad(h) is trivial";
    return res;
  }

  if (is_solvable()) {
    Subspace z = center_in_m();
    if (z.dim() == 1) {
      res.kind = DecompositionResult::Kind::Indecomposable;
      res.reason = "solvable with 1-dimensional center";
      return res;
    }
    Signature sig = m_signature();
    std::size_t p = std::min(sig.neg, sig.pos);
    if (z.dim() == p && p >= 1 && is_totally_isotropic(z, form_on_m())) {
      // Least nilpotent test: K = {v in z-perp : [m,[m,v]] in z} must equal z.
      // The kernel of v -> ([m_a,[m_b,v]] mod z)_{a,b} over z-perp computes K.
      Subspace zperp = orthogonal_complement(z, form_on_m());
      std::vector<Vector> quot = z.quotient_basis(Subspace::full(dm));
      std::vector<Vector> full_basis = z.basis();
      full_basis.insert(full_basis.end(), quot.begin(), quot.end());
      Matrix change_inv = *Matrix::from_columns(dm, full_basis).inverse();
      Matrix sys(dm * dm * quot.size(), zperp.dim());
      for (std::size_t c = 0; c < zperp.dim(); ++c) {
        Vector gv = embed_m(zperp.basis()[c]);
        std::size_t r = 0;
        for (std::size_t a = 0; a < dm; ++a)
          for (std::size_t b = 0; b < dm; ++b) {
            Vector w = project_m(algebra().bracket(m_basis_vector(a),
                                                   algebra().bracket(m_basis_vector(b), gv)));
            Vector coords = change_inv.apply(w);
            for (std::size_t qd = 0; qd < quot.size(); ++qd) sys(r++, c) = coords[z.dim() + qd];
          }
      }
      bool least_nilpotent = sys.kernel().cols() == z.dim();
      if (least_nilpotent) {
        // dim Y = dim h - dim [z-perp, m].
        std::vector<Vector> x_gens;
        for (const auto& v : zperp.basis())
          for (std::size_t b = 0; b < dm; ++b)
            x_gens.push_back(algebra().bracket(embed_m(v), m_basis_vector(b)));
        long dim_x = static_cast<long>(Subspace::span(dim_g(), x_gens).dim());
        long dim_y = static_cast<long>(h_.size()) - dim_x;
        long pl = static_cast<long>(p);
        if (2 * dim_y > pl * (pl - 2)) {
          res.kind = DecompositionResult::Kind::Indecomposable;
          res.reason = "maximal center, least nilpotent, dim(Y) > p(p-2)/2";
          return res;
        }
      }
    }
  }

  res.kind = DecompositionResult::Kind::Unknown;
  res.reason = "no commutant split found and no indecomposability criterion fired";
  return res;
}

SymmetricTriple extend_form(const LieAlgebra& algebra, const std::vector<std::size_t>& h_indices,
                            const std::vector<std::size_t>& m_indices, const Matrix& gram_m) {
  std::size_t n = algebra.dim();
  std::size_t dm = m_indices.size();
  if (gram_m.rows() != dm || !gram_m.is_symmetric())
    throw std::invalid_argument("extend_form: bad m-form");
  BilinearForm bm{gram_m};
  if (!bm.nondegenerate()) throw std::invalid_argument("extend_form: B_m degenerate");

  auto m_vec = [&](std::size_t a) { return algebra.basis_vector(m_indices[a]); };
  auto m_coords = [&](const Vector& g_vec) {
    Vector out(dm, Rational(0));
    for (std::size_t a = 0; a < dm; ++a) out[a] = g_vec[m_indices[a]];
    return out;
  };

  // Check ad(h)|_m-invariance of B_m.
  for (auto hi : h_indices) {
    Vector h = algebra.basis_vector(hi);
    for (std::size_t a = 0; a < dm; ++a)
      for (std::size_t b = a; b < dm; ++b) {
        Rational r = bm.eval(m_coords(algebra.bracket(h, m_vec(a))), m_coords(m_vec(b))) +
                     bm.eval(m_coords(m_vec(a)), m_coords(algebra.bracket(h, m_vec(b))));
        if (!r.is_zero()) throw std::invalid_argument("extend_form: B_m not ad(h)-invariant");
      }
  }

  // Express each h-basis element in the span of [m,m].
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < dm; ++a)
    for (std::size_t b = a + 1; b < dm; ++b) pairs.push_back({a, b});
  Matrix span(n, pairs.size());
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    Vector br = algebra.bracket(m_vec(pairs[c].first), m_vec(pairs[c].second));
    for (std::size_t i = 0; i < n; ++i) span(i, c) = br[i];
  }
  std::vector<Vector> presentations;
  for (auto hi : h_indices) {
    auto sol = span.solve(algebra.basis_vector(hi));
    if (!sol) throw std::invalid_argument("extend_form: h not generated by [m,m]");
    presentations.push_back(*sol);
  }

  // B_h(h_r, h_s) = sum over pairs of c * B_m([h_r, X], Y).
  std::size_t dh = h_indices.size();
  Matrix gram_h(dh, dh);
  for (std::size_t r = 0; r < dh; ++r) {
    Vector hr = algebra.basis_vector(h_indices[r]);
    for (std::size_t s = 0; s < dh; ++s) {
      Rational acc;
      for (std::size_t c = 0; c < pairs.size(); ++c) {
        if (presentations[s][c].is_zero()) continue;
        Vector hx = m_coords(algebra.bracket(hr, m_vec(pairs[c].first)));
        acc += presentations[s][c] * bm.eval(hx, m_coords(m_vec(pairs[c].second)));
      }
      gram_h(r, s) = acc;
    }
  }
  if (!gram_h.is_symmetric()) throw std::logic_error("extend_form: extension not symmetric");
  if (gram_h.rank() != dh)
    throw std::invalid_argument("extend_form: extension degenerate (isotropy not faithful)");

  Matrix gram(n, n);
  for (std::size_t a = 0; a < dm; ++a)
    for (std::size_t b = 0; b < dm; ++b) gram(m_indices[a], m_indices[b]) = gram_m(a, b);
  for (std::size_t r = 0; r < dh; ++r)
    for (std::size_t s = 0; s < dh; ++s) gram(h_indices[r], h_indices[s]) = gram_h(r, s);
  return SymmetricTriple(MetricLieAlgebra(algebra, BilinearForm(std::move(gram))), h_indices,
                         m_indices);
}

}  // namespace triplekit
