#include "triplekit/coeffs.hpp"

#include <stdexcept>

namespace triplekit {

CoefficientSet::CoefficientSet(std::size_t p, std::size_t s)
    : p_(p),
      s_(s),
      a_(p * p * p * s, Rational(0)),
      b_(p * p * p * p, Rational(0)),
      f_(p * p * s * s, Rational(0)) {}

Rational& CoefficientSet::a(std::size_t i, std::size_t j, std::size_t k, std::size_t al) {
  return a_[((i * p_ + j) * p_ + k) * s_ + al];
}
const Rational& CoefficientSet::a(std::size_t i, std::size_t j, std::size_t k,
                                  std::size_t al) const {
  return a_[((i * p_ + j) * p_ + k) * s_ + al];
}
Rational& CoefficientSet::b(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
  return b_[((i * p_ + j) * p_ + k) * p_ + l];
}
const Rational& CoefficientSet::b(std::size_t i, std::size_t j, std::size_t k,
                                  std::size_t l) const {
  return b_[((i * p_ + j) * p_ + k) * p_ + l];
}
Rational& CoefficientSet::f(std::size_t i, std::size_t j, std::size_t al, std::size_t be) {
  return f_[((i * p_ + j) * s_ + al) * s_ + be];
}
const Rational& CoefficientSet::f(std::size_t i, std::size_t j, std::size_t al,
                                  std::size_t be) const {
  return f_[((i * p_ + j) * s_ + al) * s_ + be];
}

std::vector<RelationViolation> coefficient_relations_check(const CoefficientSet& c) {
  std::vector<RelationViolation> out;
  std::size_t p = c.p(), s = c.s();
  auto add = [&out](const char* rel, std::initializer_list<std::size_t> idx) {
    out.push_back({rel, std::vector<std::size_t>(idx)});
  };

  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t al = 0; al < s; ++al) {
          if (c.a(i, j, k, al) != -c.a(j, i, k, al)) add("a-skew", {i, j, k, al});
          if (!(c.a(i, j, k, al) + c.a(j, k, i, al) + c.a(k, i, j, al)).is_zero())
            add("a-bianchi", {i, j, k, al});
        }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t l = 0; l < p; ++l) {
          if (c.b(i, j, k, l) != c.b(k, l, i, j)) add("b-pair", {i, j, k, l});
          if (c.b(i, j, k, l) != -c.b(j, i, k, l)) add("b-skew12", {i, j, k, l});
          if (c.b(i, j, k, l) != -c.b(i, j, l, k)) add("b-skew34", {i, j, k, l});
          if (!(c.b(i, j, k, l) + c.b(j, k, i, l) + c.b(k, i, j, l)).is_zero())
            add("b-bianchi", {i, j, k, l});
        }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t al = 0; al < s; ++al)
        for (std::size_t be = 0; be < s; ++be) {
          if (c.f(i, j, al, be) != c.f(j, i, al, be)) add("f-sym-ij", {i, j, al, be});
          if (c.f(i, j, al, be) != c.f(i, j, be, al)) add("f-sym-ab", {i, j, al, be});
        }

  // f_{ik a g} f_{jl b g} = f_{il a g} f_{jk b g}
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t l = 0; l < p; ++l)
          for (std::size_t al = 0; al < s; ++al)
            for (std::size_t be = 0; be < s; ++be) {
              Rational lhs, rhs;
              for (std::size_t ga = 0; ga < s; ++ga) {
                lhs += c.f(i, k, al, ga) * c.f(j, l, be, ga);
                rhs += c.f(i, l, al, ga) * c.f(j, k, be, ga);
              }
              if (lhs != rhs) add("ff", {i, j, k, l, al, be});
            }
  // f_{im a g} a_{kln g} = f_{in a g} a_{klm g}
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t m = 0; m < p; ++m)
      for (std::size_t n = 0; n < p; ++n)
        for (std::size_t k = 0; k < p; ++k)
          for (std::size_t l = 0; l < p; ++l)
            for (std::size_t al = 0; al < s; ++al) {
              Rational lhs, rhs;
              for (std::size_t ga = 0; ga < s; ++ga) {
                lhs += c.f(i, m, al, ga) * c.a(k, l, n, ga);
                rhs += c.f(i, n, al, ga) * c.a(k, l, m, ga);
              }
              if (lhs != rhs) add("fa", {i, m, n, k, l, al});
            }
  // a_{ijm g} a_{kln g} - a_{klm g} a_{ijn g} = a_{ijk g} a_{mnl g} - a_{ijl g} a_{mnk g}
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t l = 0; l < p; ++l)
          for (std::size_t m = 0; m < p; ++m)
            for (std::size_t n = 0; n < p; ++n) {
              Rational lhs, rhs;
              for (std::size_t ga = 0; ga < s; ++ga) {
                lhs += c.a(i, j, m, ga) * c.a(k, l, n, ga) - c.a(k, l, m, ga) * c.a(i, j, n, ga);
                rhs += c.a(i, j, k, ga) * c.a(m, n, l, ga) - c.a(i, j, l, ga) * c.a(m, n, k, ga);
              }
              if (lhs != rhs) add("aa", {i, j, k, l, m, n});
            }
  return out;
}

namespace {

struct MaxCenterLayout {
  std::size_t p, s;
  std::size_t dim_y, dim_x, dim_h, dim;
  std::size_t y(std::size_t i, std::size_t j) const {  // i < j
    std::size_t idx = 0;
    for (std::size_t a = 0; a < p; ++a)
      for (std::size_t b = a + 1; b < p; ++b) {
        if (a == i && b == j) return idx;
        ++idx;
      }
    throw std::logic_error("layout: bad y index");
  }
  std::size_t x(std::size_t i, std::size_t al) const { return dim_y + i * s + al; }
  std::size_t z(std::size_t i) const { return dim_h + i; }
  std::size_t w(std::size_t al) const { return dim_h + p + al; }
  std::size_t zs(std::size_t i) const { return dim_h + p + s + i; }
};

MaxCenterLayout layout_for(std::size_t p, std::size_t s) {
  MaxCenterLayout lo;
  lo.p = p;
  lo.s = s;
  lo.dim_y = p * (p - 1) / 2;
  lo.dim_x = p * s;
  lo.dim_h = lo.dim_y + lo.dim_x;
  lo.dim = lo.dim_h + 2 * p + s;
  return lo;
}

}  // namespace

RawMaxCenter build_max_center_raw(const CoefficientSet& c) {
  std::size_t p = c.p(), s = c.s();
  if (p == 0) throw std::invalid_argument("build_max_center_raw: p must be positive");
  MaxCenterLayout lo = layout_for(p, s);

  std::vector<std::string> labels(lo.dim);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      labels[lo.y(i, j)] = "Y" + std::to_string(i + 1) + std::to_string(j + 1);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t al = 0; al < s; ++al)
      labels[lo.x(i, al)] = "X" + std::to_string(i + 1) + "_" + std::to_string(al + 1);
  for (std::size_t i = 0; i < p; ++i) labels[lo.z(i)] = "Z" + std::to_string(i + 1);
  for (std::size_t al = 0; al < s; ++al) labels[lo.w(al)] = "W" + std::to_string(al + 1);
  for (std::size_t i = 0; i < p; ++i) labels[lo.zs(i)] = "Z" + std::to_string(i + 1) + "*";

  // Signed access to Y_{ij} for arbitrary index order.
  auto add_y = [&](Vector& v, std::size_t i, std::size_t j, const Rational& coef) {
    if (i == j || coef.is_zero()) return;
    if (i < j)
      v[lo.y(i, j)] += coef;
    else
      v[lo.y(j, i)] -= coef;
  };

  std::vector<BracketEntry> entries;
  auto put = [&](std::size_t i, std::size_t j, Vector coeffs) {
    if (is_zero_vector(coeffs)) return;
    if (i < j)
      entries.push_back({i, j, std::move(coeffs)});
    else {
      Vector neg(coeffs.size());
      for (std::size_t k = 0; k < coeffs.size(); ++k) neg[k] = -coeffs[k];
      entries.push_back({j, i, std::move(neg)});
    }
  };

  // [Z_i*, Z_j*] = Y_ij (i < j)
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) {
      Vector v(lo.dim, Rational(0));
      add_y(v, i, j, Rational(1));
      put(lo.zs(i), lo.zs(j), std::move(v));
    }
  // [Z_i*, W_al] = X_{i al}
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t al = 0; al < s; ++al) {
      Vector v(lo.dim, Rational(0));
      v[lo.x(i, al)] = 1;
      put(lo.zs(i), lo.w(al), std::move(v));
    }
  // [Y_ij, Z_k*] = a_{ijk g} W_g + b_{ijkl} Z_l
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k) {
        Vector v(lo.dim, Rational(0));
        for (std::size_t ga = 0; ga < s; ++ga) v[lo.w(ga)] += c.a(i, j, k, ga);
        for (std::size_t l = 0; l < p; ++l) v[lo.z(l)] += c.b(i, j, k, l);
        put(lo.y(i, j), lo.zs(k), std::move(v));
      }
  // [Y_ij, W_al] = -a_{ijl al} Z_l
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      for (std::size_t al = 0; al < s; ++al) {
        Vector v(lo.dim, Rational(0));
        for (std::size_t l = 0; l < p; ++l) v[lo.z(l)] -= c.a(i, j, l, al);
        put(lo.y(i, j), lo.w(al), std::move(v));
      }
  // [X_{i al}, Z_k*] = f_{ik al g} W_g + a_{kl i al} Z_l
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t al = 0; al < s; ++al)
      for (std::size_t k = 0; k < p; ++k) {
        Vector v(lo.dim, Rational(0));
        for (std::size_t ga = 0; ga < s; ++ga) v[lo.w(ga)] += c.f(i, k, al, ga);
        for (std::size_t l = 0; l < p; ++l) v[lo.z(l)] += c.a(k, l, i, al);
        put(lo.x(i, al), lo.zs(k), std::move(v));
      }
  // [X_{i al}, W_be] = -f_{il al be} Z_l
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t al = 0; al < s; ++al)
      for (std::size_t be = 0; be < s; ++be) {
        Vector v(lo.dim, Rational(0));
        for (std::size_t l = 0; l < p; ++l) v[lo.z(l)] -= c.f(i, l, al, be);
        put(lo.x(i, al), lo.w(be), std::move(v));
      }
  // [Y_ij, Y_kl] = a_{ijl g} X_{k g} - a_{ijk g} X_{l g}
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t l = k + 1; l < p; ++l) {
          if (lo.y(i, j) >= lo.y(k, l)) continue;
          Vector v(lo.dim, Rational(0));
          for (std::size_t ga = 0; ga < s; ++ga) {
            v[lo.x(k, ga)] += c.a(i, j, l, ga);
            v[lo.x(l, ga)] -= c.a(i, j, k, ga);
          }
          put(lo.y(i, j), lo.y(k, l), std::move(v));
        }

  LieAlgebra alg(lo.dim, entries, labels);
  std::vector<std::size_t> h_idx, m_idx;
  for (std::size_t i = 0; i < lo.dim_h; ++i) h_idx.push_back(i);
  for (std::size_t i = lo.dim_h; i < lo.dim; ++i) m_idx.push_back(i);

  std::size_t dm = 2 * p + s;
  Matrix gram(dm, dm);
  for (std::size_t i = 0; i < p; ++i) gram(i, p + s + i) = gram(p + s + i, i) = Rational(1);
  for (std::size_t al = 0; al < s; ++al) gram(p + al, p + al) = Rational(1);
  return RawMaxCenter{std::move(alg), std::move(h_idx), std::move(m_idx), std::move(gram), p, s};
}

namespace {

struct ReducedMaxCenter {
  bool lie_ok = false;
  LieAlgebra algebra{0, {}};
  std::vector<std::size_t> h_indices, m_indices;
  Matrix gram_m;
};

ReducedMaxCenter reduce_max_center(const CoefficientSet& c);

}  // namespace

bool max_center_jacobi_ok(const CoefficientSet& c) { return reduce_max_center(c).lie_ok; }

SymmetricTriple max_center_triple(const CoefficientSet& c) {
  ReducedMaxCenter red = reduce_max_center(c);
  if (!red.lie_ok)
    throw std::invalid_argument("max_center_triple: coefficients violate the Jacobi identity");
  return extend_form(red.algebra, red.h_indices, red.m_indices, red.gram_m);
}

namespace {

ReducedMaxCenter reduce_max_center(const CoefficientSet& c) {
  RawMaxCenter raw = build_max_center_raw(c);
  ReducedMaxCenter out;
  out.gram_m = raw.gram_m;

  // K = ker(ad(.)|_m) on h~.
  std::size_t dim_h = raw.h_indices.size(), dm = raw.m_indices.size();
  Matrix sys(dm * dm, dim_h);
  for (std::size_t a = 0; a < dim_h; ++a) {
    Vector ha = raw.algebra.basis_vector(raw.h_indices[a]);
    for (std::size_t b = 0; b < dm; ++b) {
      Vector col = raw.algebra.bracket(ha, raw.algebra.basis_vector(raw.m_indices[b]));
      for (std::size_t r = 0; r < dm; ++r) sys(b * dm + r, a) = col[raw.m_indices[r]];
    }
  }
  Matrix ker = sys.kernel();
  if (ker.cols() == 0) {
    out.lie_ok = raw.algebra.jacobi_ok();
    out.algebra = raw.algebra;
    out.h_indices = raw.h_indices;
    out.m_indices = raw.m_indices;
    return out;
  }

  std::vector<Vector> ker_vecs;
  for (std::size_t cix = 0; cix < ker.cols(); ++cix) ker_vecs.push_back(ker.column(cix));
  Subspace kernel_h = Subspace::span(dim_h, ker_vecs);

  // K must be an ideal of the table brackets ([K, m] = 0 by definition).
  auto embed_h = [&](const Vector& h_vec) {
    Vector g(raw.algebra.dim(), Rational(0));
    for (std::size_t a = 0; a < dim_h; ++a) g[raw.h_indices[a]] = h_vec[a];
    return g;
  };
  for (const auto& k : kernel_h.basis())
    for (std::size_t b = 0; b < raw.algebra.dim(); ++b) {
      Vector br = raw.algebra.bracket(embed_h(k), raw.algebra.basis_vector(b));
      Vector h_part(dim_h, Rational(0));
      bool h_supported = true;
      for (std::size_t a = 0; a < dim_h; ++a) h_part[a] = br[raw.h_indices[a]];
      for (std::size_t a = 0; a < dm; ++a)
        if (!br[raw.m_indices[a]].is_zero()) h_supported = false;
      if (!h_supported || !kernel_h.contains(h_part)) return out;  // not a Lie algebra
    }

  std::vector<Vector> reps = kernel_h.quotient_basis(Subspace::full(dim_h));

  std::size_t new_dh = reps.size();
  std::size_t new_dim = new_dh + dm;
  // Old-to-new projection: express any h~ vector in kernel+reps coordinates
  // and drop the kernel part.
  std::vector<Vector> mix = kernel_h.basis();
  mix.insert(mix.end(), reps.begin(), reps.end());
  Matrix mix_inv = *Matrix::from_columns(dim_h, mix).inverse();

  auto project_g = [&](const Vector& g_vec) {
    Vector h_part(dim_h, Rational(0));
    for (std::size_t a = 0; a < dim_h; ++a) h_part[a] = g_vec[raw.h_indices[a]];
    Vector coords = mix_inv.apply(h_part);
    Vector out(new_dim, Rational(0));
    for (std::size_t r = 0; r < new_dh; ++r) out[r] = coords[kernel_h.dim() + r];
    for (std::size_t b = 0; b < dm; ++b) out[new_dh + b] = g_vec[raw.m_indices[b]];
    return out;
  };
  auto lift_new = [&](std::size_t idx) {
    Vector g(raw.algebra.dim(), Rational(0));
    if (idx < new_dh) {
      for (std::size_t a = 0; a < dim_h; ++a) g[raw.h_indices[a]] = reps[idx][a];
    } else {
      g[raw.m_indices[idx - new_dh]] = 1;
    }
    return g;
  };

  std::vector<BracketEntry> entries;
  for (std::size_t i = 0; i < new_dim; ++i)
    for (std::size_t j = i + 1; j < new_dim; ++j) {
      Vector br = project_g(raw.algebra.bracket(lift_new(i), lift_new(j)));
      if (!is_zero_vector(br)) entries.push_back({i, j, std::move(br)});
    }
  std::vector<std::string> labels;
  for (std::size_t r = 0; r < new_dh; ++r) labels.push_back("h" + std::to_string(r + 1));
  for (std::size_t b = 0; b < dm; ++b) labels.push_back(raw.algebra.labels()[raw.m_indices[b]]);
  LieAlgebra reduced(new_dim, entries, labels);
  out.lie_ok = reduced.jacobi_ok();
  out.algebra = std::move(reduced);
  for (std::size_t i = 0; i < new_dh; ++i) out.h_indices.push_back(i);
  for (std::size_t i = new_dh; i < new_dim; ++i) out.m_indices.push_back(i);
  return out;
}

}  // namespace

CoefficientSet extract_coefficients(const SymmetricTriple& t, const std::vector<Vector>& z_basis,
                                    const std::vector<Vector>& w_basis,
                                    const std::vector<Vector>& zstar_basis) {
  std::size_t p = z_basis.size(), s = w_basis.size();
  if (zstar_basis.size() != p || 2 * p + s != t.dim_m())
    throw std::invalid_argument("extract_coefficients: basis sizes do not match m");
  std::vector<Vector> all = z_basis;
  all.insert(all.end(), w_basis.begin(), w_basis.end());
  all.insert(all.end(), zstar_basis.begin(), zstar_basis.end());
  Matrix change = Matrix::from_columns(t.dim_m(), all);
  auto inv = change.inverse();
  if (!inv) throw std::invalid_argument("extract_coefficients: vectors do not form a basis");

  const LieAlgebra& g = t.algebra();
  auto lift = [&](const Vector& m_vec) { return t.embed_m(m_vec); };
  auto coords = [&](const Vector& g_vec) { return inv->apply(t.project_m(g_vec)); };

  CoefficientSet c(p, s);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      Vector y = g.bracket(lift(zstar_basis[i]), lift(zstar_basis[j]));
      for (std::size_t k = 0; k < p; ++k) {
        Vector v = coords(g.bracket(y, lift(zstar_basis[k])));
        for (std::size_t ga = 0; ga < s; ++ga) c.a(i, j, k, ga) = v[p + ga];
        for (std::size_t l = 0; l < p; ++l) c.b(i, j, k, l) = v[l];
      }
    }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t al = 0; al < s; ++al) {
      Vector x = g.bracket(lift(zstar_basis[i]), lift(w_basis[al]));
      for (std::size_t k = 0; k < p; ++k) {
        Vector v = coords(g.bracket(x, lift(zstar_basis[k])));
        for (std::size_t ga = 0; ga < s; ++ga) c.f(i, k, al, ga) = v[p + ga];
      }
    }
  return c;
}

}  // namespace triplekit
