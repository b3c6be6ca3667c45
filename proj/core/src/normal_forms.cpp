#include "triplekit/normal_forms.hpp"

#include <stdexcept>

namespace triplekit {

namespace {

// Assembles a triple from a bracket list over an (h..., m...) ordered basis
// and the m-form; B|h comes from the invariant extension. Verifies the
// result.
SymmetricTriple assemble(std::size_t dh, std::size_t dm, const std::vector<BracketEntry>& entries,
                         const Matrix& gram_m, const std::vector<std::string>& labels) {
  LieAlgebra alg(dh + dm, entries, labels);
  std::vector<std::size_t> h_idx, m_idx;
  for (std::size_t i = 0; i < dh; ++i) h_idx.push_back(i);
  for (std::size_t i = dh; i < dh + dm; ++i) m_idx.push_back(i);
  SymmetricTriple t = extend_form(alg, h_idx, m_idx, gram_m);
  TripleReport rep = t.verify();
  if (!rep.pass())
    throw std::logic_error("normal form failed verification:\n" + rep.summary());
  return t;
}

Matrix witt_pairs_plus_euclid(std::size_t p, std::size_t s) {
  // Order: Z_1..Z_p, W_1..W_s, Z*_1..Z*_p.
  std::size_t dm = 2 * p + s;
  Matrix g(dm, dm);
  for (std::size_t i = 0; i < p; ++i) g(i, p + s + i) = g(p + s + i, i) = Rational(1);
  for (std::size_t al = 0; al < s; ++al) g(p + al, p + al) = Rational(1);
  return g;
}

void require_pairs_nonzero(const std::vector<Rational>& l1, const std::vector<Rational>& l2) {
  if (l1.size() != l2.size()) throw std::invalid_argument("lambda vectors must have equal length");
  for (std::size_t al = 0; al < l1.size(); ++al)
    if (l1[al].is_zero() && l2[al].is_zero())
      throw std::invalid_argument("(lambda_1^a, lambda_2^a) = (0,0) at alpha = " +
                                  std::to_string(al + 1));
}

std::vector<int> epsilon_signs(std::size_t r, std::size_t s) {
  if (r > s) throw std::invalid_argument("r exceeds the W dimension");
  std::vector<int> eps(s, 1);
  for (std::size_t al = 0; al < r; ++al) eps[al] = -1;
  return eps;
}

}  // namespace

SymmetricTriple build_lorentz(const std::vector<Rational>& f) {
  for (std::size_t al = 0; al < f.size(); ++al)
    if (f[al].is_zero())
      throw std::invalid_argument("build_lorentz: f^" + std::to_string(al + 1) + " = 0");
  std::size_t s = f.size();
  std::size_t dh = s, dm = s + 2;
  // h: X_1..X_s; m: Z, W_1..W_s, Z*.
  std::vector<std::string> labels;
  for (std::size_t al = 0; al < s; ++al) labels.push_back("X" + std::to_string(al + 1));
  labels.push_back("Z");
  for (std::size_t al = 0; al < s; ++al) labels.push_back("W" + std::to_string(al + 1));
  labels.push_back("Z*");
  std::size_t z = dh, w0 = dh + 1, zs = dh + 1 + s;

  std::vector<BracketEntry> entries;
  auto unit = [&](std::size_t idx, const Rational& c) {
    Vector v(dh + dm, Rational(0));
    v[idx] = c;
    return v;
  };
  for (std::size_t al = 0; al < s; ++al) {
    // [Z*, W_al] = X_al  (stored as [W_al, Z*] = -X_al)
    entries.push_back({w0 + al, zs, unit(al, Rational(-1))});
    // [X_al, Z*] = f^al W_al
    entries.push_back({al, zs, unit(w0 + al, f[al])});
    // [X_al, W_al] = -f^al Z
    entries.push_back({al, w0 + al, unit(z, -f[al])});
  }
  return assemble(dh, dm, entries, witt_pairs_plus_euclid(1, s), labels);
}

SymmetricTriple build_least_nilpotent_pq(std::size_t p, const std::vector<Rational>& b_coeffs,
                                         const std::vector<int>& epsilon,
                                         const std::vector<Vector>& lambda) {
  std::size_t s = epsilon.size();
  if (p == 0) throw std::invalid_argument("build_least_nilpotent_pq: p = 0");
  if (b_coeffs.size() != p * p * p * p)
    throw std::invalid_argument("build_least_nilpotent_pq: b tensor must have p^4 entries");
  if (lambda.size() != s)
    throw std::invalid_argument("build_least_nilpotent_pq: need one Lambda per epsilon");

  CoefficientSet c(p, s);
  auto b_at = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return b_coeffs[((i * p + j) * p + k) * p + l];
  };
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k)
        for (std::size_t l = 0; l < p; ++l) c.b(i, j, k, l) = b_at(i, j, k, l);
  for (std::size_t al = 0; al < s; ++al) {
    if (lambda[al].size() != p)
      throw std::invalid_argument("build_least_nilpotent_pq: Lambda must live in z");
    if (is_zero_vector(lambda[al]))
      throw std::invalid_argument("build_least_nilpotent_pq: Lambda_" + std::to_string(al + 1) +
                                  " = 0");
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < p; ++j)
        c.f(i, j, al, al) = Rational(epsilon[al]) * lambda[al][i] * lambda[al][j];
  }
  // b must be an algebraic curvature tensor; a = 0, f as above.
  for (const auto& v : coefficient_relations_check(c))
    if (v.relation.rfind("b-", 0) == 0)
      throw std::invalid_argument("build_least_nilpotent_pq: b violates " + v.relation);

  // Closure [h, m] = z + W: b(Y, z*) + span{Lambda} = z.
  std::vector<Vector> span_z;
  for (std::size_t al = 0; al < s; ++al) span_z.push_back(lambda[al]);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k) {
        Vector v(p, Rational(0));
        for (std::size_t l = 0; l < p; ++l) v[l] = b_at(i, j, k, l);
        span_z.push_back(std::move(v));
      }
  Subspace reached = Subspace::span(p, span_z);
  if (reached.dim() != p) {
    std::string missing = "closure [h,m] = z + W fails; reached subspace of dim " +
                          std::to_string(reached.dim()) + " < " + std::to_string(p);
    throw std::invalid_argument("build_least_nilpotent_pq: " + missing);
  }
  return max_center_triple(c);
}

namespace {

// Shared scaffolding for the signature-(2, n-2) families: p = 2 with W-basis
// (regular W_1..W_s, then extra nilpotent slots), assembled from the
// maximal-center coefficient table.
SymmetricTriple family_I_II(std::optional<int> eps_y, std::size_t r,
                            const std::vector<Rational>& l1, const std::vector<Rational>& l2,
                            std::size_t nil_slots) {
  require_pairs_nonzero(l1, l2);
  std::size_t sreg = l1.size();
  std::vector<int> eps = epsilon_signs(r, sreg);
  std::size_t s = sreg + nil_slots;
  CoefficientSet c(2, s);
  for (std::size_t al = 0; al < sreg; ++al) {
    Rational e(eps[al]);
    c.f(0, 0, al, al) = e * l1[al] * l1[al];
    c.f(0, 1, al, al) = e * l1[al] * l2[al];
    c.f(1, 0, al, al) = e * l1[al] * l2[al];
    c.f(1, 1, al, al) = e * l2[al] * l2[al];
  }
  // b_{1212} = eps_Y when the y-generator is present.
  if (eps_y) {
    Rational e(*eps_y);
    c.b(0, 1, 0, 1) = e;
    c.b(0, 1, 1, 0) = -e;
    c.b(1, 0, 0, 1) = -e;
    c.b(1, 0, 1, 0) = e;
  }
  // Nilpotent a-slots: a_{12 k slot} with the identity pattern a_i^j = delta.
  for (std::size_t j = 0; j < nil_slots; ++j) {
    std::size_t slot = sreg + j;
    c.a(0, 1, j, slot) = Rational(1);
    c.a(1, 0, j, slot) = Rational(-1);
  }
  return max_center_triple(c);
}

}  // namespace

SymmetricTriple build_Ia(int eps_y, std::size_t r, const std::vector<Rational>& l1,
                         const std::vector<Rational>& l2) {
  if (eps_y != 1 && eps_y != -1) throw std::invalid_argument("build_Ia: eps_Y must be +-1");
  return family_I_II(eps_y, r, l1, l2, 0);
}

SymmetricTriple build_Ib(std::size_t r, const std::vector<Rational>& l1,
                         const std::vector<Rational>& l2) {
  require_pairs_nonzero(l1, l2);
  Matrix lm(2, l1.size());
  for (std::size_t al = 0; al < l1.size(); ++al) {
    lm(0, al) = l1[al];
    lm(1, al) = l2[al];
  }
  if (lm.rank() != 2)
    throw std::invalid_argument("build_Ib: rank(lambda) = 2 required for [h,m] = z + W");
  return family_I_II(std::nullopt, r, l1, l2, 0);
}

SymmetricTriple build_IIa(std::size_t r, const std::vector<Rational>& l1,
                          const std::vector<Rational>& l2) {
  // y is present: b is transformed to 0 in the normal form, but the
  // y-generator survives through the nilpotent a-slot.
  return family_I_II(std::nullopt, r, l1, l2, 1);
}

SymmetricTriple build_IIb(std::size_t r, const std::vector<Rational>& l1,
                          const std::vector<Rational>& l2) {
  return family_I_II(std::nullopt, r, l1, l2, 2);
}

SymmetricTriple build_nil22(int eps_y) {
  if (eps_y != 1 && eps_y != -1) throw std::invalid_argument("build_nil22: eps_Y must be +-1");
  return family_I_II(eps_y, 0, {}, {}, 0);
}

SymmetricTriple build_nil23() { return family_I_II(std::nullopt, 0, {}, {}, 1); }

SymmetricTriple build_nil24() { return family_I_II(std::nullopt, 0, {}, {}, 2); }

SymmetricTriple build_III(const IIIBlock& block, const std::vector<Rational>& f) {
  for (std::size_t al = 0; al < f.size(); ++al)
    if (f[al].is_zero())
      throw std::invalid_argument("build_III: f_" + std::to_string(al + 1) + " = 0");

  std::size_t block_dim = block.kind == IIIBlock::Kind::None ? 0 : 2;
  std::size_t wn = block_dim + f.size();
  if (wn == 0) throw std::invalid_argument("build_III: empty W");

  // W-Gram and the selfadjoint invertible operator F on W (column
  // convention: F(w_j) = sum_i Fmat(i,j) w_i).
  Matrix gw(wn, wn);
  Matrix fmat(wn, wn);
  switch (block.kind) {
    case IIIBlock::Kind::None: {
      gw(0, 0) = Rational(-1);
      for (std::size_t i = 1; i < wn; ++i) gw(i, i) = Rational(1);
      for (std::size_t i = 0; i < wn; ++i) fmat(i, i) = f[i];
      break;
    }
    case IIIBlock::Kind::DiagEqual: {
      if (block.phi1.is_zero()) throw std::invalid_argument("build_III: singular Phi");
      gw(0, 0) = Rational(-1);
      gw(1, 1) = Rational(1);
      fmat(0, 0) = fmat(1, 1) = block.phi1;
      break;
    }
    case IIIBlock::Kind::JordanPlus:
    case IIIBlock::Kind::JordanMinus: {
      if (block.phi1.is_zero()) throw std::invalid_argument("build_III: singular Phi");
      Rational sgn(block.kind == IIIBlock::Kind::JordanPlus ? 1 : -1);
      gw(0, 1) = gw(1, 0) = sgn;
      // Phi = [[phi, 1], [0, phi]], F = Phi^T in the column convention.
      fmat(0, 0) = fmat(1, 1) = block.phi1;
      fmat(1, 0) = Rational(1);
      break;
    }
    case IIIBlock::Kind::Rotation: {
      if (block.phi1.is_zero() && block.phi2.is_zero())
        throw std::invalid_argument("build_III: singular Phi");
      gw(0, 1) = gw(1, 0) = Rational(1);
      // Phi = [[phi1, phi2], [-phi2, phi1]].
      fmat(0, 0) = fmat(1, 1) = block.phi1;
      fmat(1, 0) = block.phi2;
      fmat(0, 1) = -block.phi2;
      break;
    }
  }
  if (block_dim == 2)
    for (std::size_t i = 0; i < f.size(); ++i) {
      gw(2 + i, 2 + i) = Rational(1);
      fmat(2 + i, 2 + i) = f[i];
    }
  if (!(gw * fmat).is_symmetric()) throw std::logic_error("build_III: F not selfadjoint");
  if (!fmat.inverse()) throw std::invalid_argument("build_III: F must be invertible");

  // h: W*_1..W*_wn; m: Z, W_1..W_wn, Z*.
  std::size_t dh = wn, dm = wn + 2;
  std::vector<std::string> labels;
  for (std::size_t al = 0; al < wn; ++al) labels.push_back("W" + std::to_string(al + 1) + "*");
  labels.push_back("Z");
  for (std::size_t al = 0; al < wn; ++al) labels.push_back("W" + std::to_string(al + 1));
  labels.push_back("Z*");
  std::size_t z = dh, w0 = dh + 1, zs = dh + 1 + wn;

  std::vector<BracketEntry> entries;
  Vector zero(dh + dm, Rational(0));
  for (std::size_t al = 0; al < wn; ++al) {
    Vector v = zero;
    v[al] = Rational(-1);  // [W_al, Z*] = -W*_al
    entries.push_back({w0 + al, zs, v});
    // [W*_al, Z*] = F(W_al)
    Vector fv = zero;
    for (std::size_t be = 0; be < wn; ++be) fv[w0 + be] = fmat(be, al);
    entries.push_back({al, zs, fv});
    // [W*_al, W_be] = -B(F(W_al), W_be) Z
    for (std::size_t be = 0; be < wn; ++be) {
      Rational coef;
      for (std::size_t k = 0; k < wn; ++k) coef += fmat(k, al) * gw(k, be);
      if (coef.is_zero()) continue;
      Vector bv = zero;
      bv[z] = -coef;
      entries.push_back({al, w0 + be, bv});
    }
  }
  Matrix gm(dm, dm);
  gm(0, dm - 1) = gm(dm - 1, 0) = Rational(1);
  for (std::size_t i = 0; i < wn; ++i)
    for (std::size_t j = 0; j < wn; ++j) gm(1 + i, 1 + j) = gw(i, j);
  return assemble(dh, dm, entries, gm, labels);
}

SymmetricTriple build_IV(const Rational& a, const Rational& b, const std::vector<Rational>& f) {
  if (a.is_zero()) throw std::invalid_argument("build_IV: a = 0");
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i].is_zero()) throw std::invalid_argument("build_IV: f_" + std::to_string(i + 1) + " = 0");
  bool case_i = b.is_zero() && (a == Rational(1) || a == Rational(-1));
  bool case_ii = b == Rational(1) && !f.empty() && a == f[0];
  if (!case_i && !case_ii)
    throw std::invalid_argument("build_IV: parameters must satisfy b = 0, |a| = 1 or b = 1, a = f_1");
  if (b == Rational(1) && f.empty()) throw std::invalid_argument("build_IV: case (ii) needs f_1");

  std::size_t su = f.size();
  // h: ebar, Ubar_1..Ubar_su, estar_bar; m: Z, e, w, U_1..U_su, e*, Z*.
  std::size_t dh = su + 2, dm = su + 5;
  std::vector<std::string> labels;
  labels.push_back("ebar");
  for (std::size_t i = 0; i < su; ++i) labels.push_back("Ubar" + std::to_string(i + 1));
  labels.push_back("estarbar");
  labels.push_back("Z");
  labels.push_back("e");
  labels.push_back("w");
  for (std::size_t i = 0; i < su; ++i) labels.push_back("U" + std::to_string(i + 1));
  labels.push_back("e*");
  labels.push_back("Z*");

  std::size_t he = 0, hu0 = 1, hes = su + 1;
  std::size_t mz = dh, me = dh + 1, mw = dh + 2, mu0 = dh + 3, mes = dh + 3 + su, mzs = dh + 4 + su;

  std::vector<BracketEntry> entries;
  std::size_t dim = dh + dm;
  auto put = [&entries, dim](std::size_t i, std::size_t j,
                             std::initializer_list<std::pair<std::size_t, Rational>> terms) {
    Vector v(dim, Rational(0));
    for (const auto& [idx, val] : terms) v[idx] += val;
    if (i < j)
      entries.push_back({i, j, std::move(v)});
    else {
      for (auto& x : v) x = -x;
      entries.push_back({j, i, std::move(v)});
    }
  };

  // [m, m]
  put(mzs, me, {{he, Rational(1)}});
  for (std::size_t i = 0; i < su; ++i) put(mzs, mu0 + i, {{hu0 + i, Rational(1)}});
  put(mzs, mes, {{hes, Rational(1)}});
  put(mes, mw, {{he, a.inverse()}});
  // [h, m]
  put(he, mzs, {{me, a}});
  put(he, mes, {{mz, -a}});
  for (std::size_t i = 0; i < su; ++i) {
    if (i == 0)
      put(hu0, mzs, {{me, b}, {mu0, f[0]}});
    else
      put(hu0 + i, mzs, {{mu0 + i, f[i]}});
    put(hu0 + i, mu0 + i, {{mz, -f[i]}});
  }
  if (!b.is_zero() && su > 0) {
    put(hu0, mes, {{mz, -b}});
    put(hes, mu0, {{mz, -b}});
  }
  if (su > 0)
    put(hes, mzs, {{mu0, b}, {mes, a}});
  else
    put(hes, mzs, {{mes, a}});
  put(hes, mes, {{mw, Rational(1)}});
  put(hes, mw, {{me, Rational(-1)}});
  put(hes, me, {{mz, -a}});

  Matrix gm(dm, dm);
  // Coordinates (Z, e, w, U..., e*, Z*): Witt pairs (Z,Z*), (e,e*), I on rest.
  gm(0, dm - 1) = gm(dm - 1, 0) = Rational(1);
  gm(1, dm - 2) = gm(dm - 2, 1) = Rational(1);
  for (std::size_t i = 0; i < su + 1; ++i) gm(2 + i, 2 + i) = Rational(1);
  return assemble(dh, dm, entries, gm, labels);
}

}  // namespace triplekit
