#include "triplekit/oracle.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <random>

namespace triplekit {

namespace {

struct SlotLayout {
  std::size_t p, s;
  std::vector<std::array<std::size_t, 4>> a_slots;  // (i, j, k, al), i < j
  std::vector<std::array<std::size_t, 4>> b_slots;  // (i, j, k, l), i<j, k<l, (ij) <= (kl)
  std::vector<std::array<std::size_t, 4>> f_slots;  // (i, j, al, be), i <= j, al <= be
};

SlotLayout slots_for(std::size_t p, std::size_t s, bool use_a, bool use_b, bool use_f) {
  SlotLayout lo;
  lo.p = p;
  lo.s = s;
  if (use_a)
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j)
        for (std::size_t k = 0; k < p; ++k)
          for (std::size_t al = 0; al < s; ++al) lo.a_slots.push_back({i, j, k, al});
  if (use_b) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) pairs.push_back({i, j});
    for (std::size_t x = 0; x < pairs.size(); ++x)
      for (std::size_t y = x; y < pairs.size(); ++y)
        lo.b_slots.push_back({pairs[x].first, pairs[x].second, pairs[y].first, pairs[y].second});
  }
  if (use_f)
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i; j < p; ++j)
        for (std::size_t al = 0; al < s; ++al)
          for (std::size_t be = al; be < s; ++be) lo.f_slots.push_back({i, j, al, be});
  return lo;
}

void fill_a(CoefficientSet& c, const std::array<std::size_t, 4>& slot, const Rational& v) {
  auto [i, j, k, al] = slot;
  c.a(i, j, k, al) = v;
  c.a(j, i, k, al) = -v;
}
void fill_b(CoefficientSet& c, const std::array<std::size_t, 4>& slot, const Rational& v) {
  auto [i, j, k, l] = slot;
  for (auto [a, b, sgn1] : {std::tuple{i, j, 1}, std::tuple{j, i, -1}})
    for (auto [d, e, sgn2] : {std::tuple{k, l, 1}, std::tuple{l, k, -1}}) {
      Rational w = Rational(sgn1 * sgn2) * v;
      c.b(a, b, d, e) = w;
      c.b(d, e, a, b) = w;
    }
}
void fill_f(CoefficientSet& c, const std::array<std::size_t, 4>& slot, const Rational& v) {
  auto [i, j, al, be] = slot;
  c.f(i, j, al, be) = c.f(j, i, al, be) = c.f(i, j, be, al) = c.f(j, i, be, al) = v;
}

bool bianchi_ok(const CoefficientSet& c) {
  for (const auto& viol : coefficient_relations_check(c))
    if (viol.relation == "a-bianchi" || viol.relation == "b-bianchi") return false;
  return true;
}

bool quadratic_relations_ok(const CoefficientSet& c) {
  return coefficient_relations_check(c).empty();
}

// Canonical comparison key of a coefficient set (for deterministic class ids
// independent of the grid enumeration order).
std::vector<std::string> canonical_key(const CoefficientSet& c) {
  std::vector<std::string> key;
  std::size_t p = c.p(), s = c.s();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t k = 0; k < p; ++k) {
        for (std::size_t l = 0; l < p; ++l) key.push_back(c.b(i, j, k, l).str());
        for (std::size_t al = 0; al < s; ++al) key.push_back(c.a(i, j, k, al).str());
      }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j)
      for (std::size_t al = 0; al < s; ++al)
        for (std::size_t be = 0; be < s; ++be) key.push_back(c.f(i, j, al, be).str());
  return key;
}

}  // namespace

std::vector<CensusEntry> enumerate_max_center(const GridSpec& spec) {
  if (spec.value_set.empty()) throw std::invalid_argument("enumerate_max_center: empty value set");
  if (spec.q < spec.p) throw std::invalid_argument("enumerate_max_center: q < p");
  std::size_t s = spec.q - spec.p;
  SlotLayout lo = slots_for(spec.p, s, spec.use_a, spec.use_b, spec.use_f);
  std::size_t nslots = lo.a_slots.size() + lo.b_slots.size() + lo.f_slots.size();
  double count = 1;
  for (std::size_t k = 0; k < nslots; ++k) {
    count *= static_cast<double>(spec.value_set.size());
    if (count > static_cast<double>(spec.max_candidates))
      throw std::invalid_argument("enumerate_max_center: grid too large");
  }
  std::size_t total = 1;
  for (std::size_t k = 0; k < nslots; ++k) total *= spec.value_set.size();

  auto entry_for = [&](std::size_t index) -> std::optional<CensusEntry> {
    CoefficientSet c(spec.p, s);
    std::size_t rest = index;
    for (const auto& slot : lo.a_slots) {
      fill_a(c, slot, spec.value_set[rest % spec.value_set.size()]);
      rest /= spec.value_set.size();
    }
    for (const auto& slot : lo.b_slots) {
      fill_b(c, slot, spec.value_set[rest % spec.value_set.size()]);
      rest /= spec.value_set.size();
    }
    for (const auto& slot : lo.f_slots) {
      fill_f(c, slot, spec.value_set[rest % spec.value_set.size()]);
      rest /= spec.value_set.size();
    }
    if (!bianchi_ok(c)) return std::nullopt;  // outside the ansatz sample space
    CensusEntry e{c, false, false, DecompositionResult::Kind::Unknown, true, 0};
    e.jacobi_ok = max_center_jacobi_ok(c);
    e.relations_ok = quadratic_relations_ok(c);
    if (e.jacobi_ok) {
      SymmetricTriple t = max_center_triple(c);
      e.indecomposable_verdict = t.decomposability().kind;
      if (t.is_nilpotent() && t.dim_g() >= 2)
        e.bordemann_ok = t.metric().nilpotent_center_bound_check();
    }
    return e;
  };

  std::vector<CensusEntry> census;
  std::size_t shards = std::max<std::size_t>(1, spec.shards);
  if (shards == 1) {
    for (std::size_t idx = 0; idx < total; ++idx)
      if (auto e = entry_for(idx)) census.push_back(std::move(*e));
  } else {
    std::vector<std::future<std::vector<CensusEntry>>> futs;
    for (std::size_t sh = 0; sh < shards; ++sh)
      futs.push_back(std::async(std::launch::async, [&, sh] {
        std::vector<CensusEntry> part;
        for (std::size_t idx = sh; idx < total; idx += shards)
          if (auto e = entry_for(idx)) part.push_back(std::move(*e));
        return part;
      }));
    for (auto& f : futs) {
      auto part = f.get();
      census.insert(census.end(), part.begin(), part.end());
    }
  }

  // Deterministic order, then class bucketing by exhaustive witness search.
  std::stable_sort(census.begin(), census.end(), [](const CensusEntry& x, const CensusEntry& y) {
    return canonical_key(x.coefficients) < canonical_key(y.coefficients);
  });
  std::vector<std::size_t> reps;  // census indices of class representatives
  for (auto& e : census) {
    if (!e.jacobi_ok) {
      e.class_id = SIZE_MAX;
      continue;
    }
    SymmetricTriple t = max_center_triple(e.coefficients);
    bool placed = false;
    for (std::size_t cid = 0; cid < reps.size() && !placed; ++cid) {
      const CensusEntry& rep = census[reps[cid]];
      SymmetricTriple tr = max_center_triple(rep.coefficients);
      GeneratorGrid grid;
      // Targeted scalings from magnitude ratios of corresponding data.
      auto add_ratios = [&grid](const Rational& x, const Rational& y) {
        if (!x.is_zero() && !y.is_zero()) {
          Rational r = (y / x).abs();
          if (r.sign() > 0) grid.scalings.push_back(r);
        }
      };
      for (std::size_t i = 0; i < spec.p; ++i)
        for (std::size_t j = 0; j < spec.p; ++j)
          for (std::size_t k = 0; k < spec.p; ++k)
            for (std::size_t l = 0; l < spec.p; ++l)
              add_ratios(e.coefficients.b(i, j, k, l), rep.coefficients.b(i, j, k, l));
      for (std::size_t i = 0; i < spec.p; ++i)
        for (std::size_t j = 0; j < spec.p; ++j)
          for (std::size_t al = 0; al < s; ++al)
            for (std::size_t be = 0; be < s; ++be)
              add_ratios(e.coefficients.f(i, j, al, be), rep.coefficients.f(i, j, al, be));
      if (brute_force_iso(t, tr, grid)) {
        e.class_id = cid;
        placed = true;
      }
    }
    if (!placed) {
      e.class_id = reps.size();
      reps.push_back(static_cast<std::size_t>(&e - census.data()));
    }
  }
  return census;
}

std::size_t census_class_count(const std::vector<CensusEntry>& census) {
  std::size_t n = 0;
  for (const auto& e : census)
    if (e.jacobi_ok) n = std::max(n, e.class_id + 1);
  return n;
}

namespace {

struct QBlock {
  Matrix rat, irr;
  Rational radicand{1};
};

// Assembles the m-witness C2 * M * C1^{-1} from adapted-basis blocks.
IsomorphismCertificate assemble_witness(const SymmetricTriple& t1, const MaxCenterBasis& b1,
                                        const MaxCenterBasis& b2,
                                        const QBlock& zmove,
                                        const std::vector<std::size_t>& perm,
                                        const std::vector<int>& signs, const Matrix& l_gamma,
                                        const Matrix& s_gamma) {
  std::size_t p = b1.z.size(), s = b1.w.size();
  std::size_t dm = t1.dim_m();
  using QM = MatT<QuadExt>;
  auto lift = [&](const Matrix& rat, const Matrix& irr, const Rational& rad) {
    QM q(rat.rows(), rat.cols());
    for (std::size_t i = 0; i < rat.rows(); ++i)
      for (std::size_t j = 0; j < rat.cols(); ++j) q(i, j) = QuadExt(rat(i, j), irr(i, j), rad);
    return q;
  };
  QM zq = lift(zmove.rat, zmove.irr, zmove.radicand);
  auto zq_inv = zq.inverse();
  if (!zq_inv) throw std::invalid_argument("assemble_witness: singular z-move");
  QM m(dm, dm);
  QM zdual = zq_inv->transpose();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      m(i, j) = zdual(i, j);
      m(p + s + i, p + s + j) = zq(i, j);
    }
  for (std::size_t al = 0; al < s; ++al)
    m(p + perm[al], p + al) = QuadExt(Rational(signs[al]));
  // Gamma_decomp move on the target side: w -> w + L w-col, z* -> ... via the
  // exact rho matrices in adapted coordinates.
  QM gamma = lift(Matrix::identity(dm), Matrix(dm, dm), Rational(1));
  if (!l_gamma.is_zero() || !s_gamma.is_zero()) {
    Matrix g = Matrix::identity(dm);
    // rho_W: w_al -> w_al + sum_k L(k,al) z_k; z*_i -> z*_i - sum L(i,al) w_al
    // - 1/2 (L L^T)_{ij} z_j (unit W-norms in adapted coordinates).
    for (std::size_t al = 0; al < s; ++al)
      for (std::size_t k = 0; k < p; ++k) g(k, p + al) += l_gamma(k, al);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t al = 0; al < s; ++al) g(p + al, p + s + i) -= l_gamma(i, al);
      for (std::size_t j = 0; j < p; ++j) {
        Rational acc;
        for (std::size_t al = 0; al < s; ++al) acc += l_gamma(i, al) * l_gamma(j, al);
        g(j, p + s + i) -= Rational(1, 2) * acc;
      }
    }
    // rho_skew: z*_i -> z*_i + sum_k S(k,i) z_k.
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t k = 0; k < p; ++k) g(k, p + s + i) += s_gamma(k, i);
    gamma = lift(g, Matrix(dm, dm), Rational(1));
  }
  QM m_total = gamma * m;

  std::vector<Vector> cols1 = b1.z, cols2 = b2.z;
  cols1.insert(cols1.end(), b1.w.begin(), b1.w.end());
  cols1.insert(cols1.end(), b1.zstar.begin(), b1.zstar.end());
  cols2.insert(cols2.end(), b2.w.begin(), b2.w.end());
  cols2.insert(cols2.end(), b2.zstar.begin(), b2.zstar.end());
  Matrix c1 = Matrix::from_columns(dm, cols1), c2 = Matrix::from_columns(dm, cols2);
  QM q_total = lift(c2, Matrix(dm, dm), Rational(1)) * m_total *
               lift(*c1.inverse(), Matrix(dm, dm), Rational(1));

  IsomorphismCertificate cert;
  cert.permutation = perm;
  cert.signs = signs;
  cert.z_change = zmove.rat;
  cert.radicand = zmove.radicand;
  cert.witness_rat = Matrix(dm, dm);
  cert.witness_irr = Matrix(dm, dm);
  for (std::size_t i = 0; i < dm; ++i)
    for (std::size_t j = 0; j < dm; ++j) {
      cert.witness_rat(i, j) = q_total(i, j).rat();
      cert.witness_irr(i, j) = q_total(i, j).irr();
    }
  return cert;
}

}  // namespace

std::optional<IsomorphismCertificate> brute_force_iso(const SymmetricTriple& t1,
                                                      const SymmetricTriple& t2,
                                                      const GeneratorGrid& grid) {
  if (t1.dim_g() != t2.dim_g() || t1.dim_m() != t2.dim_m() || t1.dim_h() != t2.dim_h())
    return std::nullopt;
  std::size_t dm = t1.dim_m();
  // Depth 0: identity.
  {
    IsomorphismCertificate idc;
    idc.z_change = Matrix::identity(1);
    idc.witness_rat = Matrix::identity(dm);
    idc.witness_irr = Matrix(dm, dm);
    if (verify_certificate(t1, t2, idc)) return idc;
  }
  MaxCenterBasis b1, b2;
  try {
    b1 = max_center_basis(t1);
    b2 = max_center_basis(t2);
  } catch (const std::exception&) {
    return std::nullopt;  // not found (bounded search only covers max center)
  }
  std::size_t p = b1.z.size(), s = b1.w.size();
  if (b2.z.size() != p || b2.w.size() != s) return std::nullopt;

  // z-moves: identity, sqrt-scalings, swaps, shears.
  std::vector<QBlock> zmoves;
  zmoves.push_back({Matrix::identity(p), Matrix(p, p), Rational(1)});
  std::vector<Rational> scalings;
  for (const auto& t : grid.scalings) {
    if (t.sign() <= 0 || t == Rational(1)) continue;
    scalings.push_back(t);
    scalings.push_back(t.inverse());
  }
  for (const auto& t : scalings) {
    for (std::size_t which = 0; which < (p == 1 ? std::size_t{1} : p + 1); ++which) {
      Matrix rat(p, p), irr(p, p);
      for (std::size_t i = 0; i < p; ++i) {
        bool scaled = (p == 1) || (which == p) || (which == i);
        if (scaled)
          irr(i, i) = Rational(1);
        else
          rat(i, i) = Rational(1);
      }
      zmoves.push_back({rat, irr, t});
    }
  }
  if (p >= 2) {
    Matrix swap(p, p);
    swap(0, 1) = swap(1, 0) = Rational(1);
    for (std::size_t i = 2; i < p; ++i) swap(i, i) = Rational(1);
    zmoves.push_back({swap, Matrix(p, p), Rational(1)});
    for (const auto& l : grid.l_values) {
      Matrix sh = Matrix::identity(p);
      sh(1, 0) = l;
      zmoves.push_back({sh, Matrix(p, p), Rational(1)});
    }
  }

  // W-moves: signed permutations.
  std::vector<std::pair<std::vector<std::size_t>, std::vector<int>>> wmoves;
  {
    std::vector<std::size_t> perm(s);
    for (std::size_t i = 0; i < s; ++i) perm[i] = i;
    do {
      for (std::size_t mask = 0; mask < (std::size_t{1} << s); ++mask) {
        std::vector<int> signs(s, 1);
        for (std::size_t i = 0; i < s; ++i)
          if (mask & (std::size_t{1} << i)) signs[i] = -1;
        wmoves.push_back({perm, signs});
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  // Gamma_decomp moves: zero plus single-entry L and skew S choices.
  std::vector<std::pair<Matrix, Matrix>> gmoves;
  gmoves.push_back({Matrix(p, s), Matrix(p, p)});
  for (const auto& l : grid.l_values) {
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t al = 0; al < s; ++al) {
        Matrix lm(p, s);
        lm(i, al) = l;
        gmoves.push_back({lm, Matrix(p, p)});
      }
    if (p >= 2) {
      Matrix sk(p, p);
      sk(0, 1) = l;
      sk(1, 0) = -l;
      gmoves.push_back({Matrix(p, s), sk});
    }
  }

  std::size_t tried = 0;
  for (const auto& zm : zmoves)
    for (const auto& [perm, signs] : wmoves)
      for (const auto& [lg, sg] : gmoves) {
        if (++tried > grid.max_candidates) return std::nullopt;
        IsomorphismCertificate cert;
        try {
          cert = assemble_witness(t1, b1, b2, zm, perm, signs, lg, sg);
        } catch (const std::exception&) {
          continue;
        }
        if (verify_certificate(t1, t2, cert)) return cert;
      }
  return std::nullopt;
}

EquivalenceReport jacobi_relations_equivalence(std::size_t p, std::size_t q,
                                               std::size_t sample_count, unsigned seed) {
  if (q < p) throw std::invalid_argument("jacobi_relations_equivalence: q < p");
  std::size_t s = q - p;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> val(-2, 2);
  EquivalenceReport rep;
  SlotLayout lo = slots_for(p, s, true, true, true);
  for (std::size_t n = 0; n < sample_count; ++n) {
    CoefficientSet c(p, s);
    for (const auto& slot : lo.a_slots) fill_a(c, slot, Rational(val(rng)));
    for (const auto& slot : lo.b_slots) fill_b(c, slot, Rational(val(rng)));
    for (const auto& slot : lo.f_slots) fill_f(c, slot, Rational(val(rng)));
    if (!bianchi_ok(c)) {
      // Project onto the Bianchi kernel: subtract the cyclic average.
      CoefficientSet fixed = c;
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j)
          for (std::size_t k = 0; k < p; ++k) {
            for (std::size_t al = 0; al < s; ++al)
              fixed.a(i, j, k, al) =
                  c.a(i, j, k, al) -
                  (c.a(i, j, k, al) + c.a(j, k, i, al) + c.a(k, i, j, al)) / Rational(3);
            for (std::size_t l = 0; l < p; ++l)
              fixed.b(i, j, k, l) =
                  c.b(i, j, k, l) -
                  (c.b(i, j, k, l) + c.b(j, k, i, l) + c.b(k, i, j, l)) / Rational(3);
          }
      c = fixed;
      if (!bianchi_ok(c)) continue;  // projection failed structurally; skip draw
    }
    ++rep.samples;
    bool jac = max_center_jacobi_ok(c);
    bool rel = quadratic_relations_ok(c);
    if (jac) ++rep.jacobi_pass;
    if (jac != rel) ++rep.discrepancies;
  }
  return rep;
}

}  // namespace triplekit
