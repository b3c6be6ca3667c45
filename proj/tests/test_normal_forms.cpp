#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "triplekit/classify.hpp"
#include "triplekit/oracle.hpp"

using namespace triplekit;
using namespace triplekit::testing;

namespace {

Vector bracket_of(const SymmetricTriple& t, std::size_t gi, std::size_t gj) {
  return t.algebra().bracket_basis(gi, gj);
}

}  // namespace

TEST_CASE("build_lorentz") {
  SymmetricTriple t3 = build_lorentz({rr(1)});
  CHECK(t3.dim_m() == 3);
  CHECK(t3.ricci().gram()(2, 2) == rr(1));  // Ric(Z*, Z*) = 1

  SymmetricTriple t4 = build_lorentz({rr(-1), rr(-1)});
  CHECK(t4.dim_m() == 4);
  CHECK(t4.is_solvable());
  CHECK_FALSE(t4.is_nilpotent());

  SymmetricTriple flat = build_lorentz({});
  CHECK(flat.dim_m() == 2);
  CHECK(flat.dim_h() == 0);
  CHECK(flat.decomposability().kind == DecompositionResult::Kind::Decomposable);

  CHECK_THROWS_AS(build_lorentz({rr(1), rr(0)}), std::invalid_argument);
}

TEST_CASE("build_least_nilpotent_pq") {
  // p = 1: R_b = 0 forced; the output is tau_n(f) with f_a = eps_a lambda_a^2.
  std::vector<Vector> lambda = {Vector{rr(2)}, Vector{rr(3)}};
  SymmetricTriple least = build_least_nilpotent_pq(1, {rr(0)}, {1, -1}, lambda);
  CHECK(least.verify().pass());
  CHECK(least.m_signature() == Signature{1, 3, 0});
  SymmetricTriple lor = build_lorentz({rr(4), rr(-9)});
  GeneratorGrid grid;
  CHECK(brute_force_iso(least, lor, grid).has_value());

  // p = 2, b_1212 = 1, no W: exactly tau_{2,2}(+1).
  std::vector<Rational> b(16, rr(0));
  auto set_b = [&b](std::size_t i, std::size_t j, std::size_t k, std::size_t l, long v) {
    b[((i * 2 + j) * 2 + k) * 2 + l] = Rational(v);
  };
  set_b(0, 1, 0, 1, 1);
  set_b(1, 0, 0, 1, -1);
  set_b(0, 1, 1, 0, -1);
  set_b(1, 0, 1, 0, 1);
  SymmetricTriple n22 = build_least_nilpotent_pq(2, b, {}, {});
  SymmetricTriple expected = build_nil22(1);
  CHECK(n22.form().gram() == expected.form().gram());
  for (std::size_t i = 0; i < n22.dim_g(); ++i)
    for (std::size_t j = 0; j < n22.dim_g(); ++j)
      CHECK(bracket_of(n22, i, j) == bracket_of(expected, i, j));

  // Closure failure: all Lambda on a line with Y = 0, p = 2.
  std::vector<Rational> zero_b(16, rr(0));
  std::vector<Vector> line = {Vector{rr(1), rr(0)}, Vector{rr(2), rr(0)}};
  CHECK_THROWS_AS(build_least_nilpotent_pq(2, zero_b, {1, 1}, line), std::invalid_argument);

  // Symmetry violation in b.
  std::vector<Rational> bad_b(16, rr(0));
  bad_b[((0 * 2 + 1) * 2 + 0) * 2 + 1] = rr(1);  // b_1212 without its partners
  CHECK_THROWS_AS(build_least_nilpotent_pq(2, bad_b, {}, {}), std::invalid_argument);
}

TEST_CASE("build_Ia and boxed h-metric values") {
  SymmetricTriple t = build_Ia(1, 0, rlist({1}), rlist({1}));
  CHECK(t.dim_m() == 5);
  CHECK(t.m_signature() == Signature{2, 3, 0});

  // B(y, y) = eps_Y via the bracket elements, basis-independent.
  auto g_index = [&](std::size_t m_pos) { return t.m_indices()[m_pos]; };
  // m-order (Z1, Z2, W1, Z1*, Z2*).
  Vector y = bracket_of(t, g_index(3), g_index(4));
  CHECK(t.form().eval(y, y) == rr(1));
  SymmetricTriple tn = build_Ia(-1, 1, rlist({2}), rlist({-1}));
  Vector yn = tn.algebra().bracket_basis(tn.m_indices()[3], tn.m_indices()[4]);
  CHECK(tn.form().eval(yn, yn) == rr(-1));

  CHECK_THROWS_AS(build_Ia(2, 0, rlist({1}), rlist({1})), std::invalid_argument);
  CHECK_THROWS_AS(build_Ia(1, 0, rlist({0}), rlist({0})), std::invalid_argument);
}

TEST_CASE("build_Ib: rank condition and block decomposition") {
  SymmetricTriple t = build_Ib(0, rlist({1, 0}), rlist({0, 1}));
  CHECK(t.dim_m() == 6);
  DecompositionResult res = t.decomposability();
  CHECK(res.kind == DecompositionResult::Kind::Decomposable);

  CHECK_THROWS_AS(build_Ib(0, rlist({1, 2}), rlist({2, 4})), std::invalid_argument);
}

TEST_CASE("build_IIa / build_IIb structure") {
  SymmetricTriple a = build_IIa(1, rlist({1, 2}), rlist({1, -1}));
  CHECK(a.dim_m() == 7);  // n - 5 = 2 regular slots plus w
  CHECK(a.m_signature() == Signature{2, 5, 0});
  // B(y, w*) = 1 with y = [Z1*, Z2*], w* = [Z1*, w]; m-order
  // (Z1, Z2, W1, W2, w, Z1*, Z2*).
  Vector y = bracket_of(a, a.m_indices()[5], a.m_indices()[6]);
  Vector wstar = bracket_of(a, a.m_indices()[5], a.m_indices()[4]);
  CHECK(a.form().eval(y, wstar) == rr(1));
  CHECK(a.form().eval(y, y).is_zero());

  SymmetricTriple bb = build_IIb(0, rlist({3}), rlist({1}));
  CHECK(bb.dim_m() == 7);  // 1 regular slot plus w_1, w_2
  // [Z_i*, w_j] = delta_ij w*.
  Vector w1star = bracket_of(bb, bb.m_indices()[5], bb.m_indices()[3]);
  Vector cross = bracket_of(bb, bb.m_indices()[6], bb.m_indices()[3]);
  CHECK_FALSE(is_zero_vector(w1star));
  CHECK(is_zero_vector(cross));
}

TEST_CASE("nilpotent triples") {
  for (int eps : {1, -1}) {
    SymmetricTriple t = build_nil22(eps);
    CHECK(t.is_nilpotent());
    CHECK(t.m_signature() == Signature{2, 2, 0});
    CHECK(t.ricci().gram().is_zero());
  }
  SymmetricTriple t23 = build_nil23();
  CHECK(t23.is_nilpotent());
  CHECK(t23.dim_g() == 7);  // 5 + 2
  CHECK(t23.ricci().gram().is_zero());
  SymmetricTriple t24 = build_nil24();
  CHECK(t24.is_nilpotent());
  CHECK(t24.ricci().gram().is_zero());
  CHECK(t24.m_signature() == Signature{2, 4, 0});
}

TEST_CASE("build_III: the four block pairs and the diagonal case") {
  IIIBlock diag{IIIBlock::Kind::DiagEqual, rr(2), rr(0)};
  SymmetricTriple t5 = build_III(diag, {rr(1)});
  CHECK(t5.dim_m() == 5);
  CHECK(t5.m_signature() == Signature{2, 3, 0});
  CHECK(t5.center_in_m().dim() == 1);

  IIIBlock jp{IIIBlock::Kind::JordanPlus, rr(1), rr(0)};
  CHECK(build_III(jp, {rr(1)}).verify().pass());
  IIIBlock jm{IIIBlock::Kind::JordanMinus, rr(-2), rr(0)};
  CHECK(build_III(jm, {rr(3), rr(1)}).verify().pass());
  IIIBlock rot{IIIBlock::Kind::Rotation, rr(1), rr(2)};
  CHECK(build_III(rot, {rr(-1)}).verify().pass());
  IIIBlock none{IIIBlock::Kind::None, rr(0), rr(0)};
  SymmetricTriple tn = build_III(none, {rr(2), rr(-1), rr(3)});
  CHECK(tn.m_signature() == Signature{2, 3, 0});

  // [h, z-perp] stays in z.
  Subspace z = t5.center_in_m();
  Subspace zperp = orthogonal_complement(z, t5.form_on_m());
  for (std::size_t a = 0; a < t5.dim_h(); ++a)
    for (const auto& v : zperp.basis())
      CHECK(z.contains(t5.project_m(t5.algebra().bracket(t5.h_basis_vector(a), t5.embed_m(v)))));

  IIIBlock sing{IIIBlock::Kind::DiagEqual, rr(0), rr(0)};
  CHECK_THROWS_AS(build_III(sing, {rr(1)}), std::invalid_argument);
  CHECK_THROWS_AS(build_III(diag, {rr(0)}), std::invalid_argument);
}

TEST_CASE("build_IV: cases, Ricci, and the two-level structure") {
  SymmetricTriple t = build_IV(rr(1), rr(0), {rr(2)});
  CHECK(t.dim_m() == 6);
  CHECK(t.m_signature() == Signature{2, 4, 0});
  CHECK(t.center_in_m().dim() == 1);
  // Ric(Z*, Z*) = 2a + sum f = 4; m-order (Z, e, w, U1, e*, Z*).
  CHECK(t.ricci().gram()(5, 5) == rr(4));

  // [h, z-perp] leaves z.
  Subspace z = t.center_in_m();
  Subspace zperp = orthogonal_complement(z, t.form_on_m());
  bool escapes = false;
  for (std::size_t a = 0; a < t.dim_h(); ++a)
    for (const auto& v : zperp.basis())
      escapes |= !z.contains(t.project_m(t.algebra().bracket(t.h_basis_vector(a), t.embed_m(v))));
  CHECK(escapes);

  CHECK(build_IV(rr(3), rr(1), {rr(3), rr(5)}).verify().pass());
  CHECK_THROWS_AS(build_IV(rr(2), rr(0), {rr(1)}), std::invalid_argument);
  CHECK_THROWS_AS(build_IV(rr(2), rr(1), {rr(3)}), std::invalid_argument);
  CHECK_THROWS_AS(build_IV(rr(1), rr(0), {rr(0)}), std::invalid_argument);
}

TEST_CASE("coefficient_relations_check") {
  // Diagonal rank-1 pattern passes.
  CoefficientSet good(2, 2);
  std::vector<Rational> l1 = {rr(1), rr(2)}, l2 = {rr(1), rr(-1)};
  for (std::size_t al = 0; al < 2; ++al) {
    good.f(0, 0, al, al) = l1[al] * l1[al];
    good.f(0, 1, al, al) = l1[al] * l2[al];
    good.f(1, 0, al, al) = l1[al] * l2[al];
    good.f(1, 1, al, al) = l2[al] * l2[al];
  }
  CHECK(coefficient_relations_check(good).empty());

  // Perturbing one entry produces violations.
  CoefficientSet bad = good;
  bad.f(0, 1, 0, 0) += rr(1);
  CHECK_FALSE(coefficient_relations_check(bad).empty());

  // a = 0, b symmetric, f = 0: the aa-relation holds trivially.
  CoefficientSet nil(2, 0);
  nil.b(0, 1, 0, 1) = rr(5);
  nil.b(1, 0, 0, 1) = rr(-5);
  nil.b(0, 1, 1, 0) = rr(-5);
  nil.b(1, 0, 1, 0) = rr(5);
  CHECK(coefficient_relations_check(nil).empty());
}

TEST_CASE("coefficient round trip through the standard adapted basis") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 10; ++it) {
    std::size_t p = 2, s = 2;
    CoefficientSet c(p, s);
    // Regular slot 0 with random rank-1 f-data, nilpotent slot 1 with the
    // IIa-pattern a.
    Rational l1 = random_rational(rng, true), l2 = random_rational(rng);
    c.f(0, 0, 0, 0) = l1 * l1;
    c.f(0, 1, 0, 0) = c.f(1, 0, 0, 0) = l1 * l2;
    c.f(1, 1, 0, 0) = l2 * l2;
    c.a(0, 1, 0, 1) = rr(1);
    c.a(1, 0, 0, 1) = rr(-1);
    SymmetricTriple t = max_center_triple(c);
    std::vector<Vector> z, w, zs;
    for (std::size_t i = 0; i < p; ++i) {
      Vector v(t.dim_m(), Rational(0));
      v[i] = 1;
      z.push_back(v);
    }
    for (std::size_t al = 0; al < s; ++al) {
      Vector v(t.dim_m(), Rational(0));
      v[p + al] = 1;
      w.push_back(v);
    }
    for (std::size_t i = 0; i < p; ++i) {
      Vector v(t.dim_m(), Rational(0));
      v[p + s + i] = 1;
      zs.push_back(v);
    }
    CHECK(extract_coefficients(t, z, w, zs) == c);
  }
}

TEST_CASE("W_nil dimension bound for the constructed families") {
  // dim(W_nil) <= p^2 (p-1)/2 = 2 at p = 2.
  for (const SymmetricTriple& t : {build_IIa(0, rlist({1}), rlist({2})),
                                   build_IIb(1, rlist({1, 1}), rlist({1, -1})), build_nil24()}) {
    MaxCenterBasis basis = max_center_basis(t);
    SpectralData sd = simultaneous_diagonalize(
        fij_operators(t, basis), t.form_on_m().restrict_gram(basis.w), basis.z.size());
    auto [nil, reg] = split_w(sd);
    CHECK(nil.size() <= 2);
  }
}

TEST_CASE("random admissible draws verify (smoke; acceptance runs 50 per family)") {
  std::mt19937_64 rng(41);
  for (int it = 0; it < 5; ++it) {
    std::vector<Rational> f;
    for (int k = 0; k < 3; ++k) f.push_back(random_rational(rng, true));
    CHECK(build_lorentz(f).verify().pass());
    std::vector<Rational> l1 = {random_rational(rng, true), random_rational(rng)};
    std::vector<Rational> l2 = {random_rational(rng), random_rational(rng, true)};
    CHECK(build_Ia(it % 2 ? 1 : -1, 1, l1, l2).verify().pass());
    CHECK(build_IIa(1, l1, l2).verify().pass());
  }
}
