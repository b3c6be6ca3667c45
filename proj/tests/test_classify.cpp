#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "triplekit/classify.hpp"
#include "triplekit/witt.hpp"

using namespace triplekit;
using namespace triplekit::testing;

TEST_CASE("fij operators") {
  // tau_3((2)): F_11 = (2) on the 1-dimensional W.
  SymmetricTriple t = build_lorentz({rr(2)});
  MaxCenterBasis basis = max_center_basis(t);
  std::vector<Matrix> fs = fij_operators(t, basis);
  REQUIRE(fs.size() == 1);
  CHECK(fs[0](0, 0) == rr(2));

  // tau_{2,2}: W = 0, operators act on nothing.
  MaxCenterBasis b22 = max_center_basis(build_nil22(1));
  CHECK(b22.w.empty());

  // Ia instance: F_ij diagonal with entries eps lambda_i lambda_j.
  std::vector<Rational> l1 = {rr(1), rr(3)}, l2 = {rr(2), rr(-1)};
  SymmetricTriple ia = build_Ia(1, 1, l1, l2);
  MaxCenterBasis bia = max_center_basis(ia);
  std::vector<Matrix> fia = fij_operators(ia, bia);
  std::vector<int> eps = {-1, 1};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t al = 0; al < 2; ++al) {
        Rational li = i == 0 ? l1[al] : l2[al];
        Rational lj = j == 0 ? l1[al] : l2[al];
        CHECK(fia[i * 2 + j](al, al) == Rational(eps[al]) * li * lj);
      }
}

TEST_CASE("simultaneous diagonalization: exact path") {
  Matrix d{{rr(1), rr(0)}, {rr(0), rr(4)}};
  SpectralData sd = simultaneous_diagonalize({d}, Matrix::identity(2), 1);
  REQUIRE(sd.records.size() == 2);
  CHECK(sd.records[0].fvals(0, 0) == rr(1));
  CHECK(sd.records[1].fvals(0, 0) == rr(4));

  Matrix mixed{{rr(5, 2), rr(3, 2)}, {rr(3, 2), rr(5, 2)}};
  SpectralData sm = simultaneous_diagonalize({mixed}, Matrix::identity(2), 1);
  std::vector<Rational> eigs = {sm.records[0].fvals(0, 0), sm.records[1].fvals(0, 0)};
  std::sort(eigs.begin(), eigs.end());
  CHECK(eigs[0] == rr(1));
  CHECK(eigs[1] == rr(4));

  // x^2 - 2: irrational spectrum in exact mode.
  Matrix irr{{rr(1), rr(1)}, {rr(1), rr(-1)}};
  CHECK_THROWS_AS(simultaneous_diagonalize({irr}, Matrix::identity(2), 1),
                  IrrationalSpectrumError);

  Matrix a{{rr(0), rr(1)}, {rr(1), rr(0)}};
  Matrix b{{rr(1), rr(0)}, {rr(0), rr(-1)}};
  CHECK_THROWS_AS(simultaneous_diagonalize({a, b}, Matrix::identity(2), 1), NonCommutingError);
}

TEST_CASE("simultaneous diagonalization: float fallback is flagged") {
  Matrix irr{{rr(1), rr(1)}, {rr(1), rr(-1)}};
  ApproxSpectralData ap = simultaneous_diagonalize_float({irr}, Matrix::identity(2), 1, 1e-9);
  CHECK_FALSE(ap.exact);
  REQUIRE(ap.fvals.size() == 2);
  std::vector<double> eigs = {ap.fvals[0][0], ap.fvals[1][0]};
  std::sort(eigs.begin(), eigs.end());
  CHECK(std::abs(eigs[0] + std::sqrt(2.0)) < 1e-7);
  CHECK(std::abs(eigs[1] - std::sqrt(2.0)) < 1e-7);
}

TEST_CASE("split_w") {
  auto spectral = [](const SymmetricTriple& t) {
    MaxCenterBasis basis = max_center_basis(t);
    return simultaneous_diagonalize(fij_operators(t, basis),
                                    t.form_on_m().restrict_gram(basis.w), basis.z.size());
  };
  auto [nil4, reg4] = split_w(spectral(build_lorentz({rr(1), rr(2)})));
  CHECK(nil4.empty());
  CHECK(reg4.size() == 2);

  auto [nila, rega] = split_w(spectral(build_IIa(0, rlist({1}), rlist({2}))));
  CHECK(nila.size() == 1);

  auto [nil24, reg24] = split_w(spectral(build_nil24()));
  CHECK(nil24.size() == 2);
  CHECK(reg24.empty());
}

TEST_CASE("splitting transform") {
  // Already-split normal form: the transformation is the identity.
  SymmetricTriple ia = build_Ia(1, 0, rlist({1, 2}), rlist({0, 1}));
  MaxCenterBasis basis = max_center_basis(ia);
  SplitResult sr = splitting_transform(ia, basis);
  CHECK(sr.gamma == Matrix::identity(ia.dim_m()));

  // Perturb by a random Gamma_decomp element, then split: a vanishes on
  // I_reg again and f is unchanged.
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<long> val(-2, 2);
  BilinearForm bm = ia.form_on_m();
  AdaptedBasis ab;
  ab.e = basis.z;
  ab.w = basis.w;
  ab.estar = basis.zstar;
  for (const auto& wv : basis.w) ab.w_norms.push_back(bm.eval(wv, wv));
  for (int it = 0; it < 5; ++it) {
    Matrix l(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) l(i, j) = Rational(val(rng));
    Matrix q = GammaElement::rho_w(ab, ia.dim_m(), l).matrix();
    MaxCenterBasis moved;
    for (const auto& v : basis.z) moved.z.push_back(q.apply(v));
    for (const auto& v : basis.w) moved.w.push_back(q.apply(v));
    for (const auto& v : basis.zstar) moved.zstar.push_back(q.apply(v));
    SplitResult back = splitting_transform(ia, moved);
    CoefficientSet after = extract_coefficients(ia, back.basis.z, back.basis.w, back.basis.zstar);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        for (std::size_t k = 0; k < 2; ++k)
          for (std::size_t al = 0; al < 2; ++al) CHECK(after.a(i, j, k, al).is_zero());
  }

  // p = 1: the a-tensor is empty, the transform is a no-op.
  SymmetricTriple lor = build_lorentz({rr(1), rr(5)});
  MaxCenterBasis lb = max_center_basis(lor);
  CHECK(splitting_transform(lor, lb).gamma == Matrix::identity(lor.dim_m()));
}

TEST_CASE("lorentz_isomorphic") {
  IsoDecision d1 = lorentz_isomorphic(rlist({1, 2}), rlist({2, 4}));
  REQUIRE(d1.verdict == IsoDecision::Verdict::Isomorphic);
  REQUIRE(d1.certificate.has_value());
  CHECK(d1.certificate->z_change(0, 0) == rr(1, 2));
  CHECK(verify_certificate(build_lorentz(rlist({1, 2})), build_lorentz(rlist({2, 4})),
                           *d1.certificate));

  CHECK(lorentz_isomorphic(rlist({1, 2}), rlist({1, 3})).verdict ==
        IsoDecision::Verdict::NotIsomorphic);

  IsoDecision d3 = lorentz_isomorphic(rlist({3, -1}), rlist({3, -1}));
  REQUIRE(d3.verdict == IsoDecision::Verdict::Isomorphic);
  CHECK(d3.certificate->z_change(0, 0) == rr(1));

  CHECK_THROWS_AS(lorentz_isomorphic(rlist({1}), rlist({1, 2})), std::invalid_argument);
}

TEST_CASE("lorentz_isomorphic is an equivalence relation on a sample") {
  std::vector<std::vector<Rational>> sample = {rlist({1, 2}), rlist({2, 4}), rlist({1, 3}),
                                               rlist({3, 6}), rlist({2, 2}), rlist({-1, 2})};
  auto iso = [&](std::size_t i, std::size_t j) {
    return lorentz_isomorphic(sample[i], sample[j]).verdict == IsoDecision::Verdict::Isomorphic;
  };
  for (std::size_t i = 0; i < sample.size(); ++i) {
    CHECK(iso(i, i));
    for (std::size_t j = 0; j < sample.size(); ++j) {
      CHECK(iso(i, j) == iso(j, i));
      for (std::size_t k = 0; k < sample.size(); ++k)
        if (iso(i, j) && iso(j, k)) CHECK(iso(i, k));
    }
  }
}

TEST_CASE("family_isomorphic: Ia") {
  IaParams x{1, 0, rlist({1, 0}), rlist({0, 1})};
  IaParams y{1, 0, rlist({0, -1}), rlist({1, 0})};
  // Spec example written as rows lambda = ((1,0),(0,1)) vs ((0,1),(-1,0)).
  IaParams y2{1, 0, rlist({0, 1}), rlist({-1, 0})};
  CHECK(v_lambda(x.l1, x.l2) == rr(2));
  CHECK(v_lambda(y2.l1, y2.l2) == rr(2));
  CHECK(family_isomorphic(FamilyParams{x}, FamilyParams{y2}).verdict ==
        IsoDecision::Verdict::Isomorphic);
  CHECK(family_isomorphic(FamilyParams{x}, FamilyParams{y}).verdict ==
        IsoDecision::Verdict::Isomorphic);

  // Different eps_Y: not isomorphic.
  IaParams z{-1, 0, rlist({1, 0}), rlist({0, 1})};
  CHECK(family_isomorphic(FamilyParams{x}, FamilyParams{z}).verdict ==
        IsoDecision::Verdict::NotIsomorphic);
  // Different V_lambda: not isomorphic.
  IaParams w{1, 0, rlist({2, 0}), rlist({0, 1})};
  CHECK(family_isomorphic(FamilyParams{x}, FamilyParams{w}).verdict ==
        IsoDecision::Verdict::NotIsomorphic);
  // Rank-1 orbits: direction matching with free rescaling.
  IaParams r1a{1, 0, rlist({1, 1}), rlist({2, 2})};
  IaParams r1b{1, 0, rlist({3, 3}), rlist({0, 0})};
  CHECK(family_isomorphic(FamilyParams{r1a}, FamilyParams{r1b}).verdict ==
        IsoDecision::Verdict::Isomorphic);
}

TEST_CASE("family_isomorphic: Ib, IIa, IIb") {
  IbParams bx{0, rlist({1, 0}), rlist({0, 1})};
  IbParams by{0, rlist({2, 0}), rlist({0, 3})};
  CHECK(family_isomorphic(FamilyParams{bx}, FamilyParams{by}).verdict ==
        IsoDecision::Verdict::Isomorphic);

  // IIa with a rational stab(a)-element: alpha = 2, beta = 1.
  IIaParams ax{0, rlist({1, 0}), rlist({0, 1})};
  IIaParams ay{0, rlist({2, 1}), {rr(0), rr(1, 4)}};
  CHECK(family_isomorphic(FamilyParams{ax}, FamilyParams{ay}).verdict ==
        IsoDecision::Verdict::Isomorphic);

  // IIa rank-1 (k = 2) with an irrational alpha = 1/sqrt(2): lambda_2 scales
  // by 2; the certificate lives in Q(sqrt(2)) and still verifies exactly.
  IIaParams k2a{0, rlist({0}), rlist({1})};
  IIaParams k2b{0, rlist({0}), rlist({2})};
  IsoDecision dk = family_isomorphic(FamilyParams{k2a}, FamilyParams{k2b});
  REQUIRE(dk.verdict == IsoDecision::Verdict::Isomorphic);
  CHECK_FALSE(dk.certificate->witness_irr.is_zero());

  // IIb: exact signed-permutation matching only.
  IIbParams ibx{0, rlist({1, 2}), rlist({2, -1})};
  IIbParams iby{0, rlist({2, -1}), rlist({-1, -2})};
  CHECK(family_isomorphic(FamilyParams{ibx}, FamilyParams{iby}).verdict ==
        IsoDecision::Verdict::Isomorphic);
  IIbParams ibz{0, rlist({1, 2}), rlist({2, 1})};
  CHECK(family_isomorphic(FamilyParams{ibx}, FamilyParams{ibz}).verdict ==
        IsoDecision::Verdict::NotIsomorphic);
}

TEST_CASE("family_isomorphic: IV and III") {
  IVParams a{rr(1), rr(0), rlist({2, 3})};
  IVParams b{rr(1), rr(0), rlist({3, 2})};
  CHECK(family_isomorphic(FamilyParams{a}, FamilyParams{b}).verdict ==
        IsoDecision::Verdict::Isomorphic);
  IVParams c{rr(-1), rr(0), rlist({2})};
  IVParams d{rr(1), rr(0), rlist({2})};
  CHECK(family_isomorphic(FamilyParams{c}, FamilyParams{d}).verdict ==
        IsoDecision::Verdict::NotIsomorphic);
  // Case (ii): f_1 pinned, the rest permutes.
  IVParams e{rr(3), rr(1), rlist({3, 5, 7})};
  IVParams f{rr(3), rr(1), rlist({3, 7, 5})};
  CHECK(family_isomorphic(FamilyParams{e}, FamilyParams{f}).verdict ==
        IsoDecision::Verdict::Isomorphic);

  // III: common scaling c^2 on (Phi, f); Jordan witnesses need sqrt(c^2).
  IIIParams g{{IIIBlock::Kind::DiagEqual, rr(1), rr(0)}, rlist({2})};
  IIIParams h{{IIIBlock::Kind::DiagEqual, rr(4), rr(0)}, rlist({8})};
  CHECK(family_isomorphic(FamilyParams{g}, FamilyParams{h}).verdict ==
        IsoDecision::Verdict::Isomorphic);
  IIIParams jx{{IIIBlock::Kind::JordanPlus, rr(1), rr(0)}, rlist({1})};
  IIIParams jy{{IIIBlock::Kind::JordanPlus, rr(2), rr(0)}, rlist({2})};
  IsoDecision dj = family_isomorphic(FamilyParams{jx}, FamilyParams{jy});
  REQUIRE(dj.verdict == IsoDecision::Verdict::Isomorphic);
  CHECK_FALSE(dj.certificate->witness_irr.is_zero());
  IIIParams jz{{IIIBlock::Kind::JordanPlus, rr(1), rr(0)}, rlist({3})};
  CHECK(family_isomorphic(FamilyParams{jx}, FamilyParams{jz}).verdict ==
        IsoDecision::Verdict::NotIsomorphic);

  CHECK_THROWS_AS(family_isomorphic(FamilyParams{a}, FamilyParams{g}), std::invalid_argument);
}

TEST_CASE("certificate soundness is exact and corruption is caught") {
  IsoDecision d = lorentz_isomorphic(rlist({1, 2}), rlist({2, 4}));
  REQUIRE(d.certificate.has_value());
  SymmetricTriple t1 = build_lorentz(rlist({1, 2})), t2 = build_lorentz(rlist({2, 4}));
  CHECK(verify_certificate(t1, t2, *d.certificate));
  IsomorphismCertificate corrupted = *d.certificate;
  corrupted.witness_rat(1, 1) += rr(1);
  CHECK_FALSE(verify_certificate(t1, t2, corrupted));
}

TEST_CASE("V_lambda from f-data agrees with the direct computation") {
  std::vector<Rational> l1 = {rr(1), rr(2), rr(0)}, l2 = {rr(3), rr(-1), rr(2)};
  SymmetricTriple ia = build_Ia(1, 1, l1, l2);
  MaxCenterBasis basis = max_center_basis(ia);
  SpectralData sd = simultaneous_diagonalize(fij_operators(ia, basis),
                                             ia.form_on_m().restrict_gram(basis.w), 2);
  CHECK(v_lambda_from_f(sd) == v_lambda(l1, l2));
}

TEST_CASE("indecomposable_sufficient") {
  CHECK(indecomposable_sufficient(build_III({IIIBlock::Kind::DiagEqual, rr(2), rr(0)}, {rr(1)}))
            .value() == "solvable with 1-dimensional center");
  CHECK(indecomposable_sufficient(build_IV(rr(1), rr(0), {rr(2)})).value() ==
        "solvable with 1-dimensional center");
  auto ia = indecomposable_sufficient(build_Ia(1, 0, rlist({1}), rlist({1})));
  REQUIRE(ia.has_value());
  CHECK(ia->find("dim(Y)") != std::string::npos);
  CHECK_FALSE(
      indecomposable_sufficient(build_lorentz({rr(1)}).direct_sum(build_lorentz({rr(1)})))
          .has_value());
}

TEST_CASE("W_nil dimension and spectral multiset are Gamma_decomp invariants (100 moves)") {
  std::mt19937_64 rng(71);
  std::uniform_int_distribution<long> val(-2, 2);
  std::vector<SymmetricTriple> triples;
  triples.push_back(build_IIa(1, rlist({1, 2}), rlist({0, -1})));
  triples.push_back(build_Ia(1, 0, rlist({1}), rlist({2})));
  for (const auto& t : triples) {
    MaxCenterBasis basis = max_center_basis(t);
    auto spectral_key = [&](const SymmetricTriple& s) {
      MaxCenterBasis b = max_center_basis(s);
      SpectralData sd = simultaneous_diagonalize(fij_operators(s, b),
                                                 s.form_on_m().restrict_gram(b.w), b.z.size());
      std::vector<std::string> key;
      for (const auto& rec : sd.records) {
        std::string k;
        for (std::size_t i = 0; i < rec.fvals.rows(); ++i)
          for (std::size_t j = 0; j < rec.fvals.cols(); ++j) k += rec.fvals(i, j).str() + ";";
        key.push_back(k);
      }
      std::sort(key.begin(), key.end());
      return key;
    };
    auto nil_dim = [&](const SymmetricTriple& s) {
      MaxCenterBasis b = max_center_basis(s);
      SpectralData sd = simultaneous_diagonalize(fij_operators(s, b),
                                                 s.form_on_m().restrict_gram(b.w), b.z.size());
      return split_w(sd).first.size();
    };
    auto base_key = spectral_key(t);
    std::size_t base_nil = nil_dim(t);

    BilinearForm bm = t.form_on_m();
    AdaptedBasis ab;
    ab.e = basis.z;
    ab.w = basis.w;
    ab.estar = basis.zstar;
    for (const auto& wv : basis.w) ab.w_norms.push_back(bm.eval(wv, wv));
    for (int it = 0; it < 100; ++it) {
      // Random Gamma_decomp element: rho_W, rho_skew, exp(ad h) composed.
      Matrix l(ab.e.size(), ab.w.size());
      for (std::size_t i = 0; i < l.rows(); ++i)
        for (std::size_t j = 0; j < l.cols(); ++j) l(i, j) = Rational(val(rng));
      Matrix q = GammaElement::rho_w(ab, t.dim_m(), l).matrix();
      if (ab.e.size() >= 2) {
        Matrix s(ab.e.size(), ab.e.size());
        Rational v(val(rng));
        s(0, 1) = v;
        s(1, 0) = -v;
        q = GammaElement::rho_skew(ab, t.dim_m(), s).matrix() * q;
      }
      Vector h(t.dim_g(), Rational(0));
      for (auto hi : t.h_indices()) h[hi] = Rational(val(rng));
      q = exp_ad_m(t, h) * q;

      SymmetricTriple moved = t.rebase_m(q);
      CHECK(spectral_key(moved) == base_key);
      CHECK(nil_dim(moved) == base_nil);
    }
  }
}

TEST_CASE("family_isomorphic: least nilpotent for p in {1, 2}, Unknown beyond") {
  // p = 1 reduces to the Lorentz decision (f_a = eps_a Lambda_a^2).
  LeastNilpotentParams a1{1, {rr(0)}, {1, -1}, {Vector{rr(1)}, Vector{rr(2)}}};
  LeastNilpotentParams b1{1, {rr(0)}, {1, -1}, {Vector{rr(2)}, Vector{rr(4)}}};
  CHECK(family_isomorphic(FamilyParams{a1}, FamilyParams{b1}).verdict ==
        IsoDecision::Verdict::Isomorphic);
  LeastNilpotentParams c1{1, {rr(0)}, {-1, 1}, {Vector{rr(1)}, Vector{rr(2)}}};
  CHECK(family_isomorphic(FamilyParams{a1}, FamilyParams{c1}).verdict ==
        IsoDecision::Verdict::NotIsomorphic);

  // p = 2: P Lambda = +-Lambda~ o Pi with det(P)^2 b = b~.
  auto b16 = [](long v) {
    std::vector<Rational> b(16, Rational(0));
    auto set = [&b](std::size_t i, std::size_t j, std::size_t k, std::size_t l, long w) {
      b[((i * 2 + j) * 2 + k) * 2 + l] = Rational(w);
    };
    set(0, 1, 0, 1, v);
    set(1, 0, 0, 1, -v);
    set(0, 1, 1, 0, -v);
    set(1, 0, 1, 0, v);
    return b;
  };
  LeastNilpotentParams a2{2, b16(1), {1}, {Vector{rr(1), rr(0)}}};
  // Double Lambda and quadruple b: P = 2I with det(P)^2 = 16? No: b~ = det^2 b
  // forces b~ = 16 b for P = 2I; use Lambda~ = 2 Lambda and b~ = 16.
  LeastNilpotentParams b2{2, b16(16), {1}, {Vector{rr(2), rr(0)}}};
  CHECK(family_isomorphic(FamilyParams{a2}, FamilyParams{b2}).verdict ==
        IsoDecision::Verdict::Isomorphic);
  // Rank-1 Lambda leaves determinant freedom: b~/b = 2 needs det = sqrt(2),
  // carried exactly in the quadratic extension.
  LeastNilpotentParams c2{2, b16(2), {1}, {Vector{rr(1), rr(0)}}};
  IsoDecision dq = family_isomorphic(FamilyParams{a2}, FamilyParams{c2});
  REQUIRE(dq.verdict == IsoDecision::Verdict::Isomorphic);
  CHECK_FALSE(dq.certificate->witness_irr.is_zero());
  // Sign of b is an invariant.
  LeastNilpotentParams d2{2, b16(-1), {1}, {Vector{rr(1), rr(0)}}};
  CHECK(family_isomorphic(FamilyParams{a2}, FamilyParams{d2}).verdict ==
        IsoDecision::Verdict::NotIsomorphic);

  // p >= 3: honest Unknown.
  std::vector<Rational> b3(81, Rational(0));
  LeastNilpotentParams a3{3, b3, {1}, {Vector{rr(1), rr(0), rr(0)}}};
  // (not a valid closure instance, but the decider bails before building)
  CHECK(family_isomorphic(FamilyParams{a3}, FamilyParams{a3}).verdict ==
        IsoDecision::Verdict::Unknown);
}
