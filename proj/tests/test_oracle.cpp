#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "helpers.hpp"
#include "triplekit/oracle.hpp"

using namespace triplekit;
using namespace triplekit::testing;

TEST_CASE("census at (2,2) over {-2,-1,1,2}: two classes by the sign of b") {
  GridSpec spec;
  spec.p = 2;
  spec.q = 2;
  spec.value_set = rlist({-2, -1, 1, 2});
  spec.use_b = true;
  std::vector<CensusEntry> census = enumerate_max_center(spec);
  REQUIRE(census.size() == 4);
  for (const auto& e : census) {
    CHECK(e.jacobi_ok);
    CHECK(e.relations_ok);
    CHECK(e.indecomposable_verdict == DecompositionResult::Kind::Indecomposable);
    CHECK(e.bordemann_ok);
  }
  CHECK(census_class_count(census) == 2);
  // Classes split exactly by the sign of b_1212.
  std::map<int, std::set<std::size_t>> by_sign;
  for (const auto& e : census) by_sign[e.coefficients.b(0, 1, 0, 1).sign()].insert(e.class_id);
  CHECK(by_sign[1].size() == 1);
  CHECK(by_sign[-1].size() == 1);
  CHECK(*by_sign[1].begin() != *by_sign[-1].begin());
}

TEST_CASE("census class ids are stable under permuted grid order") {
  GridSpec spec;
  spec.p = 2;
  spec.q = 2;
  spec.value_set = rlist({-2, -1, 1, 2});
  spec.use_b = true;
  GridSpec permuted = spec;
  permuted.value_set = rlist({2, 1, -1, -2});
  std::vector<CensusEntry> a = enumerate_max_center(spec);
  std::vector<CensusEntry> b = enumerate_max_center(permuted);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].coefficients == b[i].coefficients);  // canonical output order
    CHECK(a[i].class_id == b[i].class_id);
  }
}

TEST_CASE("census at p = 1: one class per scaling orbit") {
  GridSpec spec;
  spec.p = 1;
  spec.q = 3;
  spec.value_set = rlist({1});
  spec.use_f = true;
  // Only admissible f-tensors with entries from {1}: f_{11,ab} = 1 for all
  // a <= b, i.e. the rank-1 pattern lambda = (1, 1).
  std::vector<CensusEntry> census = enumerate_max_center(spec);
  std::size_t jacobi_pass = 0;
  for (const auto& e : census) jacobi_pass += e.jacobi_ok;
  CHECK(jacobi_pass >= 1);
  CHECK(census_class_count(census) == 1);
}

TEST_CASE("brute force witness search") {
  SymmetricTriple t1 = build_lorentz(rlist({1, 2}));
  // Identity at depth 0.
  GeneratorGrid empty_grid;
  auto self = brute_force_iso(t1, t1, empty_grid);
  REQUIRE(self.has_value());
  CHECK(self->witness_rat == Matrix::identity(4));

  // tau_4((1,2)) vs tau_4((2,4)) with scaling grid {1/2, 2}: found, matching
  // the decider's certificate.
  GeneratorGrid grid;
  grid.scalings = rlist({2});
  grid.scalings.push_back(rr(1, 2));
  SymmetricTriple t2 = build_lorentz(rlist({2, 4}));
  auto witness = brute_force_iso(t1, t2, grid);
  REQUIRE(witness.has_value());
  CHECK(verify_certificate(t1, t2, *witness));
  CHECK(lorentz_isomorphic(rlist({1, 2}), rlist({2, 4})).verdict ==
        IsoDecision::Verdict::Isomorphic);

  // tau_4((1,2)) vs tau_4((1,3)): not found (bounded), decider agrees.
  SymmetricTriple t3 = build_lorentz(rlist({1, 3}));
  CHECK_FALSE(brute_force_iso(t1, t3, grid).has_value());
  CHECK(lorentz_isomorphic(rlist({1, 2}), rlist({1, 3})).verdict ==
        IsoDecision::Verdict::NotIsomorphic);
}

TEST_CASE("oracle and decider agree on a small Lorentz sample") {
  std::vector<std::vector<Rational>> sample = {rlist({1, 2}), rlist({2, 4}), rlist({3, 6}),
                                               rlist({1, 3}), rlist({-1, 2})};
  for (std::size_t i = 0; i < sample.size(); ++i)
    for (std::size_t j = 0; j < sample.size(); ++j) {
      IsoDecision dec = lorentz_isomorphic(sample[i], sample[j]);
      GeneratorGrid grid;
      for (const auto& x : sample[i])
        for (const auto& y : sample[j])
          if (!x.is_zero() && !y.is_zero() && (y / x).sign() > 0) grid.scalings.push_back(y / x);
      auto witness =
          brute_force_iso(build_lorentz(sample[i]), build_lorentz(sample[j]), grid);
      CHECK((dec.verdict == IsoDecision::Verdict::Isomorphic) == witness.has_value());
    }
}

TEST_CASE("jacobi-relations equivalence on random constrained samples") {
  EquivalenceReport rep = jacobi_relations_equivalence(2, 4, 120, 5);
  CHECK(rep.samples > 0);
  CHECK(rep.discrepancies == 0);

  // Both verdict kinds, pinned on explicit samples: a valid rank-1 f-pattern
  // passes both checks, a perturbed one fails both.
  CoefficientSet good(2, 2);
  good.f(0, 0, 0, 0) = rr(1);
  good.f(0, 1, 0, 0) = good.f(1, 0, 0, 0) = rr(2);
  good.f(1, 1, 0, 0) = rr(4);
  good.f(0, 0, 1, 1) = rr(-1);
  good.f(0, 1, 1, 1) = good.f(1, 0, 1, 1) = rr(1);
  good.f(1, 1, 1, 1) = rr(-1);
  CHECK(coefficient_relations_check(good).empty());
  CHECK(max_center_jacobi_ok(good));
  CoefficientSet bad = good;
  bad.f(0, 0, 1, 1) = rr(2);
  CHECK_FALSE(coefficient_relations_check(bad).empty());
  CHECK_FALSE(max_center_jacobi_ok(bad));
}

TEST_CASE("grid guards") {
  GridSpec spec;
  spec.p = 2;
  spec.q = 2;
  spec.use_b = true;
  CHECK_THROWS_AS(enumerate_max_center(spec), std::invalid_argument);  // empty values
  spec.value_set = rlist({-1, 1});
  spec.max_candidates = 1;
  CHECK_THROWS_AS(enumerate_max_center(spec), std::invalid_argument);  // too large
}

TEST_CASE("sharded enumeration merges deterministically") {
  GridSpec spec;
  spec.p = 2;
  spec.q = 2;
  spec.value_set = rlist({-2, -1, 1, 2});
  spec.use_b = true;
  GridSpec sharded = spec;
  sharded.shards = 3;
  std::vector<CensusEntry> a = enumerate_max_center(spec);
  std::vector<CensusEntry> b = enumerate_max_center(sharded);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].coefficients == b[i].coefficients);
    CHECK(a[i].class_id == b[i].class_id);
  }
}

TEST_CASE("grid enumeration: Jacobi matches the relations entry by entry") {
  GridSpec spec;
  spec.p = 2;
  spec.q = 3;
  spec.value_set = rlist({-1, 0, 1});
  spec.use_f = true;
  std::vector<CensusEntry> census = enumerate_max_center(spec);
  CHECK(census.size() == 27);  // three symmetric f-slots over three values
  for (const auto& e : census) CHECK(e.jacobi_ok == e.relations_ok);
}
