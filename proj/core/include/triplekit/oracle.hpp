#ifndef TRIPLEKIT_ORACLE_HPP
#define TRIPLEKIT_ORACLE_HPP

#include "triplekit/classify.hpp"

namespace triplekit {

struct GridSpec {
  std::size_t p = 2, q = 2;
  std::vector<Rational> value_set;
  bool use_a = false, use_b = false, use_f = false;
  std::size_t max_candidates = 10'000'000;
  std::size_t shards = 1;
};

struct CensusEntry {
  CoefficientSet coefficients;
  bool jacobi_ok = false;
  bool relations_ok = false;
  DecompositionResult::Kind indecomposable_verdict = DecompositionResult::Kind::Unknown;
  bool bordemann_ok = false;      // dim z >= 2 whenever nilpotent (Jacobi-passing entries)
  std::size_t class_id = 0;       // isomorphism class among Jacobi-passing entries
};

/// Grid enumeration of maximal-center structure coefficients: builds the
/// bracket table at every admissible grid point, runs the full Jacobi check
/// against the relations check, and buckets the Lie-algebra points into
/// isomorphism classes by exhaustive witness search.
std::vector<CensusEntry> enumerate_max_center(const GridSpec& spec);

std::size_t census_class_count(const std::vector<CensusEntry>& census);

struct GeneratorGrid {
  std::vector<Rational> l_values = {Rational(-1), Rational(1)};  // Gamma_decomp entries
  std::vector<Rational> scalings = {};                           // z-block sqrt-scalings
  std::size_t max_candidates = 20000;
};

/// Bounded witness search: composes exact isometry candidates (z-scalings,
/// signed W-permutations, Gamma_decomp moves) and tests exact transport onto
/// t2. Absence of a witness within the bound is NOT a nonexistence proof.
std::optional<IsomorphismCertificate> brute_force_iso(const SymmetricTriple& t1,
                                                      const SymmetricTriple& t2,
                                                      const GeneratorGrid& grid);

struct EquivalenceReport {
  std::size_t samples = 0;
  std::size_t jacobi_pass = 0;
  std::size_t discrepancies = 0;  // samples where Jacobi and relations disagree
};

/// Random symmetric-constrained (a, b, f) samples; asserts Jacobi residual
/// emptiness coincides with the relations verdict, sample by sample.
EquivalenceReport jacobi_relations_equivalence(std::size_t p, std::size_t q,
                                               std::size_t sample_count, unsigned seed = 1);

}  // namespace triplekit

#endif
