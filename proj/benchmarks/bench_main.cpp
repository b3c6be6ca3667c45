#include <benchmark/benchmark.h>

#include <random>

#include "triplekit/normal_forms.hpp"
#include "triplekit/oracle.hpp"
#include "triplekit/witt.hpp"

using namespace triplekit;

namespace {

Matrix random_gram(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<long> val(-2, 2);
  std::uniform_int_distribution<int> sgn(0, 1);
  Matrix lower = Matrix::identity(n), d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    d(i, i) = Rational(sgn(rng) ? 1 : -1);
    for (std::size_t j = 0; j < i; ++j) lower(i, j) = Rational(val(rng));
  }
  return lower.transpose() * d * lower;
}

}  // namespace

static void BM_Signature(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::size_t n = static_cast<std::size_t>(state.range(0));
  Matrix g = random_gram(rng, n);
  for (auto _ : state) benchmark::DoNotOptimize(signature_of_gram(g));
}
BENCHMARK(BM_Signature)->Arg(4)->Arg(8)->Arg(12);

static void BM_JacobiCheck(benchmark::State& state) {
  SymmetricTriple t = build_lorentz({Rational(1), Rational(2), Rational(-1), Rational(3),
                                     Rational(5), Rational(-2)});
  for (auto _ : state) benchmark::DoNotOptimize(t.algebra().check_jacobi());
}
BENCHMARK(BM_JacobiCheck);

static void BM_VerifyTriple(benchmark::State& state) {
  SymmetricTriple t = build_Ia(1, 1, {Rational(1), Rational(2)}, {Rational(0), Rational(-1)});
  for (auto _ : state) benchmark::DoNotOptimize(t.verify());
}
BENCHMARK(BM_VerifyTriple);

static void BM_AdaptedDecompose(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::size_t n = 8;
  BilinearForm b{random_gram(rng, n)};
  std::uniform_int_distribution<long> val(-2, 2);
  std::vector<Vector> gens;
  for (int k = 0; k < 3; ++k) {
    Vector v;
    for (std::size_t i = 0; i < n; ++i) v.push_back(Rational(val(rng)));
    gens.push_back(v);
  }
  Subspace f = Subspace::span(n, gens);
  for (auto _ : state) benchmark::DoNotOptimize(adapted_decompose(b, f));
}
BENCHMARK(BM_AdaptedDecompose);

static void BM_Census22(benchmark::State& state) {
  GridSpec spec;
  spec.p = 2;
  spec.q = 2;
  spec.value_set = {Rational(-2), Rational(-1), Rational(1), Rational(2)};
  spec.use_b = true;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_max_center(spec));
}
BENCHMARK(BM_Census22);

BENCHMARK_MAIN();
