#include <benchmark/benchmark.h>

#include "polytheta/dsl.hpp"
#include "polytheta/polygonal.hpp"
#include "polytheta/theta.hpp"
#include "polytheta/transfer.hpp"

using namespace polytheta;

static void BM_AtomProduct(benchmark::State& state) {
  const auto order = static_cast<std::size_t>(state.range(0));
  const auto t = parse_product_term("Y(q)*Y(q^2)*Y(q^4)^2");
  for (auto _ : state) benchmark::DoNotOptimize(product_series(t, order));
}
BENCHMARK(BM_AtomProduct)->Arg(250)->Arg(1000)->Arg(4000);

static void BM_DenseMul(benchmark::State& state) {
  const auto order = static_cast<std::size_t>(state.range(0));
  std::vector<Coeff> c(order);
  for (std::size_t i = 0; i < order; ++i) c[i] = static_cast<Coeff>(i % 7) - 3;
  const Series a(c), b(c);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_DenseMul)->Arg(256)->Arg(1024);

static void BM_ValueSet(benchmark::State& state) {
  const auto s = parse_polygonal_sum("p8 + 2p8 + 4p8 + 4p8");
  for (auto _ : state) benchmark::DoNotOptimize(value_set(s, state.range(0)));
}
BENCHMARK(BM_ValueSet)->Arg(10000)->Arg(50000)->Arg(200000);

static void BM_RepresentationSeries(benchmark::State& state) {
  const auto s = parse_polygonal_sum("p8 + 2p8 + 4p8 + 4p8");
  for (auto _ : state) benchmark::DoNotOptimize(representation_series(s, state.range(0)));
}
BENCHMARK(BM_RepresentationSeries)->Arg(2000)->Arg(10000);

static void BM_VerifyDecomposition(benchmark::State& state) {
  Decomposition d;
  d.lhs = parse_product_term("Y(q)*Y(q^2)*Y(q^4)^2");
  d.modulus = 4;
  d.rhs = {parse_product_term("X(q^8)*X(q^16)*Y(q^4)^2"), parse_product_term("q*X(q^16)*Y(q^4)^3"),
           parse_product_term("q^2*X(q^8)*Y(q^4)^2*Y(q^8)"), parse_product_term("q^3*Y(q^4)^3*Y(q^8)")};
  for (auto _ : state) benchmark::DoNotOptimize(verify_decomposition(d, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_VerifyDecomposition)->Arg(1000);

BENCHMARK_MAIN();
