// Parallel kernels against their serial brute-force references.
//
//   ./bench_kernels --benchmark_filter=Ocsp
//   OMP_NUM_THREADS=4 ./bench_kernels

#include <benchmark/benchmark.h>

#include "ocsp/coarsening.hpp"
#include "ocsp/distributions.hpp"
#include "ocsp/hypergraph.hpp"
#include "ocsp/reference.hpp"
#include "ocsp/solvers.hpp"

namespace {

ocsp::OcspInstance mas_instance(int n, std::size_t m) {
  ocsp::Rng rng(2024);
  return ocsp::random_instance(n, ocsp::OrderingPredicate::mas(), m, rng);
}

ocsp::Hypergraph random_graph(int n, std::size_t m) { return ocsp::Hypergraph::of(mas_instance(n, m)); }

void BM_OcspExact(benchmark::State& state) {
  const auto inst = mas_instance(static_cast<int>(state.range(0)), 3 * static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ocsp::solve_ocsp_exact(inst));
}
void BM_OcspBruteForce(benchmark::State& state) {
  const auto inst = mas_instance(static_cast<int>(state.range(0)), 3 * static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ocsp::reference::solve_ocsp_bruteforce(inst));
}
BENCHMARK(BM_OcspExact)->DenseRange(6, 9)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OcspBruteForce)->DenseRange(6, 9)->Unit(benchmark::kMillisecond);

void BM_CspExact(benchmark::State& state) {
  const auto inst = mas_instance(8, 24);
  const auto f = ocsp::CoarsePredicate::coarsen(inst.predicate(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ocsp::solve_csp_exact(inst, f));
}
void BM_CspBruteForce(benchmark::State& state) {
  const auto inst = mas_instance(8, 24);
  const auto f = ocsp::CoarsePredicate::coarsen(inst.predicate(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ocsp::reference::solve_csp_bruteforce(inst, f));
}
BENCHMARK(BM_CspExact)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CspBruteForce)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_Sshe(benchmark::State& state) {
  const auto g = random_graph(static_cast<int>(state.range(0)), 20);
  for (auto _ : state) benchmark::DoNotOptimize(ocsp::sshe_certify(g, ocsp::Rational(1, 2)));
}
void BM_SsheBruteForce(benchmark::State& state) {
  const auto g = random_graph(static_cast<int>(state.range(0)), 20);
  for (auto _ : state) benchmark::DoNotOptimize(ocsp::reference::sshe_bruteforce(g, ocsp::Rational(1, 2)));
}
BENCHMARK(BM_Sshe)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SsheBruteForce)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Sphe(benchmark::State& state) {
  const auto g = random_graph(static_cast<int>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(ocsp::sphe_certify(g, ocsp::Rational(1, 2), 4));
}
void BM_SpheBruteForce(benchmark::State& state) {
  const auto g = random_graph(static_cast<int>(state.range(0)), 16);
  for (auto _ : state) benchmark::DoNotOptimize(ocsp::reference::sphe_bruteforce(g, ocsp::Rational(1, 2), 4));
}
BENCHMARK(BM_Sphe)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SpheBruteForce)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Width(benchmark::State& state) {
  const auto f = ocsp::CoarsePredicate::coarsen(ocsp::OrderingPredicate::betweenness(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ocsp::width(f));
}
void BM_WidthBruteForce(benchmark::State& state) {
  const auto f = ocsp::CoarsePredicate::coarsen(ocsp::OrderingPredicate::betweenness(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ocsp::reference::width_bruteforce(f));
}
BENCHMARK(BM_Width)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WidthBruteForce)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
