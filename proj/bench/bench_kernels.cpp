// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "emx/chain.hpp"
#include "emx/evaluation.hpp"
#include "emx/scheme.hpp"

using namespace emx;

namespace {

const SchemePtr& tower3() {
  static const SchemePtr s = tower_scheme(finite_proxy_tower(Domain::finite(60), 2, 8));
  return s;
}

const std::vector<PointSet>& four_subsets() {
  static const std::vector<PointSet> s = random_subsets(PointSet::range(0, 59), 4, 20000, 1);
  return s;
}

void BM_VerifyParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(verify_soundness(*tower3(), four_subsets()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(four_subsets().size()));
}

void BM_VerifySerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::verify_soundness(*tower3(), four_subsets()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(four_subsets().size()));
}

void BM_DecompressParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decompress_chain(PointSet{5, 20, 41}, *tower3(), 4));
}

void BM_DecompressSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(reference::decompress_chain(PointSet{5, 20, 41}, *tower3(), 4));
}

const EmxLearner& tank() {
  static const EmxLearner l{enumeration_scheme(enumerated_tower(Domain::naturals()))};
  return l;
}

const FiniteSupportDistribution& uniform20() {
  static const auto d = FiniteSupportDistribution::uniform(PointSet::range(1, 20));
  return d;
}

void BM_EvaluateParallel(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(tank(), uniform20(), 10, Rational(1, 4), 10000, 42));
  state.SetItemsProcessed(state.iterations() * 10000);
}

void BM_EvaluateSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::evaluate(tank(), uniform20(), 10, Rational(1, 4), 10000, 42));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}

void thread_counts(benchmark::internal::Benchmark* b) {
  for (int t = 1; t <= omp_get_num_procs(); t *= 2) b->Arg(t);
}

}  // namespace

BENCHMARK(BM_VerifySerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_VerifyParallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DecompressSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecompressParallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvaluateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluateParallel)->Apply(thread_counts)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
