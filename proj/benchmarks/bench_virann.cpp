#include <random>

#include <benchmark/benchmark.h>

#include <virann/rep.hpp>
#include <virann/shapovalov.hpp>

using namespace virann;

static void BM_BuildModule(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_module({2.0, 0.5, N}).total_dim());
}
BENCHMARK(BM_BuildModule)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_GramRational(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  const Rational c(1, 2), h(1, 16);
  for (auto _ : state) benchmark::DoNotOptimize(gram_table<Rational>(c, h, level).size());
}
BENCHMARK(BM_GramRational)->DenseRange(4, 8, 2)->Unit(benchmark::kMillisecond);

static void BM_NormalOrderReduce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<int> word;
  for (int k = 1; k <= n; ++k) word.push_back(k);
  for (int k = n; k >= 1; --k) word.push_back(-k);
  for (auto _ : state) benchmark::DoNotOptimize(normal_order_reduce<double>(word, 2.0, 0.5).size());
}
BENCHMARK(BM_NormalOrderReduce)->DenseRange(2, 5)->Unit(benchmark::kMicrosecond);

static void BM_ApplyGenerator(benchmark::State& state) {
  const ModuleData m = build_module({2.0, 0.5, static_cast<int>(state.range(0))});
  const CMatrix in = CMatrix::Random(m.total_dim(), 16);
  CMatrix out = CMatrix::Zero(in.rows(), in.cols());
  for (auto _ : state) {
    for (int n = -2; n <= 2; ++n) m.apply_generator(n, 1.0, in, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_ApplyGenerator)->Arg(8)->Arg(12)->Arg(16);

static void BM_RepresentRandom(benchmark::State& state) {
  const ModuleData m = build_module({2.0, 0.5, static_cast<int>(state.range(0))});
  std::mt19937_64 rng(1);
  AnnulusElement E;
  E.path = random_inward_path(2, rng, 2, 0.1, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(represent(E, m).U.data());
}
BENCHMARK(BM_RepresentRandom)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
