// Serial reference vs OpenMP kernels, FFT passes and one full iteration.

#include <benchmark/benchmark.h>

#include <random>

#include "csmri/kernels.hpp"
#include "csmri/masks.hpp"
#include "csmri/solver.hpp"
#include "csmri/transform.hpp"

using namespace csmri;

namespace {

ComplexImage noise(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  ComplexImage img(n, n);
  for (auto& v : img.data()) v = {g(rng), g(rng)};
  return img;
}

struct Fixture {
  std::size_t n;
  ComplexImage a, b, c, d;
  SamplingMask mask;
  explicit Fixture(std::size_t size)
      : n(size), a(noise(n, 1)), b(noise(n, 2)), c(noise(n, 3)), d(noise(n, 4)),
        mask(random_mask({MaskKind::random, n, n, 0.3, {}, 0, true})) {}
};

Exec exec_of(const benchmark::State& st) { return st.range(1) ? Exec::parallel : Exec::serial; }

void BM_Shrink(benchmark::State& st) {
  Fixture f(st.range(0));
  const auto& k = kernels::table(exec_of(st));
  for (auto _ : st) {
    k.shrink(f.a.data(), f.b.data(), 20.0, f.c.data());
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * f.a.size());
}

void BM_Blend(benchmark::State& st) {
  Fixture f(st.range(0));
  const auto& k = kernels::table(exec_of(st));
  for (auto _ : st) {
    k.blend_kspace(f.a.data(), f.b.data(), f.c.data(), f.mask.indicator(), 10.0, 20.0, f.d.data());
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * f.a.size());
}

void BM_AscendDuals(benchmark::State& st) {
  Fixture f(st.range(0));
  auto l1 = f.c, l2 = f.d;
  const auto& k = kernels::table(exec_of(st));
  for (auto _ : st) {
    k.ascend_duals(f.a.data(), f.b.data(), f.mask.indicator(), f.c.data(), f.d.data(), 1e-9,
                   1e-9, l1.data(), l2.data());
    benchmark::ClobberMemory();
  }
  st.SetItemsProcessed(st.iterations() * f.a.size());
}

void BM_SumAbs(benchmark::State& st) {
  Fixture f(st.range(0));
  const auto& k = kernels::table(exec_of(st));
  for (auto _ : st) benchmark::DoNotOptimize(k.sum_abs(f.a.data()));
  st.SetItemsProcessed(st.iterations() * f.a.size());
}

void BM_Fft(benchmark::State& st) {
  const std::size_t n = st.range(0);
  TransformPlan plan(n, n);
  auto x = noise(n, 5);
  for (auto _ : st) {
    plan.forward(x, x, exec_of(st));
    plan.inverse(x, x, exec_of(st));
    benchmark::ClobberMemory();
  }
}

void BM_Iteration(benchmark::State& st) {
  const std::size_t n = st.range(0);
  SolverConfig cfg;
  cfg.exec = exec_of(st);
  TransformPlan plan(n, n);
  const auto mask = random_mask({MaskKind::random, n, n, 0.3, {}, 0, true});
  const auto y0 = mask_apply(noise(n, 6), mask);
  auto s = make_initial_state(y0, plan, cfg.exec);
  for (auto _ : st) benchmark::DoNotOptimize(admm_iteration(s, y0, mask, plan, cfg));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (long n : {128, 512, 1024})
    for (long par : {0, 1}) b->Args({n, par});
  b->ArgNames({"n", "omp"});
}

}  // namespace

BENCHMARK(BM_Shrink)->Apply(sizes);
BENCHMARK(BM_Blend)->Apply(sizes);
BENCHMARK(BM_AscendDuals)->Apply(sizes);
BENCHMARK(BM_SumAbs)->Apply(sizes);
BENCHMARK(BM_Fft)->Apply(sizes)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Iteration)->Apply(sizes)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
