#include <benchmark/benchmark.h>

#include "axbench/dataset.hpp"
#include "axbench/features.hpp"
#include "axbench/glyph.hpp"
#include "axbench/soundness.hpp"
#include "axbench/zoo.hpp"

using namespace axbench;

static void BM_RenderDigit(benchmark::State& state) {
  CounterRng rng(1, 0);
  const GlyphStyle style = GlyphStyle::sample(rng);
  int digit = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(render_digit(digit, style));
    digit = (digit + 1) % 10;
  }
}
BENCHMARK(BM_RenderDigit);

static void BM_L1(benchmark::State& state) {
  const auto d = sample_dataset(ScmKind::unconfounded(), 2, 0);
  for (auto _ : state) benchmark::DoNotOptimize(l1(d.observation(0), d.observation(1)));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * 2 * d.shape().size() * sizeof(float)));
}
BENCHMARK(BM_L1);

static void BM_Featurize(benchmark::State& state) {
  const auto d = sample_dataset(ScmKind::unconfounded(), 1, 0);
  std::vector<double> buf(feature_length(d.shape()));
  for (auto _ : state) {
    featurize_into(d.observation(0), buf);
    benchmark::DoNotOptimize(buf.data());
  }
}
BENCHMARK(BM_Featurize);

static void BM_GroundTruthApply(benchmark::State& state) {
  const auto d = sample_dataset(ScmKind::unconfounded(), 100, 0);
  const auto model = ground_truth_model(d);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& pa = d.parents(i);
    benchmark::DoNotOptimize(apply(*model, d.observation(i), pa, pa.with(1, 0.5), i));
    i = (i + 1) % d.size();
  }
}
BENCHMARK(BM_GroundTruthApply);
BENCHMARK_MAIN();
