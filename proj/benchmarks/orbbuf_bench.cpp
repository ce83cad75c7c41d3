#include <benchmark/benchmark.h>

#include "orbbuf/buffer.hpp"
#include "orbbuf/features.hpp"
#include "orbbuf/simulate.hpp"
#include "orbbuf/synthetic.hpp"

namespace {

using namespace orbbuf;

FrameSequence bench_sequence(int width, int height, int n) {
  SyntheticParams params;
  params.width = width;
  params.height = height;
  params.n_frames = n;
  params.dot_density = 0.25;
  params.shift_px_per_frame = 1.0;
  params.seed = 7;
  return gen_synthetic(params);
}

void bm_extract(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto seq = bench_sequence(side, side, 1);
  FeatureExtractor extractor{FeatureConfig{}};
  for (auto _ : state) {
    auto features = extractor.extract(seq.frames[0]);
    benchmark::DoNotOptimize(features);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_extract)->Arg(96)->Arg(160)->Arg(320);

void bm_similarity(benchmark::State& state) {
  const auto seq = bench_sequence(320, 240, 2);
  FeatureConfig config;
  config.max_keypoints = static_cast<int>(state.range(0));
  FeatureExtractor extractor{config};
  const auto a = extractor.extract(seq.frames[0]);
  const auto b = extractor.extract(seq.frames[1]);
  for (auto _ : state) {
    int s = extractor.similarity(a, b);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(bm_similarity)->Arg(50)->Arg(200)->Arg(500);

void bm_enqueue_orbbuf(benchmark::State& state) {
  const auto capacity = static_cast<std::size_t>(state.range(0));
  const auto seq = bench_sequence(128, 96, 256);
  FeatureConfig config;
  FeatureExtractor extractor{config};
  // Pre-extract so the loop measures buffer bookkeeping, not FAST/BRIEF.
  std::vector<FeatureSet> cache;
  for (const auto& f : seq.frames) cache.push_back(extractor.extract(f));

  for (auto _ : state) {
    SendBuffer buffer{capacity, Policy::orbbuf,
                      [&](const Frame& f) { return cache[f.id]; },
                      config.match_max_hamming, 1};
    for (const auto& f : seq.frames) buffer.enqueue(f);
    benchmark::DoNotOptimize(buffer.size());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(seq.frames.size()));
}
BENCHMARK(bm_enqueue_orbbuf)->Arg(8)->Arg(32)->Arg(128);

void bm_simulate_constrained(benchmark::State& state) {
  const auto seq = bench_sequence(96, 96, 120);
  LinkTrace trace;
  trace.points.push_back({0.0, 0.8 * 96 * 96 * 25.0});
  SimOptions options;
  options.policy = Policy::orbbuf;
  options.capacity_frames = 12;
  for (auto _ : state) {
    auto result = simulate(seq, trace, options);
    benchmark::DoNotOptimize(result.received.size());
  }
}
BENCHMARK(bm_simulate_constrained);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
