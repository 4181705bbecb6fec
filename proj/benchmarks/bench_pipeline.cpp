#include <benchmark/benchmark.h>

#include "lungsynth/components.hpp"
#include "lungsynth/filters.hpp"
#include "lungsynth/pbtseg.hpp"
#include "lungsynth/phantom.hpp"
#include "lungsynth/synth.hpp"

using namespace lungsynth;

namespace {

GrayImage phantom_image(int size) {
  RandomStream rng(1, 0);
  return normalize(phantom::two_ellipse(size, rng).image);
}

void BM_SegmentLungs(benchmark::State& state) {
  const GrayImage img = phantom_image(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pbtseg::segment_lungs(img));
}
BENCHMARK(BM_SegmentLungs)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Synthesize(benchmark::State& state) {
  const GrayImage img = phantom_image(static_cast<int>(state.range(0)));
  const pbtseg::LungMasks lungs = pbtseg::segment_lungs(img);
  const synth::Config config;
  std::uint64_t stream = 0;
  for (auto _ : state) benchmark::DoNotOptimize(synth::synthesize(img, lungs, config, stream++));
}
BENCHMARK(BM_Synthesize)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_ConnectedComponents(benchmark::State& state) {
  const BinaryMask mask = threshold_below(phantom_image(256), 0.35);
  for (auto _ : state) benchmark::DoNotOptimize(connected_components(mask));
}
BENCHMARK(BM_ConnectedComponents)->Unit(benchmark::kMicrosecond);

void BM_GaussianBlur(benchmark::State& state) {
  const GrayImage img = phantom_image(256);
  const double sigma = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_blur(img, sigma));
}
BENCHMARK(BM_GaussianBlur)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
