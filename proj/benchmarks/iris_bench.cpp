// Microbenchmarks for the hot paths of the pipeline: the spectral transforms,
// the three encoders, Hamming matching, and segmentation. Sizes match the
// standard 16x256 code (4096 bits) unless the benchmark argument says
// otherwise.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <random>
#include <vector>

#include "iris/encoders.hpp"
#include "iris/matching.hpp"
#include "iris/segmentation.hpp"
#include "iris/synth.hpp"
#include "iris/transforms.hpp"

namespace {

iris::MatD random_mat(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  iris::MatD m(rows, cols);
  for (double& v : m.v) v = uni(rng);
  return m;
}

iris::PolarIrisSegment random_polar(std::size_t angles, std::size_t radii, std::uint64_t seed) {
  iris::PolarIrisSegment seg;
  seg.data = random_mat(angles, radii, seed);
  seg.pupil_radius = 30.0;
  seg.radial_step = 40.0 / static_cast<double>(radii);
  return seg;
}

iris::IrisCode random_code(const iris::EncoderConfig& cfg, std::uint64_t seed) {
  const iris::PolarDims pd = iris::required_polar_dims(cfg);
  return iris::encode(random_polar(pd.angles, pd.radii, seed), cfg);
}

iris::GrayImage bench_eye() {
  iris::EyeParams p;
  p.noise_seed = 99;
  p.texture.terms = {{12.0, 1.2, 1.0, 0.3, 0.9}, {17.0, 2.1, 0.7, 1.1, 0.2}};
  p.texture.inv_rms = 1.0;
  return iris::render_eye(p, 256, 256);
}

void bm_haar2d(benchmark::State& state) {
  const auto m = random_mat(static_cast<std::size_t>(state.range(0)),
                            static_cast<std::size_t>(state.range(1)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(iris::haar2d(m));
}
BENCHMARK(bm_haar2d)->Args({32, 512})->Args({64, 1024});

void bm_hilbert_analytic(benchmark::State& state) {
  const auto m = random_mat(1, static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(iris::hilbert_analytic(m.v));
}
BENCHMARK(bm_hilbert_analytic)->Arg(16)->Arg(64)->Arg(4096);

void bm_log_gabor_filter_row(benchmark::State& state) {
  const auto m = random_mat(1, static_cast<std::size_t>(state.range(0)), 3);
  const iris::LogGaborParams params;
  for (auto _ : state) benchmark::DoNotOptimize(iris::log_gabor_filter_row(m.v, params));
}
BENCHMARK(bm_log_gabor_filter_row)->Arg(128)->Arg(512);

void bm_encode(benchmark::State& state, iris::EncoderId id) {
  iris::EncoderConfig cfg;
  cfg.encoder = id;
  const iris::PolarDims pd = iris::required_polar_dims(cfg);
  const auto polar = random_polar(pd.angles, pd.radii, 4);
  for (auto _ : state) benchmark::DoNotOptimize(iris::encode(polar, cfg));
}
BENCHMARK_CAPTURE(bm_encode, hh1_16x256, iris::EncoderId::hh1);
BENCHMARK_CAPTURE(bm_encode, hh2_16x256, iris::EncoderId::hh2);
BENCHMARK_CAPTURE(bm_encode, lge_16x256, iris::EncoderId::lge);

void bm_hamming_similarity(benchmark::State& state) {
  const iris::EncoderConfig cfg;
  const auto a = random_code(cfg, 5);
  const auto b = random_code(cfg, 6);
  for (auto _ : state) benchmark::DoNotOptimize(iris::hamming_similarity(a, b));
}
BENCHMARK(bm_hamming_similarity);

void bm_all_pairs_scores(benchmark::State& state) {
  const iris::EncoderConfig cfg;
  std::vector<iris::LabeledCode> codes;
  const auto n = static_cast<std::size_t>(state.range(0));
  codes.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    codes.push_back({"e" + std::to_string(i / 10), random_code(cfg, 100 + i)});
  for (auto _ : state) benchmark::DoNotOptimize(iris::all_pairs_scores(codes));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * (n * (n - 1) / 2)));
}
BENCHMARK(bm_all_pairs_scores)->Arg(200)->Unit(benchmark::kMillisecond);

void bm_find_pupil(benchmark::State& state) {
  const auto img = bench_eye();
  for (auto _ : state) benchmark::DoNotOptimize(iris::find_pupil(img));
}
BENCHMARK(bm_find_pupil)->Unit(benchmark::kMillisecond);

void bm_segment(benchmark::State& state) {
  const auto img = bench_eye();
  for (auto _ : state) benchmark::DoNotOptimize(iris::segment(img, 512, 32));
}
BENCHMARK(bm_segment)->Unit(benchmark::kMillisecond);

void bm_render_eye(benchmark::State& state) {
  iris::EyeParams p;
  p.noise_seed = 7;
  p.texture.terms = {{12.0, 1.2, 1.0, 0.3, 0.9}, {17.0, 2.1, 0.7, 1.1, 0.2}};
  p.texture.inv_rms = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(iris::render_eye(p, 256, 256));
}
BENCHMARK(bm_render_eye)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
