// Serial reference vs OpenMP kernels on a phantom acquisition.
// Run with OMP_NUM_THREADS set to compare scaling.

#include <benchmark/benchmark.h>

#include "pmri/fft.hpp"
#include "pmri/grappa.hpp"
#include "pmri/metrics.hpp"
#include "pmri/phantom.hpp"
#include "pmri/reference.hpp"
#include "pmri/sampling.hpp"

namespace {

using namespace pmri;

struct Fixture {
  std::size_t n;
  std::size_t coils;
  MagnitudeImage truth;
  KSpaceVolume full;
  SamplingMask mask;
  KernelGeometry geom;
  KSpaceVolume under;
  GrappaKernel kernel;

  Fixture(std::size_t size, std::size_t ncoils)
      : n(size),
        coils(ncoils),
        truth(shepp_logan(size, size)),
        full(simulate_acquisition(truth, make_sensitivities(ncoils, size, size, 1), 1e-3, 1)),
        mask(make_mask(size, 4, 0.08, 2, KernelGeometry{}.min_acs(4))),
        under(apply_mask(full, mask)),
        kernel(calibrate(under, mask, geom, 1e-4)) {}
};

const Fixture& fixture(std::size_t n, std::size_t coils) {
  static Fixture f64(64, 8);
  static Fixture f128(128, 16);
  return (n == 64 && coils == 8) ? f64 : f128;
}

void bm_ifft_coils(benchmark::State& state) {
  const auto& f = fixture(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(ifft2_coils(f.full));
}
void bm_ifft_coils_serial(benchmark::State& state) {
  const auto& f = fixture(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(reference::ifft2_coils(f.full));
}

void bm_calibrate(benchmark::State& state) {
  const auto& f = fixture(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(calibrate(f.under, f.mask, f.geom, 1e-4));
}
void bm_calibrate_serial(benchmark::State& state) {
  const auto& f = fixture(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(reference::calibrate(f.under, f.mask, f.geom, 1e-4));
}

void bm_interpolate(benchmark::State& state) {
  const auto& f = fixture(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(interpolate(f.under, f.kernel, f.mask));
}
void bm_interpolate_serial(benchmark::State& state) {
  const auto& f = fixture(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(reference::interpolate(f.under, f.kernel, f.mask));
}

void bm_ssim(benchmark::State& state) {
  const auto& f = fixture(state.range(0), state.range(1));
  const MagnitudeImage recon = rss_recon(f.under);
  for (auto _ : state) benchmark::DoNotOptimize(ssim(recon, f.truth, 1.0));
}
void bm_ssim_serial(benchmark::State& state) {
  const auto& f = fixture(state.range(0), state.range(1));
  const MagnitudeImage recon = rss_recon(f.under);
  for (auto _ : state) benchmark::DoNotOptimize(reference::ssim(recon, f.truth, 1.0));
}

#define PMRI_SIZES ->Args({64, 8})->Args({128, 16})->Unit(benchmark::kMillisecond)

BENCHMARK(bm_ifft_coils) PMRI_SIZES;
BENCHMARK(bm_ifft_coils_serial) PMRI_SIZES;
BENCHMARK(bm_calibrate) PMRI_SIZES;
BENCHMARK(bm_calibrate_serial) PMRI_SIZES;
BENCHMARK(bm_interpolate) PMRI_SIZES;
BENCHMARK(bm_interpolate_serial) PMRI_SIZES;
BENCHMARK(bm_ssim) PMRI_SIZES;
BENCHMARK(bm_ssim_serial) PMRI_SIZES;

}  // namespace

BENCHMARK_MAIN();
