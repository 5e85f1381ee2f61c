// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Tolerances and thresholds are pinned here.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "oracles.hpp"
#include "pmri/fft.hpp"
#include "pmri/grappa.hpp"
#include "pmri/losses.hpp"
#include "pmri/metrics.hpp"
#include "pmri/phantom.hpp"
#include "pmri/report.hpp"

using namespace pmri;
namespace fs = std::filesystem;

namespace {

constexpr double kKernelTol = 1e-8;
constexpr double kLineTol = 1e-6;
constexpr double kExactSeconds = 5.0;
constexpr double kGainR2Db = 3.0;
constexpr double kGainR4Db = 1.5;
constexpr double kPhantomSeconds = 30.0;
constexpr double kSsimSelfTol = 1e-9;
constexpr double kPsnrTol = 1e-9;
constexpr double kFftRelTol = 1e-10;
constexpr double kGradRelTol = 1e-5;
constexpr double kCliSeconds = 60.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Outcome exact_recovery() {
  struct Config {
    std::size_t coils, ny, nx, accel;
    KernelGeometry geom;
  };
  const auto t0 = Clock::now();
  double kernel_err = 0.0;
  double line_err = 0.0;
  for (const auto& cfg : {Config{4, 48, 32, 2, {2, 3}}, Config{3, 64, 64, 3, {4, 3}}, Config{2, 64, 48, 4, {3, 5}},
                          Config{2, 64, 64, 2, {4, 5}}}) {
    const SamplingMask mask = test::aligned_span_mask(cfg.ny, cfg.accel, cfg.geom);
    const auto model = test::make_consistent_model(cfg.coils, cfg.ny, cfg.nx, cfg.accel, mask.offset(), cfg.geom, 77);
    const KSpaceVolume under = apply_mask(model.volume, mask);
    const GrappaKernel k = calibrate(under, mask, cfg.geom, 0.0);
    for (std::size_t d = 0; d < model.weights.size(); ++d)
      kernel_err = std::max(kernel_err, (k.weights[d] - model.weights[d]).cwiseAbs().maxCoeff());
    const KSpaceVolume out = interpolate(under, k, mask);
    const std::size_t half = cfg.geom.kx_taps / 2;
    for (std::size_t c = 0; c < cfg.coils; ++c)
      for (std::size_t y = 0; y < cfg.ny; ++y)
        for (std::size_t x = half; x + half < cfg.nx; ++x)
          line_err = std::max(line_err, std::abs(out(c, y, x) - model.volume(c, y, x)));
  }
  const double secs = seconds_since(t0);
  return {kernel_err <= kKernelTol && line_err <= kLineTol && secs < kExactSeconds,
          fmt("kernel err %.2e (<= 1e-8), line err %.2e (<= 1e-6), %.2f s (< 5 s)", kernel_err, line_err, secs)};
}

Outcome acquired_line_preservation() {
  std::size_t instances = 0;
  std::size_t mismatched = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    SplitMix64 rng(1000 + s);
    const std::size_t accel = 2 + rng.below(4);
    const std::size_t coils = 1 + rng.below(4);
    const std::size_t ny = 32 + rng.below(33);
    const std::size_t nx = 8 + rng.below(25);
    const KernelGeometry geom{2 + rng.below(3), 1 + 2 * rng.below(3)};
    const KSpaceVolume v = test::random_volume(coils, ny, nx, 5000 + s);
    const SamplingMask mask = make_mask(ny, accel, 0.1, s, geom.min_acs(accel));
    const KSpaceVolume under = apply_mask(v, mask);
    const KSpaceVolume out = interpolate(under, calibrate(under, mask, geom, 1e-3), mask);
    for (std::size_t y = 0; y < ny; ++y) {
      if (!mask.acquired(y)) continue;
      for (std::size_t c = 0; c < coils; ++c)
        for (std::size_t x = 0; x < nx; ++x)
          if (out(c, y, x) != under(c, y, x)) ++mismatched;
    }
    ++instances;
  }
  return {mismatched == 0, std::to_string(instances) + " instances, " + std::to_string(mismatched) +
                               " differing samples on acquired lines"};
}

struct PhantomRun {
  double zero_fill_db = 0.0;
  double grappa_db = 0.0;
};

// 8-coil 64x64 phantom, 8% ACS floored at the calibration minimum, lambda_rel 1e-4.
PhantomRun phantom_run(const KSpaceVolume& full, const MagnitudeImage& truth, std::size_t accel) {
  const KernelGeometry geom;
  const SamplingMask mask = make_mask(64, accel, 0.08, 2, geom.min_acs(accel));
  const double L = truth.dynamic_range;
  return {psnr(rss_recon(apply_mask(full, mask)), truth, L),
          psnr(grappa_rss_recon(full, mask, geom, 1e-4).image, truth, L)};
}

struct PhantomData {
  KSpaceVolume full;
  MagnitudeImage truth;
};

PhantomData phantom_data() {
  KSpaceVolume full = simulate_acquisition(shepp_logan(64, 64), make_sensitivities(8, 64, 64, 1), 1e-3, 1);
  MagnitudeImage truth = rss_recon(full);
  return {std::move(full), std::move(truth)};
}

Outcome phantom_improvement() {
  const auto t0 = Clock::now();
  const PhantomData pd = phantom_data();
  const PhantomRun r2 = phantom_run(pd.full, pd.truth, 2);
  const PhantomRun r4 = phantom_run(pd.full, pd.truth, 4);
  const double secs = seconds_since(t0);
  const double g2 = r2.grappa_db - r2.zero_fill_db;
  const double g4 = r4.grappa_db - r4.zero_fill_db;
  return {g2 >= kGainR2Db && g4 >= kGainR4Db && secs < kPhantomSeconds,
          fmt("gain R=2 %.2f dB (>= 3), R=4 %.2f dB (>= 1.5), %.2f s (< 30 s)", g2, g4, secs)};
}

Outcome acceleration_trend() {
  const PhantomData pd = phantom_data();
  const double p2 = phantom_run(pd.full, pd.truth, 2).grappa_db;
  const double p4 = phantom_run(pd.full, pd.truth, 4).grappa_db;
  const double p8 = phantom_run(pd.full, pd.truth, 8).grappa_db;
  return {p8 < p4 && p4 < p2, fmt("PSNR R=8 %.2f < R=4 %.2f < R=2 %.2f dB", p8, p4, p2)};
}

Outcome metric_identities() {
  double worst_ssim = 0.0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto x = test::random_magnitude(32, 40, s);
    worst_ssim = std::max(worst_ssim, std::abs(ssim(x, x, 1.0) - 1.0));
  }
  const MagnitudeImage ph = shepp_logan(64, 64);
  worst_ssim = std::max(worst_ssim, std::abs(ssim(ph, ph, 1.0) - 1.0));
  const double psnr_err = std::abs(psnr_from_rmse(0.01, 1.0) - 40.0);

  std::size_t reports = 0;
  std::size_t broken = 0;
  const PhantomData pd = phantom_data();
  for (std::size_t accel : {2u, 3u, 4u, 6u, 8u}) {
    const SamplingMask mask = make_mask(64, accel, 0.08, accel, KernelGeometry{}.min_acs(accel));
    for (const MagnitudeImage& rec : {rss_recon(apply_mask(pd.full, mask)),
                                      grappa_rss_recon(pd.full, mask, KernelGeometry{}, 1e-4).image}) {
      const ReconReport back = report_from_json(nlohmann::json::parse(report_to_json(evaluate(rec, pd.truth)).dump()));
      if (back.psnr_db != psnr_from_rmse(back.rmse, back.dynamic_range)) ++broken;
      ++reports;
    }
  }
  return {worst_ssim <= kSsimSelfTol && psnr_err <= kPsnrTol && broken == 0,
          fmt("|ssim(x,x)-1| %.1e (<= 1e-9), |psnr(0.01,1)-40| %.1e (<= 1e-9), ", worst_ssim, psnr_err) +
              std::to_string(broken) + "/" + std::to_string(reports) + " serialized reports break psnr/rmse"};
}

Outcome fft_invariants() {
  double parseval = 0.0;
  double round_trip = 0.0;
  std::size_t shapes = 0;
  for (std::size_t ny = 1; ny <= 64; ++ny)
    for (std::size_t nx = 1; nx <= 64; ++nx) {
      const ComplexImage x = test::random_image(ny, nx, ny * 100 + nx);
      const double norm = test::l2_norm(x);
      const ComplexImage k = fft2_centered(x);
      parseval = std::max(parseval, std::abs(test::l2_norm(k) - norm) / norm);
      round_trip = std::max(round_trip, test::max_abs_diff(ifft2_centered(k), x) / norm);
      ++shapes;
    }
  return {parseval <= kFftRelTol && round_trip <= kFftRelTol,
          std::to_string(shapes) + " shapes 1..64 x 1..64, " +
              fmt("Parseval rel %.1e, round trip rel %.1e (<= 1e-10)", parseval, round_trip)};
}

Outcome schedule_values() {
  const bool start = loss_schedule(0) == LossWeights{120, 30, 0, 0};
  const bool late = loss_schedule(150) == LossWeights{30, 120, 30, 100};
  const bool ramp_begin = loss_schedule(30) == LossWeights{120, 30, 0, 0} && loss_schedule(29) == loss_schedule(30);
  const bool ramp_end = loss_schedule(50) == LossWeights{30, 120, 0, 0} && loss_schedule(51) == loss_schedule(50);
  return {start && late && ramp_begin && ramp_end,
          std::string("epoch 0 ") + (start ? "ok" : "wrong") + ", epoch 150 " + (late ? "ok" : "wrong") +
              ", continuity at 30 " + (ramp_begin ? "ok" : "broken") + ", at 50 " + (ramp_end ? "ok" : "broken")};
}

Outcome gradient_check() {
  const double h = 1e-6;
  double worst = 0.0;
  for (const LossWeights& w : {LossWeights{1, 0, 0, 0}, LossWeights{0, 1, 0, 0}, LossWeights{0, 0, 1, 0},
                               LossWeights{120, 30, 0, 0}, LossWeights{30, 120, 30, 0}}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto target = test::random_magnitude(8, 8, 700 + s);
      MagnitudeImage pred = target;
      SplitMix64 rng(800 + s);
      for (auto& v : pred.pixels.data()) {
        const double mag = 0.05 + 0.3 * rng.uniform();
        v += rng.uniform() < 0.5 ? -mag : mag;
      }
      auto f = [&](const MagnitudeImage& p) {
        const LossBreakdown b = generator_loss(p, target, 1.0, w);
        return w.lambda_1 * b.l1 + w.lambda_2 * b.l2 + w.lambda_dc * b.dc;
      };
      const RealImage g = pixel_loss_gradient(pred, target, w);
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) {
        MagnitudeImage plus = pred;
        MagnitudeImage minus = pred;
        plus.pixels.data()[i] += h;
        minus.pixels.data()[i] -= h;
        const double fd = (f(plus) - f(minus)) / (2 * h);
        num = std::max(num, std::abs(fd - g.data()[i]));
        den = std::max(den, std::abs(fd));
      }
      worst = std::max(worst, num / den);
    }
  }
  return {worst <= kGradRelTol, fmt("max relative deviation %.2e (<= 1e-5) over 25 8x8 cases", worst)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const fs::path& dir, const std::string& args) {
  const std::string cmd = "cd '" + dir.string() + "' && '" PMRI_CLI_PATH "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
  const fs::path root = fs::temp_directory_path() / "pmri_acceptance_cli";
  fs::remove_all(root);
  const std::vector<std::string> steps = {
      "phantom --ny 64 --nx 64 --coils 8 --seed 1 -o p.gpks",
      "mask --ny 64 --accel 4 --acs 0.08 --seed 2",
      "grappa --in p.gpks --mask m.json --lambda 1e-4 -o recon.gpks --kernel-out kernel.gpks",
      "zero-fill --in p.gpks --mask m.json -o zf.gpks",
      "metrics --test recon.gpks --ref truth.gpks -o report.json",
  };
  const std::vector<std::string> files = {"p.gpks", "p.gpks.json", "truth.gpks", "m.json", "recon.gpks",
                                          "kernel.gpks", "zf.gpks", "report.json"};
  double smoke_secs = 0.0;
  int bad_exit = 0;
  for (const char* run : {"a", "b"}) {
    const fs::path dir = root / run;
    fs::create_directories(dir);
    const auto t0 = Clock::now();
    for (const auto& s : steps)
      if (run_cli(dir, s) != 0) ++bad_exit;
    if (std::string(run) == "a") smoke_secs = seconds_since(t0);
  }
  std::size_t differing = 0;
  for (const auto& f : files)
    if (!fs::exists(root / "a" / f) || slurp(root / "a" / f) != slurp(root / "b" / f)) ++differing;

  double psnr_db = std::nan("");
  if (fs::exists(root / "a" / "report.json")) {
    const auto j = nlohmann::json::parse(slurp(root / "a" / "report.json"));
    if (j.at("psnr_db").is_number()) psnr_db = j.at("psnr_db").get<double>();
  }
  fs::remove_all(root);
  const bool pass = bad_exit == 0 && differing == 0 && std::isfinite(psnr_db) && smoke_secs < kCliSeconds;
  return {pass, std::to_string(differing) + "/" + std::to_string(files.size()) + " files differ, " +
                    std::to_string(bad_exit) + " nonzero exits, " +
                    fmt("psnr_db %.2f, smoke run %.2f s (< 60 s)", psnr_db, smoke_secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"grappa exact recovery", exact_recovery},
      {"acquired-line preservation", acquired_line_preservation},
      {"phantom improvement over zero filling", phantom_improvement},
      {"PSNR falls with acceleration", acceleration_trend},
      {"metric identities", metric_identities},
      {"FFT Parseval and round trip", fft_invariants},
      {"loss schedule values and continuity", schedule_values},
      {"composite loss gradient", gradient_check},
      {"CLI byte determinism and smoke run", cli_determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
    if (!o.pass) ++failed;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
