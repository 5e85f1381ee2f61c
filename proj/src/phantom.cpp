#include "pmri/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "pmri/error.hpp"
#include "pmri/fft.hpp"
#include "pmri/rng.hpp"

namespace pmri {
namespace {

struct Ellipse {
  double intensity;
  double semi_x;
  double semi_y;
  double center_x;
  double center_y;
  double angle_deg;
};

constexpr std::array<Ellipse, 10> kSheppLogan{{
    {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
    {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
    {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
    {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
    {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
    {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
    {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
    {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
}};

}  // namespace

MagnitudeImage shepp_logan(std::size_t ny, std::size_t nx) {
  if (ny < 8 || nx < 8) throw Error(ErrorCode::kTooSmall, "phantom needs at least 8x8 pixels");
  RealImage img(ny, nx);
  for (std::size_t y = 0; y < ny; ++y) {
    // Pixel centres on (-1, 1); row 0 is the top (+1).
    const double v = 1.0 - (2.0 * static_cast<double>(y) + 1.0) / static_cast<double>(ny);
    for (std::size_t x = 0; x < nx; ++x) {
      const double u = (2.0 * static_cast<double>(x) + 1.0) / static_cast<double>(nx) - 1.0;
      double value = 0.0;
      for (const auto& e : kSheppLogan) {
        const double phi = e.angle_deg * std::numbers::pi / 180.0;
        const double du = u - e.center_x;
        const double dv = v - e.center_y;
        const double ru = du * std::cos(phi) + dv * std::sin(phi);
        const double rv = -du * std::sin(phi) + dv * std::cos(phi);
        if ((ru * ru) / (e.semi_x * e.semi_x) + (rv * rv) / (e.semi_y * e.semi_y) <= 1.0) value += e.intensity;
      }
      img(y, x) = std::max(value, 0.0);
    }
  }
  const double peak = *std::max_element(img.data().begin(), img.data().end());
  for (auto& p : img.data()) p /= peak;
  return MagnitudeImage(std::move(img), 1.0);
}

CoilSensitivities make_sensitivities(std::size_t ncoils, std::size_t ny, std::size_t nx, std::uint64_t seed,
                                     bool with_phase) {
  if (ncoils == 0) throw Error(ErrorCode::kInvalidArgument, "ncoils must be >= 1");
  SplitMix64 rng(seed);
  const double fy = static_cast<double>(ny);
  const double fx = static_cast<double>(nx);
  const double width = 0.6 * std::max(fy, fx);
  const double cy0 = 0.5 * (fy - 1.0);
  const double cx0 = 0.5 * (fx - 1.0);
  const double rotation = rng.uniform() * 2.0 * std::numbers::pi / static_cast<double>(ncoils);

  KSpaceVolume maps(ncoils, ny, nx);
  for (std::size_t c = 0; c < ncoils; ++c) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(ncoils) + rotation;
    const double py = cy0 + 0.55 * fy * std::sin(theta);
    const double px = cx0 + 0.55 * fx * std::cos(theta);
    // Phase ramps of at most pi across the field of view.
    const double phase0 = (rng.uniform() * 2.0 - 1.0) * std::numbers::pi;
    const double slope_y = (rng.uniform() * 2.0 - 1.0) * std::numbers::pi;
    const double slope_x = (rng.uniform() * 2.0 - 1.0) * std::numbers::pi;
    for (std::size_t y = 0; y < ny; ++y) {
      const double dy = static_cast<double>(y) - py;
      for (std::size_t x = 0; x < nx; ++x) {
        const double dx = static_cast<double>(x) - px;
        const double mag = std::exp(-(dx * dx + dy * dy) / (2.0 * width * width));
        const double phase = with_phase ? phase0 + slope_y * (static_cast<double>(y) - cy0) / fy +
                                              slope_x * (static_cast<double>(x) - cx0) / fx
                                        : 0.0;
        maps(c, y, x) = std::polar(mag, phase);
      }
    }
  }
  return {std::move(maps)};
}

KSpaceVolume simulate_acquisition(const MagnitudeImage& img, const CoilSensitivities& sens, double noise_sigma,
                                  std::uint64_t seed) {
  if (sens.maps.ny() != img.ny() || sens.maps.nx() != img.nx())
    throw Error(ErrorCode::kDimMismatch, "sensitivity maps and image differ in shape");
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "noise_sigma must be >= 0");

  KSpaceVolume weighted(sens.ncoils(), img.ny(), img.nx());
  for (std::size_t c = 0; c < sens.ncoils(); ++c) {
    for (std::size_t y = 0; y < img.ny(); ++y) {
      for (std::size_t x = 0; x < img.nx(); ++x) weighted(c, y, x) = img(y, x) * sens.maps(c, y, x);
    }
  }
  KSpaceVolume ksp = fft2_coils(weighted);
  if (noise_sigma > 0.0) {
    SplitMix64 rng(seed);
    for (auto& v : ksp.data()) {
      const double re = rng.normal();
      const double im = rng.normal();
      v += cdouble(noise_sigma * re, noise_sigma * im);
    }
  }
  return ksp;
}

}  // namespace pmri
