#include "pmri/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "pmri/error.hpp"

namespace pmri {
namespace {

void check_same_shape(const MagnitudeImage& x, const MagnitudeImage& y) {
  if (!x.pixels.same_shape(y.pixels))
    throw Error(ErrorCode::kDimMismatch, std::to_string(x.ny()) + "x" + std::to_string(x.nx()) + " vs " +
                                             std::to_string(y.ny()) + "x" + std::to_string(y.nx()));
}

void check_range(double dynamic_range) {
  if (!(dynamic_range > 0.0) || !std::isfinite(dynamic_range))
    throw Error(ErrorCode::kInvalidArgument, "dynamic range must be positive and finite");
}

}  // namespace

std::array<double, kSsimWindow> ssim_gaussian_taps() {
  std::array<double, kSsimWindow> taps{};
  const double mid = static_cast<double>(kSsimWindow / 2);
  double total = 0.0;
  for (std::size_t i = 0; i < kSsimWindow; ++i) {
    const double d = static_cast<double>(i) - mid;
    taps[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    total += taps[i];
  }
  for (auto& t : taps) t /= total;
  return taps;
}

double rmse(const MagnitudeImage& x, const MagnitudeImage& y) {
  check_same_shape(x, y);
  const auto& a = x.pixels.data();
  const auto& b = y.pixels.data();
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.size()));
}

double psnr_from_rmse(double rmse_value, double dynamic_range) {
  check_range(dynamic_range);
  if (rmse_value == 0.0) return std::numeric_limits<double>::infinity();
  return -20.0 * std::log10(rmse_value / dynamic_range);
}

double psnr(const MagnitudeImage& x, const MagnitudeImage& ref, double dynamic_range) {
  return psnr_from_rmse(rmse(x, ref), dynamic_range);
}

double ssim(const MagnitudeImage& x, const MagnitudeImage& ref, double dynamic_range) {
  check_same_shape(x, ref);
  check_range(dynamic_range);
  const std::size_t ny = x.ny();
  const std::size_t nx = x.nx();
  if (ny < kSsimWindow || nx < kSsimWindow)
    throw Error(ErrorCode::kTooSmall, "SSIM needs at least 11x11 pixels");

  const auto taps = ssim_gaussian_taps();
  const double c1 = (kSsimK1 * dynamic_range) * (kSsimK1 * dynamic_range);
  const double c2 = (kSsimK2 * dynamic_range) * (kSsimK2 * dynamic_range);
  const std::size_t out_y = ny - kSsimWindow + 1;
  const std::size_t out_x = nx - kSsimWindow + 1;

  // Horizontal pass of the five moment images: x, y, x^2, y^2, xy.
  constexpr std::size_t kMoments = 5;
  std::vector<double> horiz(kMoments * ny * out_x);
  auto h_at = [&](std::size_t m, std::size_t y, std::size_t xo) -> double& {
    return horiz[(m * ny + y) * out_x + xo];
  };
  const auto rows = static_cast<std::ptrdiff_t>(ny);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t y = 0; y < rows; ++y) {
    for (std::size_t xo = 0; xo < out_x; ++xo) {
      double s[kMoments] = {};
      for (std::size_t k = 0; k < kSsimWindow; ++k) {
        const double a = x(y, xo + k);
        const double b = ref(y, xo + k);
        const double w = taps[k];
        s[0] += w * a;
        s[1] += w * b;
        s[2] += w * a * a;
        s[3] += w * b * b;
        s[4] += w * a * b;
      }
      for (std::size_t m = 0; m < kMoments; ++m) h_at(m, y, xo) = s[m];
    }
  }

  std::vector<double> row_sums(out_y, 0.0);
  const auto map_rows = static_cast<std::ptrdiff_t>(out_y);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t yo = 0; yo < map_rows; ++yo) {
    double row_total = 0.0;
    for (std::size_t xo = 0; xo < out_x; ++xo) {
      double s[kMoments] = {};
      for (std::size_t k = 0; k < kSsimWindow; ++k) {
        const double w = taps[k];
        for (std::size_t m = 0; m < kMoments; ++m) s[m] += w * h_at(m, yo + k, xo);
      }
      const double mu_x = s[0];
      const double mu_y = s[1];
      const double var_x = s[2] - mu_x * mu_x;
      const double var_y = s[3] - mu_y * mu_y;
      const double cov = s[4] - mu_x * mu_y;
      row_total += ((2.0 * mu_x * mu_y + c1) * (2.0 * cov + c2)) /
                   ((mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2));
    }
    row_sums[yo] = row_total;
  }

  double total = 0.0;
  for (double r : row_sums) total += r;
  return total / static_cast<double>(out_y * out_x);
}

}  // namespace pmri
