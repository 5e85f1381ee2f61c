#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "pmri/types.hpp"

namespace pmri {

inline constexpr std::size_t kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimK1 = 0.01;
inline constexpr double kSsimK2 = 0.03;

// Normalized 1D Gaussian taps; the 2D window is their outer product.
std::array<double, kSsimWindow> ssim_gaussian_taps();

// sqrt(mean((x - y)^2)). DimMismatch on shape difference.
double rmse(const MagnitudeImage& x, const MagnitudeImage& y);

// -20 log10(rmse / L); +infinity when the images are identical.
double psnr(const MagnitudeImage& x, const MagnitudeImage& ref, double dynamic_range);
double psnr_from_rmse(double rmse_value, double dynamic_range);

// Mean of the local SSIM map over all fully interior 11x11 windows, Gaussian
// weights with sigma 1.5, c1 = (0.01 L)^2, c2 = (0.03 L)^2. Rows of the map are
// evaluated in parallel and summed in row order. TooSmall below 11x11.
double ssim(const MagnitudeImage& x, const MagnitudeImage& ref, double dynamic_range);

}  // namespace pmri
