#include "pmri/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pmri/error.hpp"
#include "pmri/rng.hpp"

namespace pmri {

SamplingMask::SamplingMask(std::size_t ny, std::size_t accel, double acs_fraction, std::size_t offset,
                           std::size_t acs_lines, std::uint64_t seed)
    : ny_(ny), accel_(accel), acs_fraction_(acs_fraction), offset_(offset), acs_lines_(acs_lines), seed_(seed) {
  if (ny == 0) throw Error(ErrorCode::kInvalidGeometry, "ny must be >= 1");
  if (accel == 0 || accel > ny)
    throw Error(ErrorCode::kInvalidGeometry, "accel " + std::to_string(accel) + " outside [1, ny=" +
                                                 std::to_string(ny) + "]");
  if (!(acs_fraction > 0.0 && acs_fraction <= 1.0))
    throw Error(ErrorCode::kInvalidGeometry, "acs_fraction must lie in (0, 1]");
  if (offset >= accel) throw Error(ErrorCode::kInvalidGeometry, "offset must lie in [0, accel)");
  if (acs_lines == 0 || acs_lines > ny)
    throw Error(ErrorCode::kInvalidGeometry, "ACS block of " + std::to_string(acs_lines) + " lines does not fit ny=" +
                                                 std::to_string(ny));

  acs_begin_ = ny / 2 - acs_lines / 2;
  if (acs_begin_ + acs_lines > ny) acs_begin_ = ny - acs_lines;
  acquired_.resize(ny);
  for (std::size_t i = 0; i < ny; ++i) acquired_[i] = on_lattice(i) || in_acs(i);
}

std::size_t SamplingMask::acquired_count() const noexcept {
  return static_cast<std::size_t>(std::count(acquired_.begin(), acquired_.end(), true));
}

std::size_t acs_length(std::size_t ny, double acs_fraction, std::size_t min_acs) {
  const auto rounded = static_cast<std::size_t>(std::llround(acs_fraction * static_cast<double>(ny)));
  return std::max({rounded, min_acs, std::size_t{1}});
}

std::size_t draw_offset(std::size_t accel, std::uint64_t seed) {
  SplitMix64 rng(seed);
  return static_cast<std::size_t>(rng.below(accel));
}

SamplingMask make_mask(std::size_t ny, std::size_t accel, double acs_fraction, std::uint64_t seed,
                       std::size_t min_acs) {
  if (accel == 0 || accel > ny)
    throw Error(ErrorCode::kInvalidGeometry, "accel " + std::to_string(accel) + " outside [1, ny=" +
                                                 std::to_string(ny) + "]");
  if (!(acs_fraction > 0.0 && acs_fraction <= 1.0))
    throw Error(ErrorCode::kInvalidGeometry, "acs_fraction must lie in (0, 1]");
  return SamplingMask(ny, accel, acs_fraction, draw_offset(accel, seed), acs_length(ny, acs_fraction, min_acs), seed);
}

KSpaceVolume apply_mask(const KSpaceVolume& vol, const SamplingMask& mask) {
  if (mask.ny() != vol.ny())
    throw Error(ErrorCode::kDimMismatch, "mask has " + std::to_string(mask.ny()) + " lines, volume has " +
                                             std::to_string(vol.ny()));
  KSpaceVolume out(vol.ncoils(), vol.ny(), vol.nx());
  for (std::size_t c = 0; c < vol.ncoils(); ++c) {
    for (std::size_t y = 0; y < vol.ny(); ++y) {
      if (!mask.acquired(y)) continue;
      auto src = vol.line(c, y);
      std::copy(src.begin(), src.end(), out.line(c, y).begin());
    }
  }
  return out;
}

}  // namespace pmri
