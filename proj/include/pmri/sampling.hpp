#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "pmri/types.hpp"

namespace pmri {

// Equidistant 1D undersampling along ky with a random first line and a fully
// sampled central ACS block.
class SamplingMask {
 public:
  // Builds the mask for an explicit offset. acs_lines is the ACS block length;
  // the block starts at ny/2 - acs_lines/2. Throws InvalidGeometry.
  SamplingMask(std::size_t ny, std::size_t accel, double acs_fraction, std::size_t offset, std::size_t acs_lines,
               std::uint64_t seed = 0);

  std::size_t ny() const noexcept { return ny_; }
  std::size_t accel() const noexcept { return accel_; }
  double acs_fraction() const noexcept { return acs_fraction_; }
  std::size_t offset() const noexcept { return offset_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::size_t acs_begin() const noexcept { return acs_begin_; }
  std::size_t acs_end() const noexcept { return acs_begin_ + acs_lines_; }  // exclusive
  std::size_t acs_lines() const noexcept { return acs_lines_; }
  bool in_acs(std::size_t line) const noexcept { return line >= acs_begin_ && line < acs_end(); }

  bool acquired(std::size_t line) const { return acquired_.at(line); }
  const std::vector<bool>& acquired_lines() const noexcept { return acquired_; }
  std::size_t acquired_count() const noexcept;

  // Line on the equidistant lattice i = offset (mod accel).
  bool on_lattice(std::size_t line) const noexcept { return line % accel_ == offset_; }

  friend bool operator==(const SamplingMask&, const SamplingMask&) = default;

 private:
  std::size_t ny_;
  std::size_t accel_;
  double acs_fraction_;
  std::size_t offset_;
  std::size_t acs_lines_;
  std::size_t acs_begin_;
  std::uint64_t seed_;
  std::vector<bool> acquired_;
};

// ACS length for a fraction of ny: max(round(fraction * ny), min_acs, 1).
std::size_t acs_length(std::size_t ny, double acs_fraction, std::size_t min_acs = 0);

// Offset drawn uniformly from [0, accel) with SplitMix64(seed).
std::size_t draw_offset(std::size_t accel, std::uint64_t seed);

// Deterministic in (ny, accel, acs_fraction, seed, min_acs). min_acs is the
// calibration floor a GRAPPA caller needs; 0 leaves the ACS at round(fraction*ny).
SamplingMask make_mask(std::size_t ny, std::size_t accel, double acs_fraction, std::uint64_t seed,
                       std::size_t min_acs = 0);

// Zeroes every non-acquired ky line of every coil.
KSpaceVolume apply_mask(const KSpaceVolume& vol, const SamplingMask& mask);

}  // namespace pmri
