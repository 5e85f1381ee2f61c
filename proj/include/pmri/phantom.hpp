#pragma once

#include <cstddef>
#include <cstdint>

#include "pmri/types.hpp"

namespace pmri {

// Smooth complex receive profiles, one plane per coil.
struct CoilSensitivities {
  KSpaceVolume maps;

  std::size_t ncoils() const noexcept { return maps.ncoils(); }
};

// Modified (Toft) 10-ellipse Shepp-Logan head, scaled to [0, 1]. ny, nx >= 8.
MagnitudeImage shepp_logan(std::size_t ny, std::size_t nx);

// Gaussian-lobe magnitude (width 0.6*max(ny, nx)) centred on an ellipse 10%
// outside the field of view, times a seeded linear phase. with_phase=false
// gives real, nonnegative maps.
CoilSensitivities make_sensitivities(std::size_t ncoils, std::size_t ny, std::size_t nx, std::uint64_t seed,
                                     bool with_phase = true);

// Fully sampled multi-coil k-space: fft2_centered(img * sens[c]) plus complex
// white noise with standard deviation noise_sigma per real component.
KSpaceVolume simulate_acquisition(const MagnitudeImage& img, const CoilSensitivities& sens, double noise_sigma,
                                  std::uint64_t seed);

}  // namespace pmri
