#pragma once

#include "pmri/types.hpp"

namespace pmri {

// Centered unitary 2D DFT: DC sits at (ny/2, nx/2) (floor), scaling 1/sqrt(ny*nx)
// in both directions so the pair is an isometry.
ComplexImage fft2_centered(const ComplexImage& img);
ComplexImage ifft2_centered(const ComplexImage& ksp);

// Per-coil transforms of a whole volume. Coils run in parallel; output is
// bit-identical to transforming coil by coil.
KSpaceVolume fft2_coils(const KSpaceVolume& images);
KSpaceVolume ifft2_coils(const KSpaceVolume& kspace);

// out(y,x) = sqrt(sum_c |vol(c,y,x)|^2), dynamic range = max pixel.
MagnitudeImage rss_combine(const KSpaceVolume& coil_images);

// Zero-filled baseline and full-sampling reconstruction: per-coil inverse
// transform followed by RSS.
MagnitudeImage rss_recon(const KSpaceVolume& kspace);

}  // namespace pmri
