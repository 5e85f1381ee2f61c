#pragma once

// Serial reference implementations of the OpenMP kernels. They share no loop
// code with the parallel versions and exist for parity tests and benchmarks.

#include "pmri/grappa.hpp"
#include "pmri/sampling.hpp"
#include "pmri/types.hpp"

namespace pmri::reference {

KSpaceVolume ifft2_coils(const KSpaceVolume& kspace);
MagnitudeImage rss_combine(const KSpaceVolume& coil_images);
GrappaKernel calibrate(const KSpaceVolume& vol, const SamplingMask& mask, const KernelGeometry& geom,
                       double lambda_rel);
KSpaceVolume interpolate(const KSpaceVolume& under, const GrappaKernel& kernel, const SamplingMask& mask);

// Direct evaluation of every 11x11 window with the 2D Gaussian weights.
double ssim(const MagnitudeImage& x, const MagnitudeImage& ref, double dynamic_range);

}  // namespace pmri::reference
