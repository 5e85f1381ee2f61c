#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

#include "pmri/sampling.hpp"
#include "pmri/types.hpp"

namespace pmri {

struct KernelGeometry {
  std::size_t ky_taps = 4;  // acquired lattice lines used as sources
  std::size_t kx_taps = 5;  // odd column width

  // Throws InvalidGeometry unless ky_taps >= 2 and kx_taps is odd.
  void validate() const;

  // Source line offsets relative to the lattice line just above the target,
  // in units of accel: -(ky_taps-1)/2, ..., ky_taps/2.
  std::ptrdiff_t first_tap() const noexcept { return -static_cast<std::ptrdiff_t>((ky_taps - 1) / 2); }

  // Number of ky lines one calibration window covers.
  std::size_t ky_span(std::size_t accel) const noexcept { return (ky_taps - 1) * accel + 1; }

  // Smallest ACS block make_mask should produce so calibration has accel+1
  // window positions.
  std::size_t min_acs(std::size_t accel) const noexcept { return ky_span(accel) + accel; }

  friend bool operator==(const KernelGeometry&, const KernelGeometry&) = default;
};

using WeightMatrix = Eigen::MatrixXcd;

// Calibrated weights. weights[d-1] maps the source vector (coil-major, then ky
// tap, then kx tap; length ncoils*ky_taps*kx_taps) to one value per target coil
// for a line d lines below its lattice line: target = source^T * weights[d-1].
struct GrappaKernel {
  KernelGeometry geometry;
  std::size_t accel = 1;
  std::size_t ncoils = 0;
  double lambda_rel = 0.0;
  std::vector<WeightMatrix> weights;

  std::size_t source_count() const noexcept { return ncoils * geometry.ky_taps * geometry.kx_taps; }

  // Throws MissingOffsetWeights if a weight set is absent or misshapen.
  void validate() const;
};

// Tikhonov-regularized least-squares fit over every fully interior window of
// the ACS block: (A^H A + lambda I) W = A^H B with
// lambda = lambda_rel * trace(A^H A) / cols(A). Offsets are solved in parallel.
// Errors: AcsTooSmall, SingularSystem (lambda_rel == 0 and rank-deficient),
// DimMismatch, InvalidGeometry.
GrappaKernel calibrate(const KSpaceVolume& vol, const SamplingMask& mask, const KernelGeometry& geom,
                       double lambda_rel);

// Fills every missing line from its lattice neighbours; acquired lines are
// copied unchanged. Sources outside the grid read as zero. Missing lines are
// synthesized in parallel.
KSpaceVolume interpolate(const KSpaceVolume& under, const GrappaKernel& kernel, const SamplingMask& mask);

struct GrappaRecon {
  MagnitudeImage image;
  GrappaKernel kernel;
  KSpaceVolume kspace;  // interpolated multi-coil k-space
};

// calibrate -> interpolate -> per-coil inverse FFT -> RSS. The input is masked
// first, so fully sampled data may be passed directly.
GrappaRecon grappa_rss_recon(const KSpaceVolume& under, const SamplingMask& mask, const KernelGeometry& geom,
                             double lambda_rel);

namespace detail {

// Calibration system for one missing-line offset. Exposed for the serial
// reference and tests.
struct CalibrationSystem {
  Eigen::MatrixXcd sources;  // rows = windows, cols = source_count
  Eigen::MatrixXcd targets;  // rows = windows, cols = ncoils
};

CalibrationSystem build_calibration_system(const KSpaceVolume& vol, const SamplingMask& mask,
                                           const KernelGeometry& geom, std::size_t delta);

WeightMatrix solve_tikhonov(const CalibrationSystem& sys, double lambda_rel);

void check_calibration_inputs(const KSpaceVolume& vol, const SamplingMask& mask, const KernelGeometry& geom);

// Fills one missing line (all coils) of out from the lattice lines of under.
void synthesize_line(const KSpaceVolume& under, const GrappaKernel& kernel, const SamplingMask& mask,
                     std::size_t line, KSpaceVolume& out);

void check_interpolation_inputs(const KSpaceVolume& under, const GrappaKernel& kernel, const SamplingMask& mask);

}  // namespace detail

}  // namespace pmri
