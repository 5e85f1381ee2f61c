#include "pmri/grappa.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "pmri/error.hpp"
#include "pmri/fft.hpp"

namespace pmri {

void KernelGeometry::validate() const {
  if (ky_taps < 2) throw Error(ErrorCode::kInvalidGeometry, "ky_taps must be >= 2");
  if (kx_taps == 0 || kx_taps % 2 == 0) throw Error(ErrorCode::kInvalidGeometry, "kx_taps must be odd");
}

void GrappaKernel::validate() const {
  if (accel == 0 || weights.size() + 1 != accel)
    throw Error(ErrorCode::kMissingOffsetWeights, "kernel holds " + std::to_string(weights.size()) +
                                                      " weight sets, accel " + std::to_string(accel) + " needs " +
                                                      std::to_string(accel == 0 ? 0 : accel - 1));
  for (const auto& w : weights) {
    if (static_cast<std::size_t>(w.rows()) != source_count() || static_cast<std::size_t>(w.cols()) != ncoils)
      throw Error(ErrorCode::kMissingOffsetWeights, "weight set shape does not match geometry");
  }
}

namespace detail {

void check_calibration_inputs(const KSpaceVolume& vol, const SamplingMask& mask, const KernelGeometry& geom) {
  geom.validate();
  if (mask.ny() != vol.ny()) throw Error(ErrorCode::kDimMismatch, "mask and volume disagree on ny");
  const std::size_t span = geom.ky_span(mask.accel());
  if (mask.acs_lines() < span)
    throw Error(ErrorCode::kAcsTooSmall, "ACS block has " + std::to_string(mask.acs_lines()) +
                                             " lines, kernel needs " + std::to_string(span));
  if (vol.nx() < geom.kx_taps)
    throw Error(ErrorCode::kAcsTooSmall, "nx smaller than kx_taps, no interior calibration column");
}

CalibrationSystem build_calibration_system(const KSpaceVolume& vol, const SamplingMask& mask,
                                           const KernelGeometry& geom, std::size_t delta) {
  const auto accel = static_cast<std::ptrdiff_t>(mask.accel());
  const auto first = geom.first_tap();
  const auto taps = static_cast<std::ptrdiff_t>(geom.ky_taps);
  const auto half = static_cast<std::ptrdiff_t>(geom.kx_taps / 2);
  const auto nx = static_cast<std::ptrdiff_t>(vol.nx());
  const auto acs_begin = static_cast<std::ptrdiff_t>(mask.acs_begin());
  const auto acs_end = static_cast<std::ptrdiff_t>(mask.acs_end());

  // Window base b is the lattice-line position above the target; all sources
  // b + accel*(first..first+taps-1) and the target b + delta must lie in the ACS.
  const std::ptrdiff_t b_lo = acs_begin - first * accel;
  const std::ptrdiff_t b_hi = acs_end - 1 - (first + taps - 1) * accel;  // inclusive
  const std::ptrdiff_t positions = b_hi >= b_lo ? b_hi - b_lo + 1 : 0;
  const std::ptrdiff_t columns = nx - 2 * half;
  const std::ptrdiff_t rows = positions * columns;

  const auto ncoils = static_cast<std::ptrdiff_t>(vol.ncoils());
  const std::ptrdiff_t nsrc = ncoils * taps * static_cast<std::ptrdiff_t>(geom.kx_taps);
  CalibrationSystem sys{Eigen::MatrixXcd(rows, nsrc), Eigen::MatrixXcd(rows, ncoils)};

  std::ptrdiff_t r = 0;
  for (std::ptrdiff_t b = b_lo; b <= b_hi; ++b) {
    for (std::ptrdiff_t x = half; x < nx - half; ++x, ++r) {
      std::ptrdiff_t k = 0;
      for (std::ptrdiff_t c = 0; c < ncoils; ++c) {
        for (std::ptrdiff_t j = 0; j < taps; ++j) {
          const std::ptrdiff_t ky = b + (first + j) * accel;
          for (std::ptrdiff_t dx = -half; dx <= half; ++dx) sys.sources(r, k++) = vol(c, ky, x + dx);
        }
      }
      for (std::ptrdiff_t c = 0; c < ncoils; ++c) sys.targets(r, c) = vol(c, b + static_cast<std::ptrdiff_t>(delta), x);
    }
  }
  return sys;
}

WeightMatrix solve_tikhonov(const CalibrationSystem& sys, double lambda_rel) {
  if (!(lambda_rel >= 0.0) || !std::isfinite(lambda_rel))
    throw Error(ErrorCode::kInvalidArgument, "lambda_rel must be a finite nonnegative number");
  const auto& a = sys.sources;
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) throw Error(ErrorCode::kAcsTooSmall, "no calibration window fits the ACS block");

  Eigen::MatrixXcd gram = a.adjoint() * a;
  const Eigen::MatrixXcd rhs = a.adjoint() * sys.targets;
  const double lambda = lambda_rel * gram.trace().real() / static_cast<double>(n);

  if (lambda > 0.0) {
    gram.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::kSingularSystem, "regularized normal matrix not SPD");
    return llt.solve(rhs);
  }

  if (a.rows() >= n) {
    Eigen::LLT<Eigen::MatrixXcd> llt(gram);
    if (llt.info() == Eigen::Success && llt.rcond() > std::numeric_limits<double>::epsilon() * static_cast<double>(n))
      return llt.solve(rhs);
  }
  // Cholesky failed or is too ill-conditioned to trust: rank-revealing QR on A.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  if (qr.rank() < n)
    throw Error(ErrorCode::kSingularSystem, "calibration matrix has rank " + std::to_string(qr.rank()) + " < " +
                                                std::to_string(n) + " with lambda = 0");
  return qr.solve(sys.targets);
}

void check_interpolation_inputs(const KSpaceVolume& under, const GrappaKernel& kernel, const SamplingMask& mask) {
  if (mask.ny() != under.ny()) throw Error(ErrorCode::kDimMismatch, "mask and volume disagree on ny");
  if (kernel.ncoils != under.ncoils())
    throw Error(ErrorCode::kDimMismatch, "kernel calibrated for " + std::to_string(kernel.ncoils) +
                                             " coils, volume has " + std::to_string(under.ncoils()));
  if (kernel.accel != mask.accel())
    throw Error(ErrorCode::kMissingOffsetWeights, "kernel accel " + std::to_string(kernel.accel) +
                                                      " differs from mask accel " + std::to_string(mask.accel()));
  kernel.validate();
}

void synthesize_line(const KSpaceVolume& under, const GrappaKernel& kernel, const SamplingMask& mask,
                     std::size_t line, KSpaceVolume& out) {
  const auto accel = static_cast<std::ptrdiff_t>(mask.accel());
  const auto t = static_cast<std::ptrdiff_t>(line);
  const auto offset = static_cast<std::ptrdiff_t>(mask.offset());
  const std::ptrdiff_t delta = ((t - offset) % accel + accel) % accel;
  const std::ptrdiff_t base = t - delta;
  const auto& w = kernel.weights[static_cast<std::size_t>(delta - 1)];

  const auto first = kernel.geometry.first_tap();
  const auto taps = static_cast<std::ptrdiff_t>(kernel.geometry.ky_taps);
  const auto half = static_cast<std::ptrdiff_t>(kernel.geometry.kx_taps / 2);
  const auto nx = static_cast<std::ptrdiff_t>(under.nx());
  const auto ny = static_cast<std::ptrdiff_t>(under.ny());
  const auto ncoils = static_cast<std::ptrdiff_t>(under.ncoils());

  std::vector<cdouble> src(kernel.source_count());
  for (std::ptrdiff_t x = 0; x < nx; ++x) {
    std::size_t k = 0;
    for (std::ptrdiff_t c = 0; c < ncoils; ++c) {
      for (std::ptrdiff_t j = 0; j < taps; ++j) {
        const std::ptrdiff_t ky = base + (first + j) * accel;
        const bool row_ok = ky >= 0 && ky < ny;
        for (std::ptrdiff_t dx = -half; dx <= half; ++dx) {
          const std::ptrdiff_t kx = x + dx;
          src[k++] = (row_ok && kx >= 0 && kx < nx) ? under(c, ky, kx) : cdouble{};
        }
      }
    }
    for (std::ptrdiff_t c = 0; c < ncoils; ++c) {
      cdouble acc{};
      for (std::size_t s = 0; s < src.size(); ++s) acc += src[s] * w(static_cast<Eigen::Index>(s), c);
      out(c, line, x) = acc;
    }
  }
}

}  // namespace detail

GrappaKernel calibrate(const KSpaceVolume& vol, const SamplingMask& mask, const KernelGeometry& geom,
                       double lambda_rel) {
  detail::check_calibration_inputs(vol, mask, geom);
  GrappaKernel kernel{geom, mask.accel(), vol.ncoils(), lambda_rel, {}};
  kernel.weights.resize(mask.accel() - 1);

  const auto offsets = static_cast<std::ptrdiff_t>(kernel.weights.size());
  // Exceptions must not escape an OpenMP region; collect and rethrow.
  std::vector<std::exception_ptr> failures(kernel.weights.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < offsets; ++i) {
    try {
      const auto sys = detail::build_calibration_system(vol, mask, geom, static_cast<std::size_t>(i + 1));
      kernel.weights[i] = detail::solve_tikhonov(sys, lambda_rel);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return kernel;
}

KSpaceVolume interpolate(const KSpaceVolume& under, const GrappaKernel& kernel, const SamplingMask& mask) {
  detail::check_interpolation_inputs(under, kernel, mask);
  KSpaceVolume out = under;
  std::vector<std::size_t> missing;
  for (std::size_t y = 0; y < under.ny(); ++y) {
    if (!mask.acquired(y)) missing.push_back(y);
  }
  const auto count = static_cast<std::ptrdiff_t>(missing.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i) detail::synthesize_line(under, kernel, mask, missing[i], out);
  return out;
}

GrappaRecon grappa_rss_recon(const KSpaceVolume& under, const SamplingMask& mask, const KernelGeometry& geom,
                             double lambda_rel) {
  const KSpaceVolume masked = apply_mask(under, mask);
  GrappaKernel kernel;
  KSpaceVolume filled;
  if (mask.accel() == 1) {
    geom.validate();
    kernel = GrappaKernel{geom, 1, under.ncoils(), lambda_rel, {}};
    filled = masked;
  } else {
    kernel = calibrate(masked, mask, geom, lambda_rel);
    filled = interpolate(masked, kernel, mask);
  }
  return {rss_recon(filled), std::move(kernel), std::move(filled)};
}

}  // namespace pmri
