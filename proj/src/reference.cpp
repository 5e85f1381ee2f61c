#include "pmri/reference.hpp"

#include <cmath>

#include "pmri/fft.hpp"
#include "pmri/metrics.hpp"

namespace pmri::reference {

KSpaceVolume ifft2_coils(const KSpaceVolume& kspace) {
  KSpaceVolume out(kspace.ncoils(), kspace.ny(), kspace.nx());
  for (std::size_t c = 0; c < kspace.ncoils(); ++c) out.set_plane(c, ifft2_centered(kspace.plane(c)));
  return out;
}

MagnitudeImage rss_combine(const KSpaceVolume& coil_images) {
  RealImage out(coil_images.ny(), coil_images.nx());
  for (std::size_t y = 0; y < out.ny(); ++y) {
    for (std::size_t x = 0; x < out.nx(); ++x) {
      double acc = 0.0;
      for (std::size_t c = 0; c < coil_images.ncoils(); ++c) acc += std::norm(coil_images(c, y, x));
      out(y, x) = std::sqrt(acc);
    }
  }
  return MagnitudeImage::with_max_range(std::move(out));
}

GrappaKernel calibrate(const KSpaceVolume& vol, const SamplingMask& mask, const KernelGeometry& geom,
                       double lambda_rel) {
  detail::check_calibration_inputs(vol, mask, geom);
  const long accel = static_cast<long>(mask.accel());
  const long first = geom.first_tap();
  const long taps = static_cast<long>(geom.ky_taps);
  const long half = static_cast<long>(geom.kx_taps / 2);
  const long nx = static_cast<long>(vol.nx());
  const long ncoils = static_cast<long>(vol.ncoils());
  const long lo = static_cast<long>(mask.acs_begin());
  const long hi = static_cast<long>(mask.acs_end());

  GrappaKernel kernel{geom, mask.accel(), vol.ncoils(), lambda_rel, {}};
  for (long delta = 1; delta < accel; ++delta) {
    // Enumerate candidate target lines and keep those whose whole window is in the ACS.
    std::vector<long> bases;
    for (long t = lo; t < hi; ++t) {
      const long b = t - delta;
      if (b + first * accel >= lo && b + (first + taps - 1) * accel < hi) bases.push_back(b);
    }
    detail::CalibrationSystem sys{
        Eigen::MatrixXcd(static_cast<long>(bases.size()) * (nx - 2 * half), ncoils * taps * (2 * half + 1)),
        Eigen::MatrixXcd(static_cast<long>(bases.size()) * (nx - 2 * half), ncoils)};
    long row = 0;
    for (long b : bases) {
      for (long x = half; x < nx - half; ++x) {
        long col = 0;
        for (long c = 0; c < ncoils; ++c) {
          for (long j = 0; j < taps; ++j) {
            for (long dx = -half; dx <= half; ++dx) sys.sources(row, col++) = vol(c, b + (first + j) * accel, x + dx);
          }
        }
        for (long c = 0; c < ncoils; ++c) sys.targets(row, c) = vol(c, b + delta, x);
        ++row;
      }
    }
    kernel.weights.push_back(detail::solve_tikhonov(sys, lambda_rel));
  }
  return kernel;
}

KSpaceVolume interpolate(const KSpaceVolume& under, const GrappaKernel& kernel, const SamplingMask& mask) {
  detail::check_interpolation_inputs(under, kernel, mask);
  KSpaceVolume out = under;
  const long accel = static_cast<long>(mask.accel());
  const long first = kernel.geometry.first_tap();
  const long taps = static_cast<long>(kernel.geometry.ky_taps);
  const long half = static_cast<long>(kernel.geometry.kx_taps / 2);
  const long ny = static_cast<long>(under.ny());
  const long nx = static_cast<long>(under.nx());
  const long ncoils = static_cast<long>(under.ncoils());
  const long offset = static_cast<long>(mask.offset());

  for (long t = 0; t < ny; ++t) {
    if (mask.acquired(static_cast<std::size_t>(t))) continue;
    const long delta = ((t - offset) % accel + accel) % accel;
    const auto& w = kernel.weights[static_cast<std::size_t>(delta - 1)];
    for (long x = 0; x < nx; ++x) {
      for (long c = 0; c < ncoils; ++c) {
        cdouble acc{};
        long s = 0;
        for (long cs = 0; cs < ncoils; ++cs) {
          for (long j = 0; j < taps; ++j) {
            const long ky = t - delta + (first + j) * accel;
            for (long dx = -half; dx <= half; ++dx, ++s) {
              const long kx = x + dx;
              const cdouble v = (ky >= 0 && ky < ny && kx >= 0 && kx < nx) ? under(cs, ky, kx) : cdouble{};
              acc += v * w(s, c);
            }
          }
        }
        out(c, t, x) = acc;
      }
    }
  }
  return out;
}

double ssim(const MagnitudeImage& x, const MagnitudeImage& ref, double dynamic_range) {
  const auto g = ssim_gaussian_taps();
  const double c1 = (kSsimK1 * dynamic_range) * (kSsimK1 * dynamic_range);
  const double c2 = (kSsimK2 * dynamic_range) * (kSsimK2 * dynamic_range);
  const std::size_t oy = x.ny() - kSsimWindow + 1;
  const std::size_t ox = x.nx() - kSsimWindow + 1;
  double total = 0.0;
  for (std::size_t y0 = 0; y0 < oy; ++y0) {
    for (std::size_t x0 = 0; x0 < ox; ++x0) {
      double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
      for (std::size_t i = 0; i < kSsimWindow; ++i) {
        for (std::size_t j = 0; j < kSsimWindow; ++j) {
          const double w = g[i] * g[j];
          const double a = x(y0 + i, x0 + j);
          const double b = ref(y0 + i, x0 + j);
          mx += w * a;
          my += w * b;
          sxx += w * a * a;
          syy += w * b * b;
          sxy += w * a * b;
        }
      }
      const double vx = sxx - mx * mx;
      const double vy = syy - my * my;
      const double cov = sxy - mx * my;
      total += ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  }
  return total / static_cast<double>(oy * ox);
}

}  // namespace pmri::reference
