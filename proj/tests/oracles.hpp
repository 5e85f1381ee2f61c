#pragma once

// Test-only oracles. Nothing here calls the library code paths it is used to
// check.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "pmri/grappa.hpp"
#include "pmri/rng.hpp"
#include "pmri/sampling.hpp"
#include "pmri/types.hpp"

namespace pmri::test {

inline cdouble random_complex(SplitMix64& rng) { return {rng.normal(), rng.normal()}; }

inline ComplexImage random_image(std::size_t ny, std::size_t nx, std::uint64_t seed) {
  SplitMix64 rng(seed);
  ComplexImage img(ny, nx);
  for (auto& v : img.data()) v = random_complex(rng);
  return img;
}

inline KSpaceVolume random_volume(std::size_t nc, std::size_t ny, std::size_t nx, std::uint64_t seed) {
  SplitMix64 rng(seed);
  KSpaceVolume vol(nc, ny, nx);
  for (auto& v : vol.data()) v = random_complex(rng);
  return vol;
}

inline MagnitudeImage random_magnitude(std::size_t ny, std::size_t nx, std::uint64_t seed) {
  SplitMix64 rng(seed);
  RealImage img(ny, nx);
  for (auto& v : img.data()) v = rng.uniform();
  return MagnitudeImage(std::move(img), 1.0);
}

// O(N^2) centered unitary DFT straight from the definition:
// X[k] = N^-1/2 sum_n x[n] exp(sign * 2 pi i (k - c)(n - c) / n) per axis.
inline ComplexImage direct_dft(const ComplexImage& in, int sign) {
  const std::size_t ny = in.ny();
  const std::size_t nx = in.nx();
  const double cy = static_cast<double>(ny / 2);
  const double cx = static_cast<double>(nx / 2);
  ComplexImage out(ny, nx);
  const double scale = 1.0 / std::sqrt(static_cast<double>(ny * nx));
  for (std::size_t ky = 0; ky < ny; ++ky) {
    for (std::size_t kx = 0; kx < nx; ++kx) {
      cdouble acc{};
      for (std::size_t y = 0; y < ny; ++y) {
        for (std::size_t x = 0; x < nx; ++x) {
          const double phase = sign * 2.0 * std::numbers::pi *
                               ((static_cast<double>(ky) - cy) * (static_cast<double>(y) - cy) / static_cast<double>(ny) +
                                (static_cast<double>(kx) - cx) * (static_cast<double>(x) - cx) / static_cast<double>(nx));
          acc += in(y, x) * cdouble(std::cos(phase), std::sin(phase));
        }
      }
      out(ky, kx) = acc * scale;
    }
  }
  return out;
}

inline double max_abs_diff(const ComplexImage& a, const ComplexImage& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

inline double l2_norm(const ComplexImage& a) {
  double acc = 0.0;
  for (const auto& v : a.data()) acc += std::norm(v);
  return std::sqrt(acc);
}

// SSIM by the textbook weighted-moment definitions (explicit centred sums).
inline double ssim_oracle(const MagnitudeImage& a, const MagnitudeImage& b, double range) {
  constexpr int win = 11;
  double g[win];
  double gs = 0.0;
  for (int i = 0; i < win; ++i) {
    g[i] = std::exp(-(i - 5.0) * (i - 5.0) / (2.0 * 1.5 * 1.5));
    gs += g[i];
  }
  const double c1 = std::pow(0.01 * range, 2);
  const double c2 = std::pow(0.03 * range, 2);
  double total = 0.0;
  int count = 0;
  for (std::size_t y0 = 0; y0 + win <= a.ny(); ++y0) {
    for (std::size_t x0 = 0; x0 + win <= a.nx(); ++x0) {
      double ma = 0.0, mb = 0.0;
      for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) {
          const double w = g[i] * g[j] / (gs * gs);
          ma += w * a(y0 + i, x0 + j);
          mb += w * b(y0 + i, x0 + j);
        }
      double va = 0.0, vb = 0.0, cov = 0.0;
      for (int i = 0; i < win; ++i)
        for (int j = 0; j < win; ++j) {
          const double w = g[i] * g[j] / (gs * gs);
          const double da = a(y0 + i, x0 + j) - ma;
          const double db = b(y0 + i, x0 + j) - mb;
          va += w * da * da;
          vb += w * db * db;
          cov += w * da * db;
        }
      total += (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  }
  return total / count;
}

// A volume whose every off-lattice line is exactly a known linear combination
// of lattice lines (zero outside the grid), plus the kernel that generated it.
struct ConsistentModel {
  KSpaceVolume volume;
  std::vector<WeightMatrix> weights;  // weights[d-1]: sources x coils
};

inline ConsistentModel make_consistent_model(std::size_t ncoils, std::size_t ny, std::size_t nx, std::size_t accel,
                                             std::size_t offset, const KernelGeometry& geom, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const long taps = static_cast<long>(geom.ky_taps);
  const long half = static_cast<long>(geom.kx_taps / 2);
  const long first = -((taps - 1) / 2);
  const long nsrc = static_cast<long>(ncoils) * taps * (2 * half + 1);

  ConsistentModel m{KSpaceVolume(ncoils, ny, nx), {}};
  for (std::size_t d = 1; d < accel; ++d) {
    WeightMatrix w(nsrc, static_cast<long>(ncoils));
    for (long r = 0; r < w.rows(); ++r)
      for (long c = 0; c < w.cols(); ++c) w(r, c) = 0.2 * random_complex(rng);
    m.weights.push_back(w);
  }
  for (std::size_t c = 0; c < ncoils; ++c)
    for (std::size_t y = 0; y < ny; ++y)
      if (y % accel == offset)
        for (std::size_t x = 0; x < nx; ++x) m.volume(c, y, x) = random_complex(rng);

  const long R = static_cast<long>(accel);
  for (long t = 0; t < static_cast<long>(ny); ++t) {
    const long d = ((t - static_cast<long>(offset)) % R + R) % R;
    if (d == 0) continue;
    const auto& w = m.weights[d - 1];
    for (long x = 0; x < static_cast<long>(nx); ++x) {
      Eigen::RowVectorXcd src(nsrc);
      long s = 0;
      for (long c = 0; c < static_cast<long>(ncoils); ++c)
        for (long j = 0; j < taps; ++j)
          for (long dx = -half; dx <= half; ++dx) {
            const long ky = t - d + (first + j) * R;
            const long kx = x + dx;
            const bool inside = ky >= 0 && ky < static_cast<long>(ny) && kx >= 0 && kx < static_cast<long>(nx);
            src(s++) = inside ? m.volume(c, ky, kx) : cdouble{};
          }
      const Eigen::RowVectorXcd tgt = src * w;
      for (long c = 0; c < static_cast<long>(ncoils); ++c) m.volume(c, t, x) = tgt(c);
    }
  }
  return m;
}

// ACS exactly one kernel span long, starting on the lattice, so the only
// calibration windows are lattice-aligned ones.
inline SamplingMask aligned_span_mask(std::size_t ny, std::size_t accel, const KernelGeometry& geom) {
  const std::size_t span = geom.ky_span(accel);
  const std::size_t begin = ny / 2 - span / 2;
  // Lattice line sits at the first source tap of the window.
  const long first = geom.first_tap();
  const long base_mod = static_cast<long>(begin) - first * static_cast<long>(accel);
  const std::size_t offset = static_cast<std::size_t>(base_mod % static_cast<long>(accel));
  return SamplingMask(ny, accel, static_cast<double>(span) / static_cast<double>(ny), offset, span, 0);
}

}  // namespace pmri::test
