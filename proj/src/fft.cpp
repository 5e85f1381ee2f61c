#include "pmri/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <span>

namespace pmri {
namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

// Centered unitary transform of one ny x nx plane. An aligned scratch buffer is
// used every time so FFTW picks the same codelets regardless of the caller's
// allocation, which keeps coil-parallel and serial results bit-identical.
void centered_transform(std::span<const cdouble> in, std::span<cdouble> out, std::size_t ny, std::size_t nx,
                        int sign) {
  const std::size_t n = ny * nx;
  std::unique_ptr<fftw_complex, FftwFree> buf(fftw_alloc_complex(n));
  auto* work = reinterpret_cast<cdouble*>(buf.get());

  const std::size_t cy = ny / 2;
  const std::size_t cx = nx / 2;
  // ifftshift: centered index (cy, cx) moves to (0, 0).
  for (std::size_t y = 0; y < ny; ++y) {
    const std::size_t sy = (y + cy) % ny;
    for (std::size_t x = 0; x < nx; ++x) work[y * nx + x] = in[sy * nx + (x + cx) % nx];
  }

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf.get(), buf.get(), sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  // fftshift: frequency 0 moves to (cy, cx).
  for (std::size_t y = 0; y < ny; ++y) {
    const std::size_t sy = (y + ny - cy) % ny;
    for (std::size_t x = 0; x < nx; ++x) out[y * nx + x] = work[sy * nx + (x + nx - cx) % nx] * scale;
  }
}

ComplexImage transform_image(const ComplexImage& img, int sign) {
  ComplexImage out(img.ny(), img.nx());
  centered_transform(img.data(), out.data(), img.ny(), img.nx(), sign);
  return out;
}

KSpaceVolume transform_coils(const KSpaceVolume& vol, int sign) {
  KSpaceVolume out(vol.ncoils(), vol.ny(), vol.nx());
  const auto ncoils = static_cast<std::ptrdiff_t>(vol.ncoils());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < ncoils; ++c) {
    centered_transform(vol.plane_span(c), out.plane_span(c), vol.ny(), vol.nx(), sign);
  }
  return out;
}

}  // namespace

ComplexImage fft2_centered(const ComplexImage& img) { return transform_image(img, FFTW_FORWARD); }
ComplexImage ifft2_centered(const ComplexImage& ksp) { return transform_image(ksp, FFTW_BACKWARD); }

KSpaceVolume fft2_coils(const KSpaceVolume& images) { return transform_coils(images, FFTW_FORWARD); }
KSpaceVolume ifft2_coils(const KSpaceVolume& kspace) { return transform_coils(kspace, FFTW_BACKWARD); }

MagnitudeImage rss_combine(const KSpaceVolume& coil_images) {
  const std::size_t ny = coil_images.ny();
  const std::size_t nx = coil_images.nx();
  RealImage out(ny, nx);
  const auto rows = static_cast<std::ptrdiff_t>(ny);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t y = 0; y < rows; ++y) {
    for (std::size_t x = 0; x < nx; ++x) {
      double acc = 0.0;
      for (std::size_t c = 0; c < coil_images.ncoils(); ++c) acc += std::norm(coil_images(c, y, x));
      out(y, x) = std::sqrt(acc);
    }
  }
  return MagnitudeImage::with_max_range(std::move(out));
}

MagnitudeImage rss_recon(const KSpaceVolume& kspace) { return rss_combine(ifft2_coils(kspace)); }

}  // namespace pmri
