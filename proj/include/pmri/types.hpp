#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pmri {

using cdouble = std::complex<double>;

// Dense row-major 2D grid. Rows index ky (phase encode) in k-space and y in
// image space.
template <typename T>
class Grid2 {
 public:
  Grid2() = default;
  Grid2(std::size_t ny, std::size_t nx, T fill = T{});
  Grid2(std::size_t ny, std::size_t nx, std::vector<T> data);

  std::size_t ny() const noexcept { return ny_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(std::size_t y, std::size_t x) { return data_[y * nx_ + x]; }
  const T& operator()(std::size_t y, std::size_t x) const { return data_[y * nx_ + x]; }

  std::span<T> row(std::size_t y) { return {data_.data() + y * nx_, nx_}; }
  std::span<const T> row(std::size_t y) const { return {data_.data() + y * nx_, nx_}; }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  bool same_shape(const Grid2& other) const noexcept {
    return ny_ == other.ny_ && nx_ == other.nx_;
  }

  friend bool operator==(const Grid2&, const Grid2&) = default;

 private:
  std::size_t ny_ = 0;
  std::size_t nx_ = 0;
  std::vector<T> data_;
};

using ComplexImage = Grid2<cdouble>;
using RealImage = Grid2<double>;

// Nonnegative image with a declared reference level L used by PSNR/SSIM.
struct MagnitudeImage {
  RealImage pixels;
  double dynamic_range = 1.0;

  MagnitudeImage() = default;
  MagnitudeImage(RealImage px, double range);

  std::size_t ny() const noexcept { return pixels.ny(); }
  std::size_t nx() const noexcept { return pixels.nx(); }
  double operator()(std::size_t y, std::size_t x) const { return pixels(y, x); }
  double max_value() const noexcept;

  // dynamic_range = max pixel, or 1 for an all-zero image.
  static MagnitudeImage with_max_range(RealImage px);
};

// Multi-coil complex data, coil-major: data[(c * ny + y) * nx + x].
class KSpaceVolume {
 public:
  KSpaceVolume() = default;
  KSpaceVolume(std::size_t ncoils, std::size_t ny, std::size_t nx);
  KSpaceVolume(std::size_t ncoils, std::size_t ny, std::size_t nx, std::vector<cdouble> data);
  explicit KSpaceVolume(std::span<const ComplexImage> planes);

  std::size_t ncoils() const noexcept { return ncoils_; }
  std::size_t ny() const noexcept { return ny_; }
  std::size_t nx() const noexcept { return nx_; }
  std::size_t plane_size() const noexcept { return ny_ * nx_; }

  cdouble& operator()(std::size_t c, std::size_t y, std::size_t x) {
    return data_[(c * ny_ + y) * nx_ + x];
  }
  const cdouble& operator()(std::size_t c, std::size_t y, std::size_t x) const {
    return data_[(c * ny_ + y) * nx_ + x];
  }

  std::span<cdouble> plane_span(std::size_t c) { return {data_.data() + c * plane_size(), plane_size()}; }
  std::span<const cdouble> plane_span(std::size_t c) const {
    return {data_.data() + c * plane_size(), plane_size()};
  }
  std::span<cdouble> line(std::size_t c, std::size_t y) { return {&(*this)(c, y, 0), nx_}; }
  std::span<const cdouble> line(std::size_t c, std::size_t y) const { return {&(*this)(c, y, 0), nx_}; }

  ComplexImage plane(std::size_t c) const;
  void set_plane(std::size_t c, const ComplexImage& img);

  std::vector<cdouble>& data() noexcept { return data_; }
  const std::vector<cdouble>& data() const noexcept { return data_; }

  friend bool operator==(const KSpaceVolume&, const KSpaceVolume&) = default;

 private:
  std::size_t ncoils_ = 0;
  std::size_t ny_ = 0;
  std::size_t nx_ = 0;
  std::vector<cdouble> data_;
};

double squared_norm(std::span<const cdouble> values) noexcept;
double squared_norm(const KSpaceVolume& vol) noexcept;

}  // namespace pmri
