#include "pmri/types.hpp"

#include <algorithm>
#include <string>

#include "pmri/error.hpp"

namespace pmri {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimMismatch: return "DimMismatch";
    case ErrorCode::kInvalidGeometry: return "InvalidGeometry";
    case ErrorCode::kAcsTooSmall: return "AcsTooSmall";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kMissingOffsetWeights: return "MissingOffsetWeights";
    case ErrorCode::kNonFiniteInput: return "NonFiniteInput";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kTruncatedPayload: return "TruncatedPayload";
    case ErrorCode::kDimOverflow: return "DimOverflow";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

template <typename T>
Grid2<T>::Grid2(std::size_t ny, std::size_t nx, T fill) : ny_(ny), nx_(nx), data_(ny * nx, fill) {
  if (ny == 0 || nx == 0) throw Error(ErrorCode::kInvalidArgument, "grid dims must be >= 1");
}

template <typename T>
Grid2<T>::Grid2(std::size_t ny, std::size_t nx, std::vector<T> data)
    : ny_(ny), nx_(nx), data_(std::move(data)) {
  if (ny == 0 || nx == 0) throw Error(ErrorCode::kInvalidArgument, "grid dims must be >= 1");
  if (data_.size() != ny * nx) throw Error(ErrorCode::kDimMismatch, "grid data size does not match dims");
}

template class Grid2<double>;
template class Grid2<cdouble>;

MagnitudeImage::MagnitudeImage(RealImage px, double range) : pixels(std::move(px)), dynamic_range(range) {
  if (!(range > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dynamic range must be positive");
}

double MagnitudeImage::max_value() const noexcept {
  const auto& d = pixels.data();
  return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

MagnitudeImage MagnitudeImage::with_max_range(RealImage px) {
  MagnitudeImage out;
  out.pixels = std::move(px);
  const double peak = out.max_value();
  out.dynamic_range = peak > 0.0 ? peak : 1.0;
  return out;
}

KSpaceVolume::KSpaceVolume(std::size_t ncoils, std::size_t ny, std::size_t nx)
    : ncoils_(ncoils), ny_(ny), nx_(nx), data_(ncoils * ny * nx) {
  if (ncoils == 0 || ny == 0 || nx == 0) throw Error(ErrorCode::kInvalidArgument, "volume dims must be >= 1");
}

KSpaceVolume::KSpaceVolume(std::size_t ncoils, std::size_t ny, std::size_t nx, std::vector<cdouble> data)
    : ncoils_(ncoils), ny_(ny), nx_(nx), data_(std::move(data)) {
  if (ncoils == 0 || ny == 0 || nx == 0) throw Error(ErrorCode::kInvalidArgument, "volume dims must be >= 1");
  if (data_.size() != ncoils * ny * nx) throw Error(ErrorCode::kDimMismatch, "volume data size does not match dims");
}

KSpaceVolume::KSpaceVolume(std::span<const ComplexImage> planes) {
  if (planes.empty()) throw Error(ErrorCode::kInvalidArgument, "volume needs at least one coil");
  ncoils_ = planes.size();
  ny_ = planes.front().ny();
  nx_ = planes.front().nx();
  data_.reserve(ncoils_ * ny_ * nx_);
  for (const auto& p : planes) {
    if (!p.same_shape(planes.front())) throw Error(ErrorCode::kDimMismatch, "coil planes differ in shape");
    data_.insert(data_.end(), p.data().begin(), p.data().end());
  }
}

ComplexImage KSpaceVolume::plane(std::size_t c) const {
  auto s = plane_span(c);
  return ComplexImage(ny_, nx_, std::vector<cdouble>(s.begin(), s.end()));
}

void KSpaceVolume::set_plane(std::size_t c, const ComplexImage& img) {
  if (img.ny() != ny_ || img.nx() != nx_) throw Error(ErrorCode::kDimMismatch, "plane shape differs from volume");
  std::copy(img.data().begin(), img.data().end(), plane_span(c).begin());
}

double squared_norm(std::span<const cdouble> values) noexcept {
  double acc = 0.0;
  for (const auto& v : values) acc += std::norm(v);
  return acc;
}

double squared_norm(const KSpaceVolume& vol) noexcept { return squared_norm(std::span<const cdouble>(vol.data())); }

}  // namespace pmri
