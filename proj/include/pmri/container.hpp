#pragma once

// GPKS container: a little-endian binary payload plus a JSON sidecar at
// "<path>.json" carrying provenance.
//
//   offset  size        field
//   0       4           magic "GPKS"
//   4       2 (u16)     version, currently 1
//   6       2 (u16)     kind: 0 k-space volume, 1 magnitude image, 2 GRAPPA kernel
//   8       4 (u32)     rank r, 1..4
//   12      4*r (u32)   dims, outermost first
//   12+4r   ...         payload, row-major; complex64 (re, im float32 pairs)
//                       for kinds 0 and 2, float32 for kind 1
//
// Kind 0 dims: (ncoils, ny, nx). Kind 1: (ny, nx). Kind 2: (accel-1, sources,
// ncoils), weight set d-1 stored row-major; geometry lives in the sidecar.

#include <cstdint>
#include <filesystem>
#include <variant>

#include "json.hpp"

#include "pmri/grappa.hpp"
#include "pmri/types.hpp"

namespace pmri {

inline constexpr std::uint16_t kContainerVersion = 1;

enum class ContainerKind : std::uint16_t {
  kKSpace = 0,
  kMagnitude = 1,
  kKernel = 2,
};

using ContainerObject = std::variant<KSpaceVolume, MagnitudeImage, GrappaKernel>;

struct Container {
  ContainerObject object;
  nlohmann::json provenance = nlohmann::json::object();
};

std::filesystem::path sidecar_path(const std::filesystem::path& path);

// Writes the payload and its sidecar. Values are stored in single precision.
void write_container(const std::filesystem::path& path, const ContainerObject& object,
                     const nlohmann::json& provenance = nlohmann::json::object());

// Errors: BadMagic, UnsupportedVersion, TruncatedPayload, DimOverflow, Io.
Container read_container(const std::filesystem::path& path);

// Typed readers; InvalidArgument when the file holds a different kind.
KSpaceVolume read_kspace(const std::filesystem::path& path);
MagnitudeImage read_magnitude(const std::filesystem::path& path);
GrappaKernel read_kernel(const std::filesystem::path& path);

}  // namespace pmri
