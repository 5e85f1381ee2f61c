#pragma once

#include <filesystem>
#include <span>

#include "pmri/types.hpp"

namespace pmri {

// 8-bit grayscale PNG with the panels placed left to right. Each panel is
// min-max windowed on its own; shorter panels are padded with black.
void export_png(const std::filesystem::path& path, std::span<const MagnitudeImage> panels);

}  // namespace pmri
