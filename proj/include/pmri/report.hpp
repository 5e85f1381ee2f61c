#pragma once

#include <filesystem>

#include "json.hpp"

#include "pmri/grappa.hpp"
#include "pmri/sampling.hpp"
#include "pmri/types.hpp"

namespace pmri {

// Quality of one reconstruction against its reference. psnr_db is +infinity
// for a perfect match and serializes as null.
struct ReconReport {
  double rmse = 0.0;
  double psnr_db = 0.0;
  double ssim = 0.0;
  double dynamic_range = 1.0;
  nlohmann::json provenance = nlohmann::json::object();
};

// L = dynamic_range of the reference unless overridden (> 0).
ReconReport evaluate(const MagnitudeImage& test, const MagnitudeImage& ref, double dynamic_range_override = 0.0);

nlohmann::json report_to_json(const ReconReport& report);
ReconReport report_from_json(const nlohmann::json& j);

// Mask sidecar: ny, accel, acs_fraction, offset, seed, acs_lines.
nlohmann::json mask_to_json(const SamplingMask& mask);
SamplingMask mask_from_json(const nlohmann::json& j);

nlohmann::json geometry_to_json(const KernelGeometry& geom);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace pmri
