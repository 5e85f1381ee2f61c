#include "pmri/report.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "pmri/error.hpp"
#include "pmri/metrics.hpp"

namespace pmri {

ReconReport evaluate(const MagnitudeImage& test, const MagnitudeImage& ref, double dynamic_range_override) {
  ReconReport r;
  r.dynamic_range = dynamic_range_override > 0.0 ? dynamic_range_override : ref.dynamic_range;
  r.rmse = rmse(test, ref);
  r.psnr_db = psnr_from_rmse(r.rmse, r.dynamic_range);
  r.ssim = ssim(test, ref, r.dynamic_range);
  return r;
}

nlohmann::json report_to_json(const ReconReport& report) {
  nlohmann::json j;
  j["rmse"] = report.rmse;
  j["psnr_db"] = std::isfinite(report.psnr_db) ? nlohmann::json(report.psnr_db) : nlohmann::json(nullptr);
  j["ssim"] = report.ssim;
  j["dynamic_range"] = report.dynamic_range;
  j["provenance"] = report.provenance;
  return j;
}

ReconReport report_from_json(const nlohmann::json& j) {
  try {
    ReconReport r;
    r.rmse = j.at("rmse").get<double>();
    r.psnr_db = j.at("psnr_db").is_null() ? std::numeric_limits<double>::infinity() : j.at("psnr_db").get<double>();
    r.ssim = j.at("ssim").get<double>();
    r.dynamic_range = j.at("dynamic_range").get<double>();
    r.provenance = j.value("provenance", nlohmann::json::object());
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed report: ") + ex.what());
  }
}

nlohmann::json mask_to_json(const SamplingMask& mask) {
  return {
      {"ny", mask.ny()},
      {"accel", mask.accel()},
      {"acs_fraction", mask.acs_fraction()},
      {"offset", mask.offset()},
      {"seed", mask.seed()},
      {"acs_lines", mask.acs_lines()},
  };
}

SamplingMask mask_from_json(const nlohmann::json& j) {
  std::size_t ny = 0;
  std::size_t accel = 0;
  double acs_fraction = 0.0;
  std::size_t offset = 0;
  std::uint64_t seed = 0;
  std::size_t acs_lines = 0;
  try {
    ny = j.at("ny").get<std::size_t>();
    accel = j.at("accel").get<std::size_t>();
    acs_fraction = j.at("acs_fraction").get<double>();
    offset = j.at("offset").get<std::size_t>();
    seed = j.value("seed", std::uint64_t{0});
    acs_lines = j.contains("acs_lines") ? j.at("acs_lines").get<std::size_t>() : acs_length(ny, acs_fraction);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kInvalidArgument, std::string("malformed mask: ") + ex.what());
  }
  return SamplingMask(ny, accel, acs_fraction, offset, acs_lines, seed);
}

nlohmann::json geometry_to_json(const KernelGeometry& geom) {
  return {{"ky_taps", geom.ky_taps}, {"kx_taps", geom.kx_taps}};
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kInvalidArgument, "malformed JSON in " + path.string() + ": " + ex.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(2) << "\n";
}

}  // namespace pmri
