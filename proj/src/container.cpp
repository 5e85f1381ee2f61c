#include "pmri/container.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "pmri/error.hpp"

namespace pmri {
namespace {

static_assert(std::endian::native == std::endian::little, "container I/O assumes a little-endian host");

constexpr std::array<char, 4> kMagic{'G', 'P', 'K', 'S'};
constexpr std::uint32_t kMaxRank = 4;

template <typename T>
void put(std::vector<char>& buf, T value) {
  const auto* p = reinterpret_cast<const char*>(&value);
  buf.insert(buf.end(), p, p + sizeof(T));
}

template <typename T>
T take(const std::vector<char>& buf, std::size_t& pos, const char* what) {
  if (buf.size() - pos < sizeof(T)) throw Error(ErrorCode::kTruncatedPayload, std::string("file ends inside ") + what);
  T value;
  std::memcpy(&value, buf.data() + pos, sizeof(T));
  pos += sizeof(T);
  return value;
}

void put_complex(std::vector<char>& buf, cdouble v) {
  put(buf, static_cast<float>(v.real()));
  put(buf, static_cast<float>(v.imag()));
}

const char* kind_name(ContainerKind kind) {
  switch (kind) {
    case ContainerKind::kKSpace: return "kspace";
    case ContainerKind::kMagnitude: return "magnitude";
    case ContainerKind::kKernel: return "kernel";
  }
  return "unknown";
}

std::vector<char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "short write to " + path.string());
}

struct Encoded {
  ContainerKind kind;
  std::vector<std::uint32_t> dims;
  std::vector<char> payload;
  nlohmann::json meta = nlohmann::json::object();
};

std::uint32_t narrow_dim(std::size_t d) {
  if (d > std::numeric_limits<std::uint32_t>::max()) throw Error(ErrorCode::kDimOverflow, "dimension exceeds u32");
  return static_cast<std::uint32_t>(d);
}

Encoded encode(const KSpaceVolume& vol) {
  Encoded e{ContainerKind::kKSpace, {narrow_dim(vol.ncoils()), narrow_dim(vol.ny()), narrow_dim(vol.nx())}, {}};
  e.payload.reserve(vol.data().size() * 8);
  for (const auto& v : vol.data()) put_complex(e.payload, v);
  return e;
}

Encoded encode(const MagnitudeImage& img) {
  Encoded e{ContainerKind::kMagnitude, {narrow_dim(img.ny()), narrow_dim(img.nx())}, {}};
  e.payload.reserve(img.pixels.size() * 4);
  for (double v : img.pixels.data()) put(e.payload, static_cast<float>(v));
  e.meta["dynamic_range"] = img.dynamic_range;
  return e;
}

Encoded encode(const GrappaKernel& kernel) {
  kernel.validate();
  Encoded e{ContainerKind::kKernel,
            {narrow_dim(kernel.weights.size()), narrow_dim(kernel.source_count()), narrow_dim(kernel.ncoils)},
            {}};
  for (const auto& w : kernel.weights) {
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) put_complex(e.payload, w(r, c));
    }
  }
  e.meta["accel"] = kernel.accel;
  e.meta["ncoils"] = kernel.ncoils;
  e.meta["ky_taps"] = kernel.geometry.ky_taps;
  e.meta["kx_taps"] = kernel.geometry.kx_taps;
  e.meta["lambda_rel"] = kernel.lambda_rel;
  return e;
}

std::size_t checked_product(const std::vector<std::uint32_t>& dims, std::size_t element_size) {
  std::size_t total = element_size;
  for (auto d : dims) {
    if (d != 0 && total > std::numeric_limits<std::size_t>::max() / d)
      throw Error(ErrorCode::kDimOverflow, "payload size overflows");
    total *= d;
  }
  return total;
}

std::vector<cdouble> decode_complex(const std::vector<char>& buf, std::size_t pos, std::size_t count) {
  std::vector<cdouble> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    float re;
    float im;
    std::memcpy(&re, buf.data() + pos + 8 * i, 4);
    std::memcpy(&im, buf.data() + pos + 8 * i + 4, 4);
    out[i] = cdouble(re, im);
  }
  return out;
}

nlohmann::json read_sidecar(const std::filesystem::path& path) {
  const auto side = sidecar_path(path);
  if (!std::filesystem::exists(side)) return nlohmann::json::object();
  std::ifstream in(side);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::kIo, "malformed sidecar " + side.string() + ": " + ex.what());
  }
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  auto side = path;
  side += ".json";
  return side;
}

void write_container(const std::filesystem::path& path, const ContainerObject& object,
                     const nlohmann::json& provenance) {
  Encoded e = std::visit([](const auto& o) { return encode(o); }, object);

  std::vector<char> bytes(kMagic.begin(), kMagic.end());
  put(bytes, kContainerVersion);
  put(bytes, static_cast<std::uint16_t>(e.kind));
  put(bytes, static_cast<std::uint32_t>(e.dims.size()));
  for (auto d : e.dims) put(bytes, d);
  bytes.insert(bytes.end(), e.payload.begin(), e.payload.end());
  write_file(path, bytes);

  nlohmann::json side = e.meta;
  side["kind"] = kind_name(e.kind);
  side["version"] = kContainerVersion;
  side["provenance"] = provenance.is_null() ? nlohmann::json::object() : provenance;
  const std::string text = side.dump(2) + "\n";
  write_file(sidecar_path(path), std::vector<char>(text.begin(), text.end()));
}

Container read_container(const std::filesystem::path& path) {
  const std::vector<char> buf = read_file(path);
  std::size_t pos = 0;
  if (buf.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), buf.begin()))
    throw Error(ErrorCode::kBadMagic, path.string() + " is not a GPKS container");
  pos = kMagic.size();
  const auto version = take<std::uint16_t>(buf, pos, "header");
  if (version != kContainerVersion)
    throw Error(ErrorCode::kUnsupportedVersion, "container version " + std::to_string(version) +
                                                    ", max supported version is " +
                                                    std::to_string(kContainerVersion));
  const auto kind_raw = take<std::uint16_t>(buf, pos, "header");
  if (kind_raw > static_cast<std::uint16_t>(ContainerKind::kKernel))
    throw Error(ErrorCode::kInvalidArgument, "unknown container kind " + std::to_string(kind_raw));
  const auto kind = static_cast<ContainerKind>(kind_raw);
  const auto rank = take<std::uint32_t>(buf, pos, "header");
  if (rank == 0 || rank > kMaxRank) throw Error(ErrorCode::kDimOverflow, "rank " + std::to_string(rank) + " not in 1..4");
  std::vector<std::uint32_t> dims(rank);
  for (auto& d : dims) d = take<std::uint32_t>(buf, pos, "dims");

  const std::size_t expected_rank = kind == ContainerKind::kMagnitude ? 2 : 3;
  if (rank != expected_rank)
    throw Error(ErrorCode::kDimOverflow, std::string(kind_name(kind)) + " container needs rank " +
                                             std::to_string(expected_rank));
  const std::size_t element = kind == ContainerKind::kMagnitude ? 4 : 8;
  const std::size_t payload = checked_product(dims, element);
  if (buf.size() - pos < payload)
    throw Error(ErrorCode::kTruncatedPayload, "expected " + std::to_string(payload) + " payload bytes, found " +
                                                  std::to_string(buf.size() - pos));

  nlohmann::json side = read_sidecar(path);
  Container out;
  out.provenance = side.value("provenance", nlohmann::json::object());

  switch (kind) {
    case ContainerKind::kKSpace: {
      out.object = KSpaceVolume(dims[0], dims[1], dims[2], decode_complex(buf, pos, payload / 8));
      break;
    }
    case ContainerKind::kMagnitude: {
      std::vector<double> px(payload / 4);
      for (std::size_t i = 0; i < px.size(); ++i) {
        float v;
        std::memcpy(&v, buf.data() + pos + 4 * i, 4);
        px[i] = v;
      }
      RealImage img(dims[0], dims[1], std::move(px));
      if (side.contains("dynamic_range")) {
        out.object = MagnitudeImage(std::move(img), side.at("dynamic_range").get<double>());
      } else {
        out.object = MagnitudeImage::with_max_range(std::move(img));
      }
      break;
    }
    case ContainerKind::kKernel: {
      if (!side.contains("ky_taps"))
        throw Error(ErrorCode::kIo, "kernel sidecar " + sidecar_path(path).string() + " missing or incomplete");
      GrappaKernel kernel;
      kernel.geometry.ky_taps = side.at("ky_taps").get<std::size_t>();
      kernel.geometry.kx_taps = side.at("kx_taps").get<std::size_t>();
      kernel.accel = side.at("accel").get<std::size_t>();
      kernel.ncoils = side.at("ncoils").get<std::size_t>();
      kernel.lambda_rel = side.at("lambda_rel").get<double>();
      const auto values = decode_complex(buf, pos, payload / 8);
      std::size_t k = 0;
      for (std::uint32_t s = 0; s < dims[0]; ++s) {
        WeightMatrix w(dims[1], dims[2]);
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
          for (Eigen::Index c = 0; c < w.cols(); ++c) w(r, c) = values[k++];
        }
        kernel.weights.push_back(std::move(w));
      }
      kernel.validate();
      out.object = std::move(kernel);
      break;
    }
  }
  return out;
}

namespace {

template <typename T>
T read_as(const std::filesystem::path& path, const char* what) {
  Container c = read_container(path);
  if (auto* v = std::get_if<T>(&c.object)) return std::move(*v);
  throw Error(ErrorCode::kInvalidArgument, path.string() + " does not hold a " + what);
}

}  // namespace

KSpaceVolume read_kspace(const std::filesystem::path& path) { return read_as<KSpaceVolume>(path, "k-space volume"); }
MagnitudeImage read_magnitude(const std::filesystem::path& path) {
  return read_as<MagnitudeImage>(path, "magnitude image");
}
GrappaKernel read_kernel(const std::filesystem::path& path) { return read_as<GrappaKernel>(path, "GRAPPA kernel"); }

}  // namespace pmri
