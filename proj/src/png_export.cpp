#include "pmri/png_export.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <vector>

#include "pmri/error.hpp"

namespace pmri {

void export_png(const std::filesystem::path& path, std::span<const MagnitudeImage> panels) {
  if (panels.empty()) throw Error(ErrorCode::kInvalidArgument, "nothing to export");
  std::size_t height = 0;
  std::size_t width = 0;
  for (const auto& p : panels) {
    height = std::max(height, p.ny());
    width += p.nx();
  }

  std::vector<std::uint8_t> pixels(height * width, 0);
  std::size_t x0 = 0;
  for (const auto& p : panels) {
    const auto& d = p.pixels.data();
    const auto [lo_it, hi_it] = std::minmax_element(d.begin(), d.end());
    const double lo = *lo_it;
    const double span = *hi_it - lo;
    for (std::size_t y = 0; y < p.ny(); ++y) {
      for (std::size_t x = 0; x < p.nx(); ++x) {
        const double t = span > 0.0 ? (p(y, x) - lo) / span : 0.0;
        pixels[y * width + x0 + x] = static_cast<std::uint8_t>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
      }
    }
    x0 += p.nx();
  }

  std::unique_ptr<FILE, int (*)(FILE*)> file(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!file) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, "libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::kIo, "libpng failed writing " + path.string());
  }
  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (std::size_t y = 0; y < height; ++y) png_write_row(png, pixels.data() + y * width);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace pmri
