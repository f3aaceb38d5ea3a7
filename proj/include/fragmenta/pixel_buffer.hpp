#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace fragmenta {

/// Row-major 8-bit RGB image.
struct PixelBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  PixelBuffer() = default;
  PixelBuffer(int w, int h, std::uint8_t fill = 0);

  std::size_t index(int x, int y, int c = 0) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
            static_cast<std::size_t>(x)) * 3 + static_cast<std::size_t>(c);
  }
  std::uint8_t& at(int x, int y, int c) { return data[index(x, y, c)]; }
  std::uint8_t at(int x, int y, int c) const { return data[index(x, y, c)]; }

  void set_rgb(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    auto i = index(x, y);
    data[i] = r;
    data[i + 1] = g;
    data[i + 2] = b;
  }

  bool valid() const {
    return width >= 1 && height >= 1 &&
           data.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
  }

  friend bool operator==(const PixelBuffer&, const PixelBuffer&) = default;
};

/// Copies the w x h block whose top-left corner is (x0, y0).
PixelBuffer crop(const PixelBuffer& image, int x0, int y0, int w, int h);

/// Pastes `block` into `target` with its top-left corner at (x0, y0).
void paste(PixelBuffer& target, const PixelBuffer& block, int x0, int y0);

/// Bilinear resampling to an explicit output size.
PixelBuffer resize_bilinear(const PixelBuffer& image, int w, int h);

/// Uniformly downscales an image that is larger than w x h on both axes so
/// that its short side (relative to the target aspect) exactly covers the
/// target. Images that already fit exactly, or are smaller on either axis,
/// are returned unchanged.
PixelBuffer downscale_to_cover(const PixelBuffer& image, int w, int h);

/// Decodes PNG or JPEG (detected from the file signature). Gray and alpha
/// inputs are converted to RGB.
PixelBuffer read_image(const std::filesystem::path& path);

void write_png(const PixelBuffer& image, const std::filesystem::path& path);

}  // namespace fragmenta
