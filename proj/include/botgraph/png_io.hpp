#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace botgraph {

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major, 8-bit gray
};

// Encodes 8-bit grayscale PNG with fixed compression settings and no
// ancillary chunks, so equal pixels give equal bytes.
std::vector<std::uint8_t> encode_png(int width, int height, std::span<const std::uint8_t> pixels);

// Decodes any PNG libpng understands into 8-bit gray.
GrayImage decode_png(std::span<const std::uint8_t> bytes);

GrayImage read_png_file(const std::string& path);

}  // namespace botgraph
