#include "botgraph/png_io.hpp"

#include "botgraph/error.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>

namespace botgraph {

namespace {

// Records the message and unwinds to the setjmp in the calling helper.
[[noreturn]] void png_fail(png_structp png, png_const_charp message) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text) *text = message;
  png_longjmp(png, 1);
}

void png_warn(png_structp, png_const_charp) {}

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_nothing(png_structp) {}

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void read_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cursor->offset + length > cursor->bytes.size()) png_error(png, "truncated data");
  std::memcpy(data, cursor->bytes.data() + cursor->offset, length);
  cursor->offset += length;
}

// The helpers below hold only trivially destructible locals between setjmp and
// any libpng call that may longjmp back.
bool write_rows(png_structp png, png_infop info, int width, int height, const std::uint8_t* pixels) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_set_compression_level(png, 6);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_NONE);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, pixels + static_cast<std::size_t>(y) * width);
  }
  png_write_end(png, nullptr);
  return true;
}

bool read_header(png_structp png, png_infop info, png_uint_32* width, png_uint_32* height) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_read_info(png, info);
  const auto color = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
      color == PNG_COLOR_TYPE_PALETTE) {
    png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  }
  png_read_update_info(png, info);
  if (png_get_rowbytes(png, info) != png_get_image_width(png, info)) {
    png_error(png, "unsupported pixel layout");
  }
  *width = png_get_image_width(png, info);
  *height = png_get_image_height(png, info);
  return true;
}

bool read_rows(png_structp png, png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_read_image(png, rows);
  png_read_end(png, nullptr);
  return true;
}

}  // namespace

std::vector<std::uint8_t> encode_png(int width, int height, std::span<const std::uint8_t> pixels) {
  if (width <= 0 || height <= 0 ||
      pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorKind::format, "png: pixel buffer does not match dimensions");
  }
  std::string message;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, png_fail, png_warn);
  if (!png) throw Error(ErrorKind::io, "png: cannot allocate writer");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* png;
    png_infop* info;
    ~Guard() { png_destroy_write_struct(png, info); }
  } guard{&png, &info};
  if (!info) throw Error(ErrorKind::io, "png: cannot allocate info");

  std::vector<std::uint8_t> out;
  png_set_write_fn(png, &out, append_bytes, flush_nothing);
  if (!write_rows(png, info, width, height, pixels.data())) {
    throw Error(ErrorKind::io, "png: " + message);
  }
  return out;
}

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw Error(ErrorKind::format, "png: bad signature");
  }
  std::string message;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, png_fail, png_warn);
  if (!png) throw Error(ErrorKind::io, "png: cannot allocate reader");
  png_infop info = png_create_info_struct(png);
  struct Guard {
    png_structp* png;
    png_infop* info;
    ~Guard() { png_destroy_read_struct(png, info, nullptr); }
  } guard{&png, &info};
  if (!info) throw Error(ErrorKind::io, "png: cannot allocate info");

  ReadCursor cursor{bytes, 0};
  png_set_read_fn(png, &cursor, read_bytes);
  png_uint_32 width = 0, height = 0;
  if (!read_header(png, info, &width, &height)) throw Error(ErrorKind::format, "png: " + message);

  GrayImage image;
  image.width = static_cast<int>(width);
  image.height = static_cast<int>(height);
  image.pixels.resize(static_cast<std::size_t>(width) * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) {
    rows[y] = image.pixels.data() + static_cast<std::size_t>(y) * width;
  }
  if (!read_rows(png, rows.data())) throw Error(ErrorKind::format, "png: " + message);
  return image;
}

GrayImage read_png_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

}  // namespace botgraph
