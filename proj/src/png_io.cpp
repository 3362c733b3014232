#include "semcomm/png_io.hpp"

#include <png.h>

#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "semcomm/error.hpp"

namespace semcomm {

namespace {

struct ReadCursor {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void read_callback(png_structp png, png_bytep out, png_size_t length) {
  auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + length > cur->bytes.size()) png_error(png, "truncated PNG data");
  std::memcpy(out, cur->bytes.data() + cur->pos, length);
  cur->pos += length;
}

void write_callback(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_callback(png_structp) {}

[[noreturn]] void error_callback(png_structp, png_const_charp msg) {
  throw FormatError(std::string("PNG: ") + msg);
}

void warning_callback(png_structp, png_const_charp) {}

// Decodes to interleaved 8-bit samples with the requested channel count (1 or 3).
std::vector<std::uint8_t> decode_raw(std::span<const std::uint8_t> bytes, int channels, int& width,
                                     int& height) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
    throw FormatError("not a PNG stream");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, error_callback,
                                           warning_callback);
  if (png == nullptr) throw FormatError("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  ReadCursor cursor{bytes, 0};
  std::vector<std::uint8_t> pixels;
  try {
    if (info == nullptr) throw FormatError("png_create_info_struct failed");
    png_set_read_fn(png, &cursor, read_callback);
    png_read_info(png, info);
    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (depth == 16) png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    const bool is_gray = color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA;
    if (channels == 3 && is_gray) png_set_gray_to_rgb(png);
    if (channels == 1 && !is_gray) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
    png_read_update_info(png, info);
    if (png_get_rowbytes(png, info) != static_cast<png_size_t>(w) * channels) {
      throw FormatError("unexpected PNG row layout");
    }
    if (w == 0 || h == 0 || w > (1u << 15) || h > (1u << 15)) {
      throw FormatError("PNG dimensions out of supported range");
    }
    pixels.resize(static_cast<std::size_t>(w) * h * channels);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = pixels.data() + static_cast<std::size_t>(y) * w * channels;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    width = static_cast<int>(w);
    height = static_cast<int>(h);
  } catch (...) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw;
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return pixels;
}

std::vector<std::uint8_t> encode_raw(const std::uint8_t* data, int width, int height,
                                     int channels) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, error_callback,
                                            warning_callback);
  if (png == nullptr) throw FormatError("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  std::vector<std::uint8_t> out;
  try {
    if (info == nullptr) throw FormatError("png_create_info_struct failed");
    png_set_write_fn(png, &out, write_callback, flush_callback);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(png, 6);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y) {
      png_write_row(png, const_cast<png_bytep>(data + static_cast<std::size_t>(y) * width * channels));
    }
    png_write_end(png, nullptr);
  } catch (...) {
    png_destroy_write_struct(&png, &info);
    throw;
  }
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace

ImageBuf decode_png(std::span<const std::uint8_t> bytes) {
  int w = 0;
  int h = 0;
  auto pixels = decode_raw(bytes, 3, w, h);
  return ImageBuf(w, h, std::move(pixels));
}

std::vector<std::uint8_t> encode_png(const ImageBuf& img) {
  if (img.empty()) throw ShapeError("cannot encode an empty image");
  return encode_raw(img.data().data(), img.width(), img.height(), 3);
}

ImageBuf read_png(const std::filesystem::path& path) { return decode_png(read_file(path)); }

void write_png(const std::filesystem::path& path, const ImageBuf& img) {
  write_file(path, encode_png(img));
}

MaskBuf read_mask_png(const std::filesystem::path& path) {
  int w = 0;
  int h = 0;
  auto gray = decode_raw(read_file(path), 1, w, h);
  for (auto& v : gray) v = v < 128 ? MaskBuf::kForeground : MaskBuf::kBackground;
  return MaskBuf(w, h, std::move(gray));
}

void write_mask_png(const std::filesystem::path& path, const MaskBuf& mask) {
  std::vector<std::uint8_t> gray(mask.data().begin(), mask.data().end());
  for (auto& v : gray) v = v == MaskBuf::kForeground ? 0 : 255;
  write_file(path, encode_raw(gray.data(), mask.width(), mask.height(), 1));
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InputError("failed writing " + path.string());
}

}  // namespace semcomm
