#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace semcomm {

// Interleaved 8-bit RGB raster, row-major.
class ImageBuf {
 public:
  static constexpr int kChannels = 3;

  ImageBuf() = default;
  // Black image. Throws ShapeError unless width, height >= 1.
  ImageBuf(int width, int height);
  // Throws ShapeError when data.size() != width * height * 3.
  ImageBuf(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return kChannels; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }
  std::size_t sample_count() const { return pixel_count() * kChannels; }
  bool empty() const { return data_.empty(); }

  std::uint8_t at(int x, int y, int c) const { return data_[index(x, y, c)]; }
  std::uint8_t& at(int x, int y, int c) { return data_[index(x, y, c)]; }

  std::span<const std::uint8_t> pixel(int x, int y) const {
    return {data_.data() + index(x, y, 0), kChannels};
  }
  void set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

  bool operator==(const ImageBuf&) const = default;

 private:
  std::size_t index(int x, int y, int c) const {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) *
               kChannels +
           static_cast<std::size_t>(c);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Binary per-pixel mask. 0 marks foreground (the person), 1 background.
class MaskBuf {
 public:
  static constexpr std::uint8_t kForeground = 0;
  static constexpr std::uint8_t kBackground = 1;

  MaskBuf() = default;
  MaskBuf(int width, int height, std::uint8_t fill = kBackground);
  // Throws ShapeError on size mismatch, InputError on a value outside {0,1}.
  MaskBuf(int width, int height, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  }

  std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
  void set(int x, int y, std::uint8_t v);

  std::span<const std::uint8_t> data() const { return data_; }
  std::size_t count(std::uint8_t value) const;

  bool operator==(const MaskBuf&) const = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

// Half-open pixel rectangle: [x1, x2) x [y1, y2).
struct BoundingRect {
  int x1 = 0;
  int y1 = 0;
  int x2 = 0;
  int y2 = 0;

  int width() const { return x2 - x1; }
  int height() const { return y2 - y1; }
  long long area() const { return static_cast<long long>(width()) * height(); }
  bool fits(int frame_width, int frame_height) const {
    return 0 <= x1 && x1 < x2 && x2 <= frame_width && 0 <= y1 && y1 < y2 &&
           y2 <= frame_height;
  }
  bool contains(int x, int y) const { return x1 <= x && x < x2 && y1 <= y && y < y2; }

  bool operator==(const BoundingRect&) const = default;
};

// PSNR in dB, or infinite when the two images are identical.
class PsnrValue {
 public:
  static PsnrValue infinite() { return PsnrValue(0.0, true); }
  static PsnrValue decibels(double db) { return PsnrValue(db, false); }

  bool is_infinite() const { return infinite_; }
  // Finite value in dB; +inf when is_infinite().
  double db() const;
  // "inf" or the value with the requested number of decimals.
  std::string to_string(int decimals = 4) const;

  bool operator==(const PsnrValue&) const = default;

 private:
  PsnrValue(double db, bool inf) : db_(db), infinite_(inf) {}
  double db_;
  bool infinite_;
};

struct ResizeResult {
  ImageBuf image;
  double scale = 1.0;
};

PsnrValue psnr(const ImageBuf& a, const ImageBuf& b);

// Bilinear resampling with pixel-center alignment and edge clamping.
ImageBuf resize_bilinear(const ImageBuf& img, int width, int height);

// Output dimensions produced by a proportional downscale by `scale`.
void scaled_dims(int width, int height, double scale, int& out_width, int& out_height);

// Downscales so that width * height <= max_pixels, preserving aspect ratio.
// The returned scale is exactly representable as a 32-bit float so that a
// receiver holding only the float can recompute the output dimensions.
ResizeResult resize_proportional(const ImageBuf& img, long long max_pixels);

// Keeps pixels whose mask value equals `keep`, zeroes the rest.
ImageBuf apply_mask(const ImageBuf& img, const MaskBuf& mask, std::uint8_t keep);

// Copies `patch` into `background` at `rect`. With a patch mask, only
// foreground (0) patch pixels are written.
ImageBuf composite(const ImageBuf& background, const ImageBuf& patch, const BoundingRect& rect,
                   const MaskBuf* patch_mask = nullptr);

// ITU-R BT.601-ish integer luma: (77 R + 150 G + 29 B + 128) >> 8.
std::vector<std::uint8_t> to_gray(const ImageBuf& img);

// 90 degree clockwise rotation; pixel (x, y) moves to (height - 1 - y, x).
ImageBuf rotate90(const ImageBuf& img);

}  // namespace semcomm
