#include "semcomm/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "semcomm/error.hpp"
#include "semcomm/kernels.hpp"

namespace semcomm {

namespace {

void require_positive(int width, int height) {
  if (width < 1 || height < 1) {
    throw ShapeError("image dimensions must be positive, got " + std::to_string(width) + "x" +
                     std::to_string(height));
  }
}

void require_same_dims(const ImageBuf& img, const MaskBuf& mask) {
  if (img.width() != mask.width() || img.height() != mask.height()) {
    throw ShapeError("mask dimensions do not match image");
  }
}

std::uint8_t round_to_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

ImageBuf::ImageBuf(int width, int height) : width_(width), height_(height) {
  require_positive(width, height);
  data_.assign(sample_count(), 0);
}

ImageBuf::ImageBuf(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  require_positive(width, height);
  if (data_.size() != sample_count()) {
    throw ShapeError("image data length does not equal width * height * 3");
  }
}

void ImageBuf::set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const std::size_t i = index(x, y, 0);
  data_[i] = r;
  data_[i + 1] = g;
  data_[i + 2] = b;
}

MaskBuf::MaskBuf(int width, int height, std::uint8_t fill) : width_(width), height_(height) {
  require_positive(width, height);
  if (fill > 1) throw InputError("mask values must be 0 or 1");
  data_.assign(pixel_count(), fill);
}

MaskBuf::MaskBuf(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  require_positive(width, height);
  if (data_.size() != pixel_count()) throw ShapeError("mask data length does not equal width * height");
  if (std::any_of(data_.begin(), data_.end(), [](std::uint8_t v) { return v > 1; })) {
    throw InputError("mask values must be 0 or 1");
  }
}

void MaskBuf::set(int x, int y, std::uint8_t v) {
  if (v > 1) throw InputError("mask values must be 0 or 1");
  data_[index(x, y)] = v;
}

std::size_t MaskBuf::count(std::uint8_t value) const {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), value));
}

double PsnrValue::db() const {
  return infinite_ ? std::numeric_limits<double>::infinity() : db_;
}

std::string PsnrValue::to_string(int decimals) const {
  if (infinite_) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, db_);
  return buf;
}

PsnrValue psnr(const ImageBuf& a, const ImageBuf& b) {
  if (a.width() != b.width() || a.height() != b.height() || a.empty()) {
    throw ShapeError("psnr requires two non-empty images of identical dimensions");
  }
  const std::uint64_t sse = kernels::active().sum_squared_diff(a.data(), b.data());
  if (sse == 0) return PsnrValue::infinite();
  const double mse = static_cast<double>(sse) / static_cast<double>(a.sample_count());
  return PsnrValue::decibels(10.0 * std::log10(255.0 * 255.0 / mse));
}

ImageBuf resize_bilinear(const ImageBuf& img, int width, int height) {
  require_positive(width, height);
  if (img.empty()) throw ShapeError("cannot resize an empty image");
  if (width == img.width() && height == img.height()) return img;

  ImageBuf out(width, height);
  const double sx = static_cast<double>(img.width()) / width;
  const double sy = static_cast<double>(img.height()) / height;
  const int max_x = img.width() - 1;
  const int max_y = img.height() - 1;
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(max_y));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, max_y);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(max_x));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, max_x);
      const double wx = fx - x0;
      for (int c = 0; c < ImageBuf::kChannels; ++c) {
        const double top = img.at(x0, y0, c) * (1.0 - wx) + img.at(x1, y0, c) * wx;
        const double bottom = img.at(x0, y1, c) * (1.0 - wx) + img.at(x1, y1, c) * wx;
        out.at(x, y, c) = round_to_u8(top * (1.0 - wy) + bottom * wy);
      }
    }
  }
  return out;
}

void scaled_dims(int width, int height, double scale, int& out_width, int& out_height) {
  out_width = std::max(1, static_cast<int>(std::floor(width * scale)));
  out_height = std::max(1, static_cast<int>(std::floor(height * scale)));
}

ResizeResult resize_proportional(const ImageBuf& img, long long max_pixels) {
  if (max_pixels < 1) throw ParameterError("max_pixels must be >= 1");
  const long long area = static_cast<long long>(img.pixel_count());
  if (area <= max_pixels) return {img, 1.0};

  double exact = std::sqrt(static_cast<double>(max_pixels) / static_cast<double>(area));
  // Round down to float precision so the scale survives a float round trip.
  float scale = static_cast<float>(exact);
  if (static_cast<double>(scale) > exact) scale = std::nextafter(scale, 0.0f);
  int w = 0;
  int h = 0;
  scaled_dims(img.width(), img.height(), scale, w, h);
  while (static_cast<long long>(w) * h > max_pixels && (w > 1 || h > 1)) {
    scale = std::nextafter(scale, 0.0f);
    scaled_dims(img.width(), img.height(), scale, w, h);
  }
  return {resize_bilinear(img, w, h), static_cast<double>(scale)};
}

ImageBuf apply_mask(const ImageBuf& img, const MaskBuf& mask, std::uint8_t keep) {
  require_same_dims(img, mask);
  if (keep > 1) throw ParameterError("keep must be 0 or 1");
  ImageBuf out(img.width(), img.height());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      if (mask.at(x, y) != keep) continue;
      auto p = img.pixel(x, y);
      out.set_pixel(x, y, p[0], p[1], p[2]);
    }
  }
  return out;
}

ImageBuf composite(const ImageBuf& background, const ImageBuf& patch, const BoundingRect& rect,
                   const MaskBuf* patch_mask) {
  if (!rect.fits(background.width(), background.height())) {
    throw ShapeError("composite rectangle out of background bounds");
  }
  if (patch.width() != rect.width() || patch.height() != rect.height()) {
    throw ShapeError("patch dimensions do not match rectangle");
  }
  if (patch_mask != nullptr) require_same_dims(patch, *patch_mask);

  ImageBuf out = background;
  for (int y = 0; y < rect.height(); ++y) {
    for (int x = 0; x < rect.width(); ++x) {
      if (patch_mask != nullptr && patch_mask->at(x, y) != MaskBuf::kForeground) continue;
      auto p = patch.pixel(x, y);
      out.set_pixel(rect.x1 + x, rect.y1 + y, p[0], p[1], p[2]);
    }
  }
  return out;
}

std::vector<std::uint8_t> to_gray(const ImageBuf& img) {
  std::vector<std::uint8_t> gray(img.pixel_count());
  auto src = img.data();
  for (std::size_t i = 0; i < gray.size(); ++i) {
    const unsigned r = src[3 * i];
    const unsigned g = src[3 * i + 1];
    const unsigned b = src[3 * i + 2];
    gray[i] = static_cast<std::uint8_t>((77 * r + 150 * g + 29 * b + 128) >> 8);
  }
  return gray;
}

ImageBuf rotate90(const ImageBuf& img) {
  ImageBuf out(img.height(), img.width());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      auto p = img.pixel(x, y);
      out.set_pixel(img.height() - 1 - y, x, p[0], p[1], p[2]);
    }
  }
  return out;
}

}  // namespace semcomm
