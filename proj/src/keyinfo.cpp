#include "semcomm/keyinfo.hpp"

#include <algorithm>

#include "semcomm/error.hpp"

namespace semcomm {

BoundingRect pad_rect(const BoundingRect& rect, int pad, int width, int height) {
  return {std::max(0, rect.x1 - pad), std::max(0, rect.y1 - pad), std::min(width, rect.x2 + pad),
          std::min(height, rect.y2 + pad)};
}

ImageBuf extract(const ImageBuf& img, const BoundingRect& rect) {
  if (!rect.fits(img.width(), img.height())) throw ShapeError("extract rectangle out of bounds");
  ImageBuf out(rect.width(), rect.height());
  const std::size_t row_bytes = static_cast<std::size_t>(rect.width()) * ImageBuf::kChannels;
  for (int y = 0; y < rect.height(); ++y) {
    auto src = img.pixel(rect.x1, rect.y1 + y);
    std::copy_n(src.data(), row_bytes,
                out.data().data() + static_cast<std::size_t>(y) * row_bytes);
  }
  return out;
}

ImageBuf restore(const ImageBuf& received_crop, const CropRecord& record, const ImageBuf& background,
                 const MaskBuf* crop_mask) {
  if (!record.rect.fits(record.original_width, record.original_height)) {
    throw ShapeError("crop record rectangle does not fit the original frame");
  }
  if (!(record.scale > 0.0 && record.scale <= 1.0)) throw ShapeError("crop record scale out of (0, 1]");

  ImageBuf crop = received_crop;
  if (crop.width() != record.rect.width() || crop.height() != record.rect.height()) {
    if (record.scale >= 1.0) throw ShapeError("received crop does not match the recorded rectangle");
    int w = 0;
    int h = 0;
    scaled_dims(record.rect.width(), record.rect.height(), record.scale, w, h);
    if (crop.width() != w || crop.height() != h) {
      throw ShapeError("received crop does not match the recorded scale");
    }
    crop = resize_bilinear(crop, record.rect.width(), record.rect.height());
  }
  const ImageBuf& base =
      background.width() == record.original_width && background.height() == record.original_height
          ? background
          : resize_bilinear(background, record.original_width, record.original_height);
  return composite(base, crop, record.rect, crop_mask);
}

}  // namespace semcomm
