#pragma once

#include <cstdint>

#include "semcomm/imaging.hpp"

namespace semcomm {

struct CropRecord {
  BoundingRect rect;  // in original-image coordinates
  int original_width = 0;
  int original_height = 0;
  double scale = 1.0;  // resolution gating applied to the crop, in (0, 1]
  std::uint32_t background_id = 0;

  bool operator==(const CropRecord&) const = default;
};

inline constexpr int kCropPadding = 2;

// Grows rect by `pad` pixels on every side, clamped to the frame.
BoundingRect pad_rect(const BoundingRect& rect, int pad, int width, int height);

// Pure copy of the rect region.
ImageBuf extract(const ImageBuf& img, const BoundingRect& rect);

// Upscales the received crop back to rect size when it was downscaled, then
// pastes it onto the background (resized to the original frame if needed).
ImageBuf restore(const ImageBuf& received_crop, const CropRecord& record, const ImageBuf& background,
                 const MaskBuf* crop_mask = nullptr);

}  // namespace semcomm
