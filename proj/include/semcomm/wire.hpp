#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semcomm/imaging.hpp"

namespace semcomm {

enum class TransmitMode : std::uint8_t { kDirect = 0, kKeyInfo = 1 };

// One transmitted image on the wire. All fields little-endian:
//   "SJSC" | version u8 | mode u8 | background_id u32 | rect 4 x u32 |
//   original width, height u32 | scale f32 | gain f32 | snr_db f32 |
//   symbol count u32 | symbols f32... | crc32
struct WireFrame {
  static constexpr std::uint8_t kVersion = 1;

  std::uint8_t version = kVersion;
  TransmitMode mode = TransmitMode::kDirect;
  std::uint32_t background_id = 0;
  BoundingRect rect;
  std::uint32_t original_width = 0;
  std::uint32_t original_height = 0;
  float scale = 1.0f;
  float gain = 1.0f;
  float snr_db = 0.0f;
  std::vector<float> symbols;

  // Dimensions of the image that went through the channel.
  int source_width() const;
  int source_height() const;

  bool operator==(const WireFrame&) const = default;
};

std::vector<std::uint8_t> frame_encode(const WireFrame& frame);

// Rejects bad magic, unsupported version, CRC mismatch, truncation, and
// structurally invalid headers without returning partial results.
WireFrame frame_decode(std::span<const std::uint8_t> bytes);

// Throws FormatError unless the symbol count equals the budget for the
// frame's source dimensions at ratio mu.
void check_frame_budget(const WireFrame& frame, double mu);

}  // namespace semcomm
