#include "semcomm/wire.hpp"

#include <algorithm>
#include <cmath>

#include "semcomm/bytes.hpp"
#include "semcomm/channel.hpp"
#include "semcomm/error.hpp"

namespace semcomm {

namespace {

constexpr std::string_view kMagic = "SJSC";
constexpr std::size_t kHeaderBytes = 4 + 1 + 1 + 4 + 16 + 8 + 12 + 4;

}  // namespace

int WireFrame::source_width() const {
  int w = 0, h = 0;
  scaled_dims(rect.width(), rect.height(), scale, w, h);
  return scale >= 1.0f ? rect.width() : w;
}

int WireFrame::source_height() const {
  int w = 0, h = 0;
  scaled_dims(rect.width(), rect.height(), scale, w, h);
  return scale >= 1.0f ? rect.height() : h;
}

std::vector<std::uint8_t> frame_encode(const WireFrame& f) {
  ByteWriter w;
  w.put_tag(kMagic);
  w.put_u8(f.version);
  w.put_u8(static_cast<std::uint8_t>(f.mode));
  w.put_u32(f.background_id);
  w.put_u32(static_cast<std::uint32_t>(f.rect.x1));
  w.put_u32(static_cast<std::uint32_t>(f.rect.y1));
  w.put_u32(static_cast<std::uint32_t>(f.rect.x2));
  w.put_u32(static_cast<std::uint32_t>(f.rect.y2));
  w.put_u32(f.original_width);
  w.put_u32(f.original_height);
  w.put_f32(f.scale);
  w.put_f32(f.gain);
  w.put_f32(f.snr_db);
  w.put_u32(static_cast<std::uint32_t>(f.symbols.size()));
  for (float s : f.symbols) w.put_f32(s);
  w.put_crc();
  return w.take();
}

WireFrame frame_decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes + 4) throw FormatError("wire frame: truncated header");
  ByteReader head(bytes, "wire frame");
  const auto magic = head.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) throw FormatError("wire frame: bad magic");
  const std::uint8_t version = head.u8();
  if (version != WireFrame::kVersion) {
    throw FormatError("wire frame: unsupported version " + std::to_string(version));
  }
  const auto body = verify_crc_trailer(bytes, "wire frame");

  ByteReader r(body, "wire frame");
  r.bytes(5);
  WireFrame f;
  f.version = version;
  const std::uint8_t mode = r.u8();
  if (mode > 1) throw FormatError("wire frame: unknown mode");
  f.mode = static_cast<TransmitMode>(mode);
  f.background_id = r.u32();
  std::uint32_t rect[4];
  for (auto& v : rect) v = r.u32();
  f.original_width = r.u32();
  f.original_height = r.u32();
  if (f.original_width == 0 || f.original_height == 0 || f.original_width > (1u << 20) ||
      f.original_height > (1u << 20) || rect[2] > f.original_width || rect[3] > f.original_height ||
      rect[0] >= rect[2] || rect[1] >= rect[3]) {
    throw FormatError("wire frame: invalid geometry");
  }
  f.rect = {static_cast<int>(rect[0]), static_cast<int>(rect[1]), static_cast<int>(rect[2]),
            static_cast<int>(rect[3])};
  f.scale = r.f32();
  f.gain = r.f32();
  f.snr_db = r.f32();
  if (!(f.scale > 0.0f && f.scale <= 1.0f) || !std::isfinite(f.gain) || !std::isfinite(f.snr_db)) {
    throw FormatError("wire frame: invalid scale, gain, or SNR");
  }
  const std::uint32_t count = r.u32();
  if (static_cast<std::uint64_t>(count) * 4 != r.remaining()) {
    throw FormatError("wire frame: symbol count does not match frame length");
  }
  f.symbols.resize(count);
  for (auto& s : f.symbols) s = r.f32();
  return f;
}

void check_frame_budget(const WireFrame& frame, double mu) {
  const std::size_t expected = symbol_budget(mu, frame.source_width(), frame.source_height());
  if (frame.symbols.size() != expected) {
    throw FormatError("wire frame: symbol count " + std::to_string(frame.symbols.size()) +
                      " does not match budget " + std::to_string(expected));
  }
}

}  // namespace semcomm
