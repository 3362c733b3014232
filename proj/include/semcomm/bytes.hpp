#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "semcomm/error.hpp"

namespace semcomm {

// CRC-32 (IEEE 802.3, as used by zlib and PNG).
std::uint32_t crc32(std::span<const std::uint8_t> bytes);

// Little-endian append-only writer for the binary file and wire formats.
class ByteWriter {
 public:
  void put_u8(std::uint8_t v) { buf_.push_back(v); }
  void put_u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void put_u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void put_f32(float v) { put_u32(std::bit_cast<std::uint32_t>(v)); }
  void put_bytes(std::span<const std::uint8_t> bytes) {
    buf_.insert(buf_.end(), bytes.begin(), bytes.end());
  }
  void put_tag(std::string_view tag) {
    buf_.insert(buf_.end(), tag.begin(), tag.end());
  }
  // Appends CRC-32 of everything written so far.
  void put_crc() { put_u32(crc32(buf_)); }

  std::size_t size() const { return buf_.size(); }
  std::vector<std::uint8_t> take() { return std::move(buf_); }

 private:
  std::vector<std::uint8_t> buf_;
};

// Bounds-checked little-endian reader; every overrun is a FormatError.
class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes, std::string what)
      : bytes_(bytes), what_(std::move(what)) {}

  std::uint8_t u8() { return need(1)[0]; }
  std::uint32_t u32() {
    auto p = need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    auto p = need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::span<const std::uint8_t> bytes(std::size_t n) { return need(n); }

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> need(std::size_t n) {
    if (n > remaining()) throw FormatError(what_ + ": truncated data");
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  std::string what_;
};

// Verifies the trailing CRC-32 of a framed buffer and returns the body
// (everything before the CRC). Throws FormatError on mismatch.
std::span<const std::uint8_t> verify_crc_trailer(std::span<const std::uint8_t> bytes,
                                                 const std::string& what);

}  // namespace semcomm
