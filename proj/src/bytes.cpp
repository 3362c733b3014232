#include "semcomm/bytes.hpp"

#include <zlib.h>

#include <algorithm>

namespace semcomm {

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks for very large buffers.
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::size_t n = std::min<std::size_t>(bytes.size() - pos, 1u << 30);
    crc = ::crc32(crc, bytes.data() + pos, static_cast<uInt>(n));
    pos += n;
  }
  return static_cast<std::uint32_t>(crc);
}

std::span<const std::uint8_t> verify_crc_trailer(std::span<const std::uint8_t> bytes,
                                                 const std::string& what) {
  if (bytes.size() < 4) throw FormatError(what + ": truncated data");
  auto body = bytes.first(bytes.size() - 4);
  ByteReader tail(bytes.last(4), what);
  if (tail.u32() != crc32(body)) throw FormatError(what + ": CRC mismatch");
  return body;
}

}  // namespace semcomm
