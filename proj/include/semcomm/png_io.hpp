#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "semcomm/imaging.hpp"

namespace semcomm {

// Any PNG colour type is accepted and converted to 8-bit RGB.
ImageBuf decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const ImageBuf& img);

ImageBuf read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const ImageBuf& img);

// Masks are stored as single-channel PNGs: 0 = foreground, 255 = background.
// On read, gray values below 128 count as foreground.
MaskBuf read_mask_png(const std::filesystem::path& path);
void write_mask_png(const std::filesystem::path& path, const MaskBuf& mask);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace semcomm
