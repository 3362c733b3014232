#include "semcomm/bglib.hpp"

#include <algorithm>

#include "semcomm/bytes.hpp"
#include "semcomm/error.hpp"
#include "semcomm/png_io.hpp"

namespace semcomm {

namespace {

constexpr std::string_view kMagic = "SBGL";

}  // namespace

void BackgroundLibrary::add(BackgroundEntry entry) {
  if (!entries.empty() && entry.id <= entries.back().id) {
    throw ParameterError("background ids must be strictly increasing");
  }
  entries.push_back(std::move(entry));
}

const BackgroundEntry* BackgroundLibrary::find(std::uint32_t id) const {
  auto it = std::find_if(entries.begin(), entries.end(), [id](const auto& e) { return e.id == id; });
  return it == entries.end() ? nullptr : &*it;
}

BackgroundEntry build_entry(std::uint32_t id, const ImageBuf& image, const MaskBuf* person_mask,
                            const FeatureParams& params) {
  const ImageBuf masked =
      person_mask != nullptr ? apply_mask(image, *person_mask, MaskBuf::kBackground) : image;
  FeatureSet fs = extract_features(masked, params);
  return {id, image, std::move(fs.keypoints), std::move(fs.descriptors)};
}

MatchOutcome best_match(std::span<const Descriptor256> query, const BackgroundLibrary& lib, int t,
                        int n_min) {
  if (t < 0 || t > 256) throw ParameterError("hamming threshold must be in [0, 256]");
  if (n_min < 0) throw ParameterError("n_min must be >= 0");
  MatchOutcome outcome;
  const BackgroundEntry* winner = nullptr;
  for (const auto& entry : lib.entries) {
    const int n = static_cast<int>(match_descriptors(query, entry.descriptors, t).size());
    outcome.per_entry_counts.push_back(n);
    if (winner == nullptr || n > outcome.match_count ||
        (n == outcome.match_count && entry.id < winner->id)) {
      winner = &entry;
      outcome.match_count = n;
    }
  }
  if (winner != nullptr && outcome.match_count >= n_min) {
    outcome.matched = true;
    outcome.background_id = winner->id;
  }
  return outcome;
}

std::vector<std::uint8_t> serialize_library(const BackgroundLibrary& lib) {
  ByteWriter w;
  w.put_tag(kMagic);
  w.put_u8(lib.format_version);
  w.put_u32(static_cast<std::uint32_t>(lib.entries.size()));
  for (const auto& e : lib.entries) {
    if (e.keypoints.size() != e.descriptors.size()) {
      throw FormatError("entry keypoint and descriptor counts differ");
    }
    w.put_u32(e.id);
    const auto png = encode_png(e.image);
    w.put_u32(static_cast<std::uint32_t>(png.size()));
    w.put_bytes(png);
    w.put_u32(static_cast<std::uint32_t>(e.keypoints.size()));
    for (const auto& kp : e.keypoints) {
      w.put_f32(kp.x);
      w.put_f32(kp.y);
      w.put_f32(kp.response);
      w.put_f32(kp.orientation);
    }
    for (const auto& d : e.descriptors) {
      for (std::uint64_t word : d.words) w.put_u64(word);
    }
  }
  w.put_crc();
  return w.take();
}

BackgroundLibrary deserialize_library(std::span<const std::uint8_t> bytes) {
  const auto body = verify_crc_trailer(bytes, "background library");
  ByteReader r(body, "background library");
  const auto magic = r.bytes(4);
  if (!std::equal(magic.begin(), magic.end(), kMagic.begin())) {
    throw FormatError("background library: bad magic");
  }
  BackgroundLibrary lib;
  lib.format_version = r.u8();
  if (lib.format_version != BackgroundLibrary::kFormatVersion) {
    throw FormatError("background library: unsupported version " + std::to_string(lib.format_version));
  }
  const std::uint32_t count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    BackgroundEntry e;
    e.id = r.u32();
    const std::uint32_t png_len = r.u32();
    e.image = decode_png(r.bytes(png_len));
    const std::uint32_t kp_count = r.u32();
    // Each keypoint plus descriptor needs 48 bytes; reject impossible counts early.
    if (static_cast<std::uint64_t>(kp_count) * 48 > r.remaining()) {
      throw FormatError("background library: truncated data");
    }
    e.keypoints.resize(kp_count);
    for (auto& kp : e.keypoints) {
      kp.x = r.f32();
      kp.y = r.f32();
      kp.response = r.f32();
      kp.orientation = r.f32();
    }
    e.descriptors.resize(kp_count);
    for (auto& d : e.descriptors) {
      for (auto& word : d.words) word = r.u64();
    }
    if (!lib.entries.empty() && e.id <= lib.entries.back().id) {
      throw FormatError("background library: ids not strictly increasing");
    }
    lib.entries.push_back(std::move(e));
  }
  if (r.remaining() != 0) throw FormatError("background library: trailing bytes");
  return lib;
}

void save_library(const BackgroundLibrary& lib, const std::filesystem::path& path) {
  write_file(path, serialize_library(lib));
}

BackgroundLibrary load_library(const std::filesystem::path& path) {
  return deserialize_library(read_file(path));
}

}  // namespace semcomm
