#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "semcomm/features.hpp"
#include "semcomm/imaging.hpp"

namespace semcomm {

struct BackgroundEntry {
  std::uint32_t id = 0;
  ImageBuf image;
  std::vector<Keypoint> keypoints;
  std::vector<Descriptor256> descriptors;

  bool operator==(const BackgroundEntry&) const = default;
};

struct BackgroundLibrary {
  static constexpr std::uint8_t kFormatVersion = 1;

  std::vector<BackgroundEntry> entries;  // ids strictly increasing
  std::uint8_t format_version = kFormatVersion;

  // Appends, enforcing strictly increasing ids.
  void add(BackgroundEntry entry);
  const BackgroundEntry* find(std::uint32_t id) const;

  bool operator==(const BackgroundLibrary&) const = default;
};

struct MatchOutcome {
  bool matched = false;
  std::optional<std::uint32_t> background_id;
  int match_count = 0;  // N_k of the best entry, reported even when unmatched
  std::vector<int> per_entry_counts;
};

inline constexpr int kDefaultHammingThreshold = 64;
inline constexpr int kDefaultMinMatches = 15;

// Features come from the background with the person region blanked
// (keep = 1) when a mask is supplied.
BackgroundEntry build_entry(std::uint32_t id, const ImageBuf& image, const MaskBuf* person_mask = nullptr,
                            const FeatureParams& params = {});

// Argmax over entries of the number of query descriptors matched within t;
// ties go to the lowest id. Unmatched when the best count is below n_min.
MatchOutcome best_match(std::span<const Descriptor256> query, const BackgroundLibrary& lib, int t,
                        int n_min);

std::vector<std::uint8_t> serialize_library(const BackgroundLibrary& lib);
// Verifies the CRC before parsing anything; throws FormatError.
BackgroundLibrary deserialize_library(std::span<const std::uint8_t> bytes);

void save_library(const BackgroundLibrary& lib, const std::filesystem::path& path);
BackgroundLibrary load_library(const std::filesystem::path& path);

}  // namespace semcomm
