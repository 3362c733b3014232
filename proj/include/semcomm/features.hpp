#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "semcomm/imaging.hpp"

namespace semcomm {

struct Keypoint {
  float x = 0.0f;
  float y = 0.0f;
  float response = 0.0f;
  // Radians in [0, 2*pi).
  float orientation = 0.0f;

  bool operator==(const Keypoint&) const = default;
};

// 256-bit binary descriptor; bit i lives in words[i / 64], bit i % 64.
struct Descriptor256 {
  std::array<std::uint64_t, 4> words{};

  bool bit(int i) const { return (words[i >> 6] >> (i & 63)) & 1u; }
  void set_bit(int i) { words[i >> 6] |= std::uint64_t{1} << (i & 63); }
  Descriptor256 operator~() const {
    return {{~words[0], ~words[1], ~words[2], ~words[3]}};
  }

  bool operator==(const Descriptor256&) const = default;
};

struct MatchPair {
  int index_a = 0;
  int index_b = 0;
  int distance = 0;

  bool operator==(const MatchPair&) const = default;
};

struct FeatureParams {
  int fast_threshold = 20;
  int max_keypoints = 500;
};

// Keypoints are kept this far from every image edge so the rotated
// 31x31 sampling pattern always stays inside the image.
inline constexpr int kKeypointMargin = 19;
inline constexpr int kPatchSize = 31;
inline constexpr int kMinFeatureImageSize = 32;
inline constexpr int kOrientationBins = 30;

// FAST-9 corners on the grayscale image, 3x3 non-maximum suppression on the
// SAD score, strongest max_keypoints kept, intensity-centroid orientation.
std::vector<Keypoint> detect_keypoints(const ImageBuf& img, int fast_threshold, int max_keypoints);

// Rotated BRIEF over a Gaussian-smoothed image.
std::vector<Descriptor256> describe(const ImageBuf& img, std::span<const Keypoint> keypoints);

struct FeatureSet {
  std::vector<Keypoint> keypoints;
  std::vector<Descriptor256> descriptors;
};

FeatureSet extract_features(const ImageBuf& img, const FeatureParams& params = {});

int hamming(const Descriptor256& a, const Descriptor256& b);

// Nearest neighbour in db for every entry of da (ties -> lowest index_b),
// emitted when its distance is <= t.
std::vector<MatchPair> match_descriptors(std::span<const Descriptor256> da,
                                         std::span<const Descriptor256> db, int t);

// The fixed BRIEF sampling table: 256 rows of (px, py, qx, qy).
std::span<const std::array<std::int8_t, 4>> brief_pattern();

}  // namespace semcomm
