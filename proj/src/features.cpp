#include "semcomm/features.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "semcomm/error.hpp"
#include "semcomm/kernels.hpp"

namespace semcomm {

namespace {

constexpr std::array<std::array<std::int8_t, 4>, 256> kBriefPattern{{
#include "brief_pattern.inc"
}};

// Bresenham circle of radius 3, clockwise from 12 o'clock.
constexpr std::array<std::array<int, 2>, 16> kFastCircle{{{0, -3},
                                                          {1, -3},
                                                          {2, -2},
                                                          {3, -1},
                                                          {3, 0},
                                                          {3, 1},
                                                          {2, 2},
                                                          {1, 3},
                                                          {0, 3},
                                                          {-1, 3},
                                                          {-2, 2},
                                                          {-3, 1},
                                                          {-3, 0},
                                                          {-3, -1},
                                                          {-2, -2},
                                                          {-1, -3}}};
constexpr int kFastArc = 9;
constexpr int kOrientationRadius = 15;

// Integer approximation of a sigma = 2 Gaussian, radius 4. Sums are kept
// unnormalised so inverting the input exactly inverts every comparison.
constexpr std::array<int, 9> kSmoothTaps{9, 21, 39, 56, 64, 56, 39, 21, 9};

void require_feature_size(const ImageBuf& img) {
  if (img.width() < kMinFeatureImageSize || img.height() < kMinFeatureImageSize) {
    throw ShapeError("feature extraction needs an image of at least 32x32");
  }
}

// Returns the SAD corner score, or 0 when the FAST-9 segment test fails.
int fast_score(const std::uint8_t* center, int stride, int threshold) {
  const int p = center[0];
  std::array<int, 16> ring;
  for (int i = 0; i < 16; ++i) ring[i] = center[kFastCircle[i][1] * stride + kFastCircle[i][0]];

  auto longest_run = [&](auto pred) {
    int best = 0;
    int run = 0;
    for (int i = 0; i < 32; ++i) {  // two laps handle wrap-around
      if (pred(ring[i & 15])) {
        best = std::max(best, ++run);
      } else {
        run = 0;
      }
    }
    return std::min(best, 16);
  };
  const bool bright = longest_run([&](int v) { return v > p + threshold; }) >= kFastArc;
  const bool dark = longest_run([&](int v) { return v < p - threshold; }) >= kFastArc;
  if (!bright && !dark) return 0;

  int sad_bright = 0;
  int sad_dark = 0;
  for (int v : ring) {
    if (v > p + threshold) sad_bright += v - p - threshold;
    if (v < p - threshold) sad_dark += p - threshold - v;
  }
  return std::max(sad_bright, sad_dark);
}

float centroid_orientation(const std::vector<std::uint8_t>& gray, int width, int cx, int cy) {
  long long m10 = 0;
  long long m01 = 0;
  for (int v = -kOrientationRadius; v <= kOrientationRadius; ++v) {
    const std::uint8_t* row = gray.data() + static_cast<std::size_t>(cy + v) * width;
    for (int u = -kOrientationRadius; u <= kOrientationRadius; ++u) {
      if (u * u + v * v > kOrientationRadius * kOrientationRadius) continue;
      const int value = row[cx + u];
      m10 += static_cast<long long>(u) * value;
      m01 += static_cast<long long>(v) * value;
    }
  }
  if (m10 == 0 && m01 == 0) return 0.0f;
  double angle = std::atan2(static_cast<double>(m01), static_cast<double>(m10));
  if (angle < 0) angle += 2.0 * std::numbers::pi;
  float out = static_cast<float>(angle);
  if (out >= static_cast<float>(2.0 * std::numbers::pi)) out = 0.0f;
  return out;
}

std::vector<std::int32_t> smooth(const std::vector<std::uint8_t>& gray, int width, int height) {
  constexpr int r = static_cast<int>(kSmoothTaps.size() / 2);
  std::vector<std::int32_t> tmp(gray.size());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::int32_t acc = 0;
      for (int k = -r; k <= r; ++k) {
        const int xx = std::clamp(x + k, 0, width - 1);
        acc += kSmoothTaps[k + r] * gray[static_cast<std::size_t>(y) * width + xx];
      }
      tmp[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  std::vector<std::int32_t> out(gray.size());
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      std::int32_t acc = 0;
      for (int k = -r; k <= r; ++k) {
        const int yy = std::clamp(y + k, 0, height - 1);
        acc += kSmoothTaps[k + r] * tmp[static_cast<std::size_t>(yy) * width + x];
      }
      out[static_cast<std::size_t>(y) * width + x] = acc;
    }
  }
  return out;
}

using RotatedPattern = std::array<std::array<std::array<int, 4>, 256>, kOrientationBins>;

const RotatedPattern& rotated_patterns() {
  static const RotatedPattern table = [] {
    RotatedPattern t{};
    for (int bin = 0; bin < kOrientationBins; ++bin) {
      const double a = bin * 2.0 * std::numbers::pi / kOrientationBins;
      const double c = std::cos(a);
      const double s = std::sin(a);
      for (int i = 0; i < 256; ++i) {
        const auto& p = kBriefPattern[i];
        t[bin][i] = {static_cast<int>(std::lround(p[0] * c - p[1] * s)),
                     static_cast<int>(std::lround(p[0] * s + p[1] * c)),
                     static_cast<int>(std::lround(p[2] * c - p[3] * s)),
                     static_cast<int>(std::lround(p[2] * s + p[3] * c))};
      }
    }
    return t;
  }();
  return table;
}

int orientation_bin(float orientation) {
  const double step = 2.0 * std::numbers::pi / kOrientationBins;
  long bin = std::lround(orientation / step) % kOrientationBins;
  if (bin < 0) bin += kOrientationBins;
  return static_cast<int>(bin);
}

}  // namespace

std::vector<Keypoint> detect_keypoints(const ImageBuf& img, int fast_threshold, int max_keypoints) {
  require_feature_size(img);
  if (fast_threshold < 1) throw ParameterError("fast_threshold must be >= 1");
  if (max_keypoints < 0) throw ParameterError("max_keypoints must be >= 0");

  const int w = img.width();
  const int h = img.height();
  const auto gray = to_gray(img);
  std::vector<int> score(gray.size(), 0);
  const int lo = kKeypointMargin;
  // One extra ring so border candidates see their neighbours' scores.
  for (int y = lo - 1; y < h - lo + 1; ++y) {
    for (int x = lo - 1; x < w - lo + 1; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      score[i] = fast_score(gray.data() + i, w, fast_threshold);
    }
  }

  std::vector<Keypoint> kps;
  for (int y = lo; y < h - lo; ++y) {
    for (int x = lo; x < w - lo; ++x) {
      const int s = score[static_cast<std::size_t>(y) * w + x];
      if (s == 0) continue;
      bool is_max = true;
      for (int dy = -1; dy <= 1 && is_max; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if ((dx != 0 || dy != 0) && score[static_cast<std::size_t>(y + dy) * w + x + dx] >= s) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) kps.push_back({static_cast<float>(x), static_cast<float>(y), static_cast<float>(s), 0.0f});
    }
  }

  std::stable_sort(kps.begin(), kps.end(),
                   [](const Keypoint& a, const Keypoint& b) { return a.response > b.response; });
  if (static_cast<int>(kps.size()) > max_keypoints) kps.resize(static_cast<std::size_t>(max_keypoints));
  for (auto& kp : kps) {
    kp.orientation = centroid_orientation(gray, w, static_cast<int>(kp.x), static_cast<int>(kp.y));
  }
  return kps;
}

std::vector<Descriptor256> describe(const ImageBuf& img, std::span<const Keypoint> keypoints) {
  require_feature_size(img);
  const int w = img.width();
  const int h = img.height();
  for (const auto& kp : keypoints) {
    const long x = std::lround(kp.x);
    const long y = std::lround(kp.y);
    if (x < kKeypointMargin || y < kKeypointMargin || x >= w - kKeypointMargin ||
        y >= h - kKeypointMargin) {
      throw BoundsError("keypoint too close to the image border for its descriptor patch");
    }
  }

  const auto smoothed = smooth(to_gray(img), w, h);
  const auto& patterns = rotated_patterns();
  std::vector<Descriptor256> out;
  out.reserve(keypoints.size());
  for (const auto& kp : keypoints) {
    const int cx = static_cast<int>(std::lround(kp.x));
    const int cy = static_cast<int>(std::lround(kp.y));
    const auto& pattern = patterns[orientation_bin(kp.orientation)];
    const std::int32_t* center = smoothed.data() + static_cast<std::size_t>(cy) * w + cx;
    Descriptor256 d;
    for (int i = 0; i < 256; ++i) {
      const auto& p = pattern[i];
      if (center[p[1] * w + p[0]] < center[p[3] * w + p[2]]) d.set_bit(i);
    }
    out.push_back(d);
  }
  return out;
}

FeatureSet extract_features(const ImageBuf& img, const FeatureParams& params) {
  FeatureSet fs;
  fs.keypoints = detect_keypoints(img, params.fast_threshold, params.max_keypoints);
  fs.descriptors = describe(img, fs.keypoints);
  return fs;
}

int hamming(const Descriptor256& a, const Descriptor256& b) {
  int bits = 0;
  for (int w = 0; w < 4; ++w) bits += std::popcount(a.words[w] ^ b.words[w]);
  return bits;
}

std::vector<MatchPair> match_descriptors(std::span<const Descriptor256> da,
                                         std::span<const Descriptor256> db, int t) {
  if (t < 0 || t > 256) throw ParameterError("hamming threshold must be in [0, 256]");
  std::vector<MatchPair> out;
  if (da.empty() || db.empty()) return out;

  static_assert(sizeof(Descriptor256) == 32);
  const std::span<const std::uint64_t> flat(db.front().words.data(), db.size() * 4);
  std::vector<std::uint16_t> dist(db.size());
  const auto& k = kernels::active();
  for (std::size_t i = 0; i < da.size(); ++i) {
    k.hamming_batch(da[i].words.data(), flat, dist);
    const auto best = std::min_element(dist.begin(), dist.end());
    if (*best <= t) {
      out.push_back({static_cast<int>(i), static_cast<int>(best - dist.begin()), *best});
    }
  }
  return out;
}

std::span<const std::array<std::int8_t, 4>> brief_pattern() { return kBriefPattern; }

}  // namespace semcomm
