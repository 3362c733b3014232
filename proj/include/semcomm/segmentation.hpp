#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <vector>

#include "semcomm/imaging.hpp"

namespace semcomm {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Point2&) const = default;
};

struct LandmarkSet {
  std::vector<Point2> points;
};

// Counter-clockwise in a y-up frame (clockwise on screen), strictly convex.
struct HullPolygon {
  std::vector<Point2> vertices;
};

struct SegmentationResult {
  MaskBuf mask;
  BoundingRect bbox;
};

// Andrew's monotone chain. Throws DegenerateInputError for < 3 points or a
// collinear set.
HullPolygon convex_hull(const LandmarkSet& points);

// True when p lies inside or on the boundary of the hull.
bool hull_contains(const HullPolygon& hull, Point2 p);

// Pixels whose centres lie inside or on the hull become foreground (0).
MaskBuf hull_to_mask(const HullPolygon& hull, int width, int height);

// Tight box around the foreground pixels; throws NoForegroundError when the
// mask has none.
BoundingRect foreground_bbox(const MaskBuf& mask);

// Foreground isolation strategy. Implementations are immutable once built.
class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual SegmentationResult segment(const ImageBuf& img) const = 0;
};

// Uses an externally supplied mask.
class ProvidedMaskSegmenter final : public Segmenter {
 public:
  explicit ProvidedMaskSegmenter(MaskBuf mask) : mask_(std::move(mask)) {}
  SegmentationResult segment(const ImageBuf& img) const override;

 private:
  MaskBuf mask_;
};

// Foreground where any channel differs from a known background by more than
// tau, followed by one 3x3 majority-vote cleanup pass.
class BackgroundDiffSegmenter final : public Segmenter {
 public:
  static constexpr int kDefaultTau = 30;

  explicit BackgroundDiffSegmenter(ImageBuf background, int tau = kDefaultTau);
  SegmentationResult segment(const ImageBuf& img) const override;

 private:
  ImageBuf background_;
  int tau_;
};

enum class SegmenterKind { kProvidedMask, kBackgroundDiff };

struct SegmenterConfig {
  SegmenterKind kind = SegmenterKind::kBackgroundDiff;
  std::optional<MaskBuf> mask;         // kProvidedMask
  std::optional<ImageBuf> background;  // kBackgroundDiff
  int tau = BackgroundDiffSegmenter::kDefaultTau;
};

// Throws ConfigError when the selected kind is missing its input.
std::unique_ptr<Segmenter> make_segmenter(const SegmenterConfig& config);

// One 3x3 majority-vote pass; ties keep the centre value.
MaskBuf majority_filter(const MaskBuf& mask);

// Landmarks sidecar: {"points": [[x, y], ...]}.
LandmarkSet read_landmarks_json(const std::filesystem::path& path);
LandmarkSet parse_landmarks_json(const std::string& text);

}  // namespace semcomm
