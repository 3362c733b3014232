#include "semcomm/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "semcomm/error.hpp"

namespace semcomm {

namespace {

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace

HullPolygon convex_hull(const LandmarkSet& input) {
  std::vector<Point2> pts = input.points;
  if (pts.size() < 3) throw DegenerateInputError("convex hull needs at least 3 points");
  std::sort(pts.begin(), pts.end(),
            [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  std::vector<Point2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 0 ? k - 1 : 0);
  if (hull.size() < 3) throw DegenerateInputError("convex hull of collinear points");
  return {std::move(hull)};
}

bool hull_contains(const HullPolygon& hull, Point2 p) {
  const auto& v = hull.vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (cross(v[i], v[(i + 1) % v.size()], p) < 0) return false;
  }
  return true;
}

MaskBuf hull_to_mask(const HullPolygon& hull, int width, int height) {
  MaskBuf mask(width, height, MaskBuf::kBackground);
  if (hull.vertices.empty()) return mask;
  double min_x = hull.vertices[0].x, max_x = min_x;
  double min_y = hull.vertices[0].y, max_y = min_y;
  for (const auto& v : hull.vertices) {
    min_x = std::min(min_x, v.x);
    max_x = std::max(max_x, v.x);
    min_y = std::min(min_y, v.y);
    max_y = std::max(max_y, v.y);
  }
  const int x0 = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
  const int x1 = std::min(width - 1, static_cast<int>(std::ceil(max_x)));
  const int y0 = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
  const int y1 = std::min(height - 1, static_cast<int>(std::ceil(max_y)));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (hull_contains(hull, {x + 0.5, y + 0.5})) mask.set(x, y, MaskBuf::kForeground);
    }
  }
  return mask;
}

BoundingRect foreground_bbox(const MaskBuf& mask) {
  int x1 = mask.width(), y1 = mask.height(), x2 = -1, y2 = -1;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (mask.at(x, y) != MaskBuf::kForeground) continue;
      x1 = std::min(x1, x);
      y1 = std::min(y1, y);
      x2 = std::max(x2, x);
      y2 = std::max(y2, y);
    }
  }
  if (x2 < 0) throw NoForegroundError("segmentation found no foreground pixels");
  return {x1, y1, x2 + 1, y2 + 1};
}

SegmentationResult ProvidedMaskSegmenter::segment(const ImageBuf& img) const {
  if (img.width() != mask_.width() || img.height() != mask_.height()) {
    throw ShapeError("provided mask does not match image dimensions");
  }
  return {mask_, foreground_bbox(mask_)};
}

BackgroundDiffSegmenter::BackgroundDiffSegmenter(ImageBuf background, int tau)
    : background_(std::move(background)), tau_(tau) {
  if (tau < 0 || tau > 255) throw ParameterError("tau must be in [0, 255]");
}

SegmentationResult BackgroundDiffSegmenter::segment(const ImageBuf& img) const {
  if (img.width() != background_.width() || img.height() != background_.height()) {
    throw ShapeError("background does not match image dimensions");
  }
  MaskBuf raw(img.width(), img.height(), MaskBuf::kBackground);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      int diff = 0;
      for (int c = 0; c < ImageBuf::kChannels; ++c) {
        diff = std::max(diff, std::abs(int{img.at(x, y, c)} - int{background_.at(x, y, c)}));
      }
      if (diff > tau_) raw.set(x, y, MaskBuf::kForeground);
    }
  }
  MaskBuf cleaned = majority_filter(raw);
  BoundingRect bbox = foreground_bbox(cleaned);
  return {std::move(cleaned), bbox};
}

MaskBuf majority_filter(const MaskBuf& mask) {
  MaskBuf out(mask.width(), mask.height(), MaskBuf::kBackground);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      int fg = 0;
      int total = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx;
          const int yy = y + dy;
          if (xx < 0 || yy < 0 || xx >= mask.width() || yy >= mask.height()) continue;
          ++total;
          fg += mask.at(xx, yy) == MaskBuf::kForeground;
        }
      }
      const int bg = total - fg;
      std::uint8_t v = mask.at(x, y);
      if (fg > bg) v = MaskBuf::kForeground;
      if (bg > fg) v = MaskBuf::kBackground;
      out.set(x, y, v);
    }
  }
  return out;
}

std::unique_ptr<Segmenter> make_segmenter(const SegmenterConfig& config) {
  switch (config.kind) {
    case SegmenterKind::kProvidedMask:
      if (!config.mask) throw ConfigError("provided-mask segmenter requires a mask");
      return std::make_unique<ProvidedMaskSegmenter>(*config.mask);
    case SegmenterKind::kBackgroundDiff:
      if (!config.background) throw ConfigError("background-diff segmenter requires a background");
      return std::make_unique<BackgroundDiffSegmenter>(*config.background, config.tau);
  }
  throw ConfigError("unknown segmenter kind");
}

LandmarkSet parse_landmarks_json(const std::string& text) {
  LandmarkSet set;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2) throw InputError("landmark must be [x, y]");
      set.points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("landmarks JSON: ") + e.what());
  }
  return set;
}

LandmarkSet read_landmarks_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_landmarks_json(ss.str());
}

}  // namespace semcomm
