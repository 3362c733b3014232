#include "semcomm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "semcomm/channel.hpp"
#include "semcomm/error.hpp"

namespace semcomm::synth {

std::uint64_t Rng::next() {
  const std::uint64_t v = splitmix64_at(state_, 0);
  state_ += 0x9E3779B97F4A7C15ull;
  return v;
}

int Rng::uniform(int lo, int hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(next() % span);
}

double Rng::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

struct Rgb {
  std::uint8_t r, g, b;
};

Rgb random_color(Rng& rng) {
  return {static_cast<std::uint8_t>(rng.uniform(0, 255)), static_cast<std::uint8_t>(rng.uniform(0, 255)),
          static_cast<std::uint8_t>(rng.uniform(0, 255))};
}

void paint(ImageBuf& img, int x, int y, const Rgb& c) { img.set_pixel(x, y, c.r, c.g, c.b); }

void fill_rect(ImageBuf& img, int x0, int y0, int x1, int y1, const Rgb& c) {
  for (int y = std::max(0, y0); y < std::min(img.height(), y1); ++y)
    for (int x = std::max(0, x0); x < std::min(img.width(), x1); ++x) paint(img, x, y, c);
}

void fill_disc(ImageBuf& img, double cx, double cy, double r, const Rgb& c) {
  for (int y = std::max(0, static_cast<int>(cy - r)); y <= std::min(img.height() - 1, static_cast<int>(cy + r)); ++y)
    for (int x = std::max(0, static_cast<int>(cx - r)); x <= std::min(img.width() - 1, static_cast<int>(cx + r)); ++x)
      if ((x + 0.5 - cx) * (x + 0.5 - cx) + (y + 0.5 - cy) * (y + 0.5 - cy) <= r * r) paint(img, x, y, c);
}

void fill_triangle(ImageBuf& img, Point2 a, Point2 b, Point2 c, const Rgb& color) {
  HullPolygon hull;
  try {
    hull = convex_hull({{a, b, c}});
  } catch (const DegenerateInputError&) {
    return;
  }
  const int x0 = std::max(0, static_cast<int>(std::min({a.x, b.x, c.x})));
  const int x1 = std::min(img.width() - 1, static_cast<int>(std::max({a.x, b.x, c.x})));
  const int y0 = std::max(0, static_cast<int>(std::min({a.y, b.y, c.y})));
  const int y1 = std::min(img.height() - 1, static_cast<int>(std::max({a.y, b.y, c.y})));
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if (hull_contains(hull, {x + 0.5, y + 0.5})) paint(img, x, y, color);
}

// Bilinearly interpolated lattice noise in [-1, 1] with the given cell size.
class ValueNoise {
 public:
  ValueNoise(int width, int height, int cell, Rng& rng)
      : cols_(width / cell + 2), cell_(cell), lattice_(static_cast<std::size_t>(cols_) * (height / cell + 2)) {
    for (auto& v : lattice_) v = rng.unit() * 2.0 - 1.0;
  }

  double at(int x, int y) const {
    const double fx = static_cast<double>(x) / cell_, fy = static_cast<double>(y) / cell_;
    const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
    const double tx = fx - ix, ty = fy - iy;
    auto l = [&](int cx, int cy) { return lattice_[static_cast<std::size_t>(cy) * cols_ + cx]; };
    const double top = l(ix, iy) * (1 - tx) + l(ix + 1, iy) * tx;
    const double bottom = l(ix, iy + 1) * (1 - tx) + l(ix + 1, iy + 1) * tx;
    return top * (1 - ty) + bottom * ty;
  }

 private:
  int cols_;
  int cell_;
  std::vector<double> lattice_;
};

}  // namespace

ImageBuf textured_background(int width, int height, std::uint64_t seed) {
  Rng rng(seed);
  ImageBuf img(width, height);

  // Multi-octave colour noise as the base layer.
  struct Octave {
    int cell;
    double amplitude;
  };
  constexpr Octave kOctaves[] = {{48, 70.0}, {16, 45.0}, {6, 30.0}};
  const Rgb base = random_color(rng);
  std::vector<ValueNoise> noise;
  for (const auto& o : kOctaves)
    for (int ch = 0; ch < 3; ++ch) noise.emplace_back(width, height, o.cell, rng);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v[3] = {static_cast<double>(base.r), static_cast<double>(base.g), static_cast<double>(base.b)};
      for (std::size_t o = 0; o < std::size(kOctaves); ++o)
        for (int ch = 0; ch < 3; ++ch) v[ch] += kOctaves[o].amplitude * noise[o * 3 + ch].at(x, y);
      auto q = [](double d) { return static_cast<std::uint8_t>(std::clamp(std::lround(d), 0L, 255L)); };
      img.set_pixel(x, y, q(v[0]), q(v[1]), q(v[2]));
    }
  }

  const int area_scale = std::max(1, width * height / (320 * 240));
  const int shapes = 90 * area_scale;
  for (int i = 0; i < shapes; ++i) {
    const Rgb c = random_color(rng);
    switch (rng.uniform(0, 2)) {
      case 0: {
        const int w = rng.uniform(4, 40);
        const int h = rng.uniform(4, 40);
        const int x = rng.uniform(-8, width - 8);
        const int y = rng.uniform(-8, height - 8);
        fill_rect(img, x, y, x + w, y + h, c);
        break;
      }
      case 1:
        fill_disc(img, rng.uniform(0, width), rng.uniform(0, height), rng.uniform(3, 18), c);
        break;
      default: {
        const double cx = rng.uniform(0, width);
        const double cy = rng.uniform(0, height);
        auto vertex = [&] {
          const double a = rng.unit() * 2.0 * std::numbers::pi;
          const double r = rng.uniform(6, 30);
          return Point2{cx + r * std::cos(a), cy + r * std::sin(a)};
        };
        const Point2 a = vertex(), b = vertex(), d = vertex();
        fill_triangle(img, a, b, d, c);
      }
    }
  }

  // Fine random-colour gravel dominates the final mix. Coarse structure alone gives
  // keypoints whose oriented patches look alike across images.
  constexpr int kGrain = 3;
  constexpr int kGravelWeight = 7;  // out of 10
  const int gw = width / kGrain + 1;
  std::vector<Rgb> gravel(static_cast<std::size_t>(gw) * (height / kGrain + 1));
  for (auto& g : gravel) g = random_color(rng);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Rgb& g = gravel[static_cast<std::size_t>(y / kGrain) * gw + x / kGrain];
      const auto p = img.pixel(x, y);
      auto mix = [](int coarse, int fine) {
        return static_cast<std::uint8_t>((coarse * (10 - kGravelWeight) + fine * kGravelWeight + 5) / 10);
      };
      img.set_pixel(x, y, mix(p[0], g.r), mix(p[1], g.g), mix(p[2], g.b));
    }
  }
  return img;
}

ImageBuf checkerboard(int width, int height, int cell) {
  ImageBuf img(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const bool dark = ((x / cell) + (y / cell)) % 2 == 0;
      img.set_pixel(x, y, dark ? 40 : 220, dark ? 60 : 200, dark ? 90 : 30);
    }
  return img;
}

Sprite person_sprite(int width, int height, std::uint64_t seed) {
  Rng rng(seed);
  Sprite s{ImageBuf(width, height), MaskBuf(width, height, MaskBuf::kBackground), {}};
  const double head_r = std::min(width, height) * 0.2;
  const double hx = width / 2.0;
  const double hy = head_r + 0.5;
  const double bx = width / 2.0;
  const double by = hy + head_r + (height - hy - head_r) / 2.0;
  const double brx = width / 2.0 - 0.5;
  const double bry = (height - hy - head_r) / 2.0 - 0.5;
  const Rgb skin{225, 180, 150};
  const Rgb shirt_a = random_color(rng);
  const Rgb shirt_b = random_color(rng);
  const int stripe = rng.uniform(4, 9);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double px = x + 0.5, py = y + 0.5;
      const bool in_head = (px - hx) * (px - hx) + (py - hy) * (py - hy) <= head_r * head_r;
      const double ex = (px - bx) / brx, ey = (py - by) / bry;
      const bool in_body = ex * ex + ey * ey <= 1.0;
      if (!in_head && !in_body) continue;
      const Rgb c = in_head ? skin : ((y / stripe) % 2 == 0 ? shirt_a : shirt_b);
      s.image.set_pixel(x, y, c.r, c.g, c.b);
      s.mask.set(x, y, MaskBuf::kForeground);
    }
  }
  for (int k = 0; k < 16; ++k) {
    const double a = k * 2.0 * std::numbers::pi / 16.0;
    s.outline.push_back({hx + head_r * std::cos(a), hy + head_r * std::sin(a)});
    s.outline.push_back({bx + brx * std::cos(a), by + bry * std::sin(a)});
  }
  return s;
}

Scene compose(const ImageBuf& background, const Sprite& sprite, int x, int y, std::string name,
              int background_index) {
  Scene scene{std::move(name), background, MaskBuf(background.width(), background.height()), {}, {},
              background_index};
  int x1 = background.width(), y1 = background.height(), x2 = -1, y2 = -1;
  for (int sy = 0; sy < sprite.image.height(); ++sy) {
    for (int sx = 0; sx < sprite.image.width(); ++sx) {
      if (sprite.mask.at(sx, sy) != MaskBuf::kForeground) continue;
      const int tx = x + sx, ty = y + sy;
      if (tx < 0 || ty < 0 || tx >= background.width() || ty >= background.height()) continue;
      auto p = sprite.image.pixel(sx, sy);
      scene.image.set_pixel(tx, ty, p[0], p[1], p[2]);
      scene.person_mask.set(tx, ty, MaskBuf::kForeground);
      x1 = std::min(x1, tx);
      y1 = std::min(y1, ty);
      x2 = std::max(x2, tx);
      y2 = std::max(y2, ty);
    }
  }
  if (x2 >= 0) scene.sprite_rect = {x1, y1, x2 + 1, y2 + 1};
  for (const auto& p : sprite.outline) {
    scene.landmarks.points.push_back({std::clamp(p.x + x, 0.0, background.width() - 1.0),
                                      std::clamp(p.y + y, 0.0, background.height() - 1.0)});
  }
  return scene;
}

std::vector<ImageBuf> background_set(int count, std::uint64_t seed, int width, int height) {
  std::vector<ImageBuf> out;
  for (int i = 0; i < count; ++i) out.push_back(textured_background(width, height, splitmix64_at(seed, i)));
  return out;
}

Scene scene_with_fraction(const ImageBuf& background, int background_index, double fraction,
                          std::uint64_t seed, std::string name) {
  Rng rng(seed);
  const double area = fraction * background.width() * background.height();
  // Sprites are 3:4 (width:height).
  const int h = std::max(8, static_cast<int>(std::sqrt(area * 4.0 / 3.0)));
  const int w = std::max(6, static_cast<int>(area / h));
  const Sprite sprite = person_sprite(w, h, rng.next());
  const int x = rng.uniform(4, std::max(4, background.width() - w - 4));
  const int y = rng.uniform(4, std::max(4, background.height() - h - 4));
  return compose(background, sprite, x, y, std::move(name), background_index);
}

GroundTruthVideo moving_occluder_video(int width, int height, int frames) {
  GroundTruthVideo v;
  v.background = checkerboard(width, height, 8);
  v.never_visible = MaskBuf(width, height, 1);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x) v.never_visible.set(x, y, 0);

  const int steps_x = std::max(1, (width - 16) / 16 + 1);
  for (int f = 0; f < frames; ++f) {
    ImageBuf frame = v.background;
    MaskBuf mask(width, height, MaskBuf::kBackground);
    const int cell = f % (steps_x * std::max(1, (height - 16) / 16 + 1));
    const int ox = (cell % steps_x) * 16;
    const int oy = (cell / steps_x) * 16;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const bool corner = x < 8 && y < 8;
        const bool square = x >= ox && x < ox + 16 && y >= oy && y < oy + 16;
        if (!corner && !square) continue;
        frame.set_pixel(x, y, square ? 200 : 10, square ? 30 : 10, square ? 30 : 200);
        mask.set(x, y, MaskBuf::kForeground);
      }
    }
    v.seq.frames.push_back(std::move(frame));
    v.seq.masks.push_back(std::move(mask));
  }
  return v;
}

FrameSequence walking_video(const ImageBuf& first, const ImageBuf& second, int frames, int cut,
                            std::uint64_t seed) {
  FrameSequence seq;
  const int w = first.width() / 6;
  const int h = first.height() * 2 / 5;
  const Sprite sprite = person_sprite(w, h, seed);
  const int y = first.height() - h - 12;
  for (int f = 0; f < frames; ++f) {
    const ImageBuf& bg = f < cut ? first : second;
    const int x = 8 + (frames > 1 ? f * (first.width() - w - 16) / (frames - 1) : 0);
    Scene s = compose(bg, sprite, x, y, "frame", f < cut ? 0 : 1);
    seq.frames.push_back(std::move(s.image));
    seq.masks.push_back(std::move(s.person_mask));
  }
  return seq;
}

}  // namespace semcomm::synth
