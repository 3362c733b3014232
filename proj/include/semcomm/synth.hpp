#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semcomm/dynbg.hpp"
#include "semcomm/imaging.hpp"
#include "semcomm/segmentation.hpp"

// Deterministic synthetic corpus: textured backgrounds, person-like sprites,
// composed scenes, and short videos with exact ground truth.
namespace semcomm::synth {

// Small deterministic generator; identical streams on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform integer in [lo, hi].
  int uniform(int lo, int hi);
  double unit();  // [0, 1)

 private:
  std::uint64_t state_;
};

ImageBuf textured_background(int width, int height, std::uint64_t seed);

// Checkerboard with square cells of two colours.
ImageBuf checkerboard(int width, int height, int cell);

struct Sprite {
  ImageBuf image;         // sprite pixels over black
  MaskBuf mask;           // 0 on sprite pixels
  std::vector<Point2> outline;  // landmark-like points on the silhouette
};

// Head-and-torso silhouette filling a width x height box.
Sprite person_sprite(int width, int height, std::uint64_t seed);

struct Scene {
  std::string name;
  ImageBuf image;
  MaskBuf person_mask;   // 0 on the pasted sprite
  BoundingRect sprite_rect;
  LandmarkSet landmarks;
  int background_index = 0;
};

// Pastes `sprite` at (x, y).
Scene compose(const ImageBuf& background, const Sprite& sprite, int x, int y, std::string name,
              int background_index);

// Library backgrounds used by the acceptance scenarios (320 x 240).
std::vector<ImageBuf> background_set(int count, std::uint64_t seed, int width = 320, int height = 240);

// Scene whose sprite bounding box covers about `fraction` of the frame.
Scene scene_with_fraction(const ImageBuf& background, int background_index, double fraction,
                          std::uint64_t seed, std::string name);

// Static checkerboard, a 16x16 occluder moving over 20 frames and a fixed
// 8x8 occluder in the top-left corner.
struct GroundTruthVideo {
  FrameSequence seq;
  ImageBuf background;
  MaskBuf never_visible;  // 0 where the background is never visible
};
GroundTruthVideo moving_occluder_video(int width = 64, int height = 64, int frames = 20);

// Textured backgrounds with a sprite walking across; the background switches
// from `first` to `second` at frame `cut` (no switch when cut >= frames).
FrameSequence walking_video(const ImageBuf& first, const ImageBuf& second, int frames, int cut,
                            std::uint64_t seed);

}  // namespace semcomm::synth
