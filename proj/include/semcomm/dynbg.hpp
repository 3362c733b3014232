#pragma once

#include <vector>

#include "semcomm/features.hpp"
#include "semcomm/imaging.hpp"

namespace semcomm {

struct FrameSequence {
  std::vector<ImageBuf> frames;
  std::vector<MaskBuf> masks;  // 0 = foreground, 1 = background
};

struct StitchedBackground {
  ImageBuf image;
  MaskBuf valid;              // 1 where at least one frame saw background
  MaskBuf always_background;  // per-pixel AND of the input masks
};

struct SceneSegment {
  int start = 0;  // inclusive
  int end = 0;    // exclusive
  int reference_frame = 0;

  bool operator==(const SceneSegment&) const = default;
};

enum class Aggregator { kFirst, kMean };

// Supplements background pixels across frames. Pixels never seen as
// background stay black with valid = 0.
StitchedBackground stitch(const FrameSequence& seq, Aggregator aggregator = Aggregator::kMean);

struct SceneSplitParams {
  int sim_threshold = 30;
  // Much stricter than the background-matching default: frames of one static
  // scene share keypoints at near-zero distance, while unrelated textures
  // still produce dozens of nearest neighbours under 40.
  int hamming_threshold = 16;
  bool raw_similarity = false;  // compare unmasked frames
  FeatureParams features;
};

// Greedy split: a frame stays in the current segment while its match count
// against the segment's reference frame is >= sim_threshold.
std::vector<SceneSegment> split_scenes(const std::vector<ImageBuf>& frames,
                                       const std::vector<MaskBuf>& masks,
                                       const SceneSplitParams& params);

}  // namespace semcomm
