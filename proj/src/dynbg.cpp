#include "semcomm/dynbg.hpp"

#include "semcomm/error.hpp"

namespace semcomm {

namespace {

void validate(const FrameSequence& seq) {
  if (seq.frames.empty()) throw InputError("frame sequence is empty");
  if (seq.frames.size() != seq.masks.size()) throw InputError("frame and mask counts differ");
  const int w = seq.frames.front().width();
  const int h = seq.frames.front().height();
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    if (seq.frames[i].width() != w || seq.frames[i].height() != h || seq.masks[i].width() != w ||
        seq.masks[i].height() != h) {
      throw ShapeError("all frames and masks must share dimensions");
    }
  }
}

}  // namespace

StitchedBackground stitch(const FrameSequence& seq, Aggregator aggregator) {
  validate(seq);
  const int w = seq.frames.front().width();
  const int h = seq.frames.front().height();
  const std::size_t pixels = static_cast<std::size_t>(w) * h;

  std::vector<std::uint32_t> sum(pixels * ImageBuf::kChannels, 0);
  std::vector<std::uint32_t> seen(pixels, 0);
  for (std::size_t f = 0; f < seq.frames.size(); ++f) {
    const auto mask = seq.masks[f].data();
    const auto data = seq.frames[f].data();
    for (std::size_t p = 0; p < pixels; ++p) {
      if (mask[p] != MaskBuf::kBackground) continue;
      if (aggregator == Aggregator::kFirst && seen[p] > 0) continue;
      ++seen[p];
      for (int c = 0; c < ImageBuf::kChannels; ++c) sum[p * 3 + c] += data[p * 3 + c];
    }
  }

  std::vector<std::uint8_t> image(pixels * ImageBuf::kChannels, 0);
  std::vector<std::uint8_t> valid(pixels, 0);
  std::vector<std::uint8_t> always(pixels, 0);
  for (std::size_t p = 0; p < pixels; ++p) {
    if (seen[p] == 0) continue;
    valid[p] = 1;
    for (int c = 0; c < ImageBuf::kChannels; ++c) {
      image[p * 3 + c] = static_cast<std::uint8_t>((sum[p * 3 + c] + seen[p] / 2) / seen[p]);
    }
  }
  for (std::size_t p = 0; p < pixels; ++p) {
    bool all = true;
    for (const auto& m : seq.masks) all = all && m.data()[p] == MaskBuf::kBackground;
    always[p] = all ? 1 : 0;
  }
  return {ImageBuf(w, h, std::move(image)), MaskBuf(w, h, std::move(valid)),
          MaskBuf(w, h, std::move(always))};
}

std::vector<SceneSegment> split_scenes(const std::vector<ImageBuf>& frames,
                                       const std::vector<MaskBuf>& masks,
                                       const SceneSplitParams& params) {
  if (frames.empty()) throw InputError("scene splitting needs at least one frame");
  if (!params.raw_similarity && masks.size() != frames.size()) {
    throw InputError("frame and mask counts differ");
  }
  auto descriptors_of = [&](std::size_t i) {
    const ImageBuf view =
        params.raw_similarity ? frames[i] : apply_mask(frames[i], masks[i], MaskBuf::kBackground);
    return extract_features(view, params.features).descriptors;
  };

  std::vector<SceneSegment> segments;
  SceneSegment current{0, 1, 0};
  auto reference = descriptors_of(0);
  for (std::size_t i = 1; i < frames.size(); ++i) {
    bool same_scene = params.sim_threshold <= 0;
    std::vector<Descriptor256> desc;
    if (!same_scene) {
      desc = descriptors_of(i);
      const auto n = match_descriptors(desc, reference, params.hamming_threshold).size();
      same_scene = static_cast<int>(n) >= params.sim_threshold;
    }
    if (same_scene) {
      current.end = static_cast<int>(i) + 1;
      continue;
    }
    segments.push_back(current);
    current = {static_cast<int>(i), static_cast<int>(i) + 1, static_cast<int>(i)};
    reference = std::move(desc);
  }
  segments.push_back(current);
  return segments;
}

}  // namespace semcomm
