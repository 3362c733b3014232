#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "semcomm/bglib.hpp"
#include "semcomm/channel.hpp"
#include "semcomm/dynbg.hpp"
#include "semcomm/keyinfo.hpp"
#include "semcomm/segmentation.hpp"
#include "semcomm/wire.hpp"

namespace semcomm {

inline constexpr long long kDefaultMaxPixels = 1LL << 20;

struct PipelineKnobs {
  int hamming_threshold = kDefaultHammingThreshold;
  int n_min = kDefaultMinMatches;
  long long max_pixels = kDefaultMaxPixels;
  FeatureParams features;
  // Extraction segmenter. kBackgroundDiff diffs against the matched library
  // background; kProvidedMask uses person_mask.
  SegmenterKind segmenter = SegmenterKind::kBackgroundDiff;
  int tau = BackgroundDiffSegmenter::kDefaultTau;
  // Person region for shielding during matching; landmarks take precedence.
  std::optional<MaskBuf> person_mask;
  std::optional<LandmarkSet> landmarks;
  int crop_padding = kCropPadding;
  // Gate composition with the segmentation mask instead of pasting the rect.
  bool transmit_mask = false;
};

struct TransmitReport {
  TransmitMode mode = TransmitMode::kDirect;
  ImageBuf reconstructed;
  PsnrValue psnr_vs_original = PsnrValue::infinite();
  std::size_t symbols_sent = 0;
  double compression_factor = 0.0;
  std::optional<std::uint32_t> background_id;
  std::optional<CropRecord> record;
  MatchOutcome match;
  WireFrame frame;
  // Why the direct path was taken ("no-match", "no-foreground", "forced").
  std::string fallback_reason;
};

// Mask used to shield the person during matching: the landmark hull when
// landmarks are known, else the provided mask, else nothing.
std::optional<MaskBuf> shielding_mask(const ImageBuf& img, const PipelineKnobs& knobs);

// Query descriptors on the shielded image.
std::vector<Descriptor256> query_descriptors(const ImageBuf& img, const PipelineKnobs& knobs);

// Key-information path with fallback to direct transmission.
TransmitReport transmit_image(const ImageBuf& img, const BackgroundLibrary& lib, const ChannelConfig& cfg,
                              const PipelineKnobs& knobs);

// Whole-frame baseline through the same channel codec.
TransmitReport transmit_direct(const ImageBuf& img, const ChannelConfig& cfg, const PipelineKnobs& knobs);

// Receiver side: rebuilds the image from a frame. Keyinfo frames need their
// background in `lib`.
ImageBuf receive_frame(const WireFrame& frame, const BackgroundLibrary& lib, const ChannelConfig& cfg,
                       const MaskBuf* crop_mask = nullptr);

struct VideoKnobs {
  double warmup_fraction = 0.25;
  int warmup_cap = 30;
  Aggregator aggregator = Aggregator::kMean;
  SceneSplitParams split;
};

struct VideoResult {
  std::vector<SceneSegment> segments;
  std::vector<TransmitReport> reports;        // one per frame
  std::vector<BackgroundLibrary> libraries;   // one single-entry library per segment
  std::vector<std::size_t> never_visible;     // pixels with valid = 0, per segment
};

// Frames seed their noise with splitmix64_at(cfg.seed, frame_index).
std::uint64_t frame_seed(std::uint64_t seed, std::size_t frame_index);

int warmup_length(int segment_length, const VideoKnobs& knobs);

VideoResult transmit_video(const FrameSequence& seq, const ChannelConfig& cfg, const PipelineKnobs& knobs,
                           const VideoKnobs& video);

struct EvalScene {
  std::string name;
  ImageBuf image;
  std::optional<MaskBuf> person_mask;
  std::optional<LandmarkSet> landmarks;
};

struct EvalRow {
  std::string scene;
  double snr_db = 0.0;
  std::string seed;  // decimal seed, or "mean" for averaged rows
  std::string method;  // "proposed" or "direct"
  PsnrValue psnr = PsnrValue::infinite();
  double symbols = 0.0;
  double compression_factor = 0.0;
};

// Runs the proposed pipeline and the direct baseline for every
// scene x SNR x seed, then appends per (scene, SNR, method) averages.
std::vector<EvalRow> eval_sweep(const std::vector<EvalScene>& scenes, const BackgroundLibrary& lib,
                                const std::vector<double>& snrs, const std::vector<std::uint64_t>& seeds,
                                const ChannelConfig& base, const PipelineKnobs& knobs, int jobs = 1);

inline constexpr const char* kEvalCsvHeader = "scene,snr_db,seed,method,psnr_db,symbols,compression_factor";
std::string eval_csv(const std::vector<EvalRow>& rows);

}  // namespace semcomm
