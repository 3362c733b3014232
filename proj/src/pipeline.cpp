#include "semcomm/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "semcomm/error.hpp"

namespace semcomm {

namespace {

double compression_factor(const ImageBuf& original, std::size_t symbols) {
  return symbols == 0 ? 0.0
                      : static_cast<double>(original.sample_count()) / static_cast<double>(symbols);
}

// Sends `source` through the channel and fills the frame's payload fields.
void send(const ImageBuf& source, const ChannelConfig& cfg, WireFrame& frame) {
  const SymbolPayload received = awgn(encode(source, cfg), cfg.snr_db, cfg.seed);
  frame.gain = received.gain;
  frame.snr_db = static_cast<float>(cfg.snr_db);
  frame.symbols = received.symbols;
}

}  // namespace

std::optional<MaskBuf> shielding_mask(const ImageBuf& img, const PipelineKnobs& knobs) {
  if (knobs.landmarks) {
    return hull_to_mask(convex_hull(*knobs.landmarks), img.width(), img.height());
  }
  if (knobs.person_mask) {
    if (knobs.person_mask->width() != img.width() || knobs.person_mask->height() != img.height()) {
      throw ShapeError("person mask does not match image dimensions");
    }
    return knobs.person_mask;
  }
  return std::nullopt;
}

std::vector<Descriptor256> query_descriptors(const ImageBuf& img, const PipelineKnobs& knobs) {
  const auto mask = shielding_mask(img, knobs);
  const ImageBuf view = mask ? apply_mask(img, *mask, MaskBuf::kBackground) : img;
  return extract_features(view, knobs.features).descriptors;
}

TransmitReport transmit_direct(const ImageBuf& img, const ChannelConfig& cfg, const PipelineKnobs& knobs) {
  const ResizeResult gated = resize_proportional(img, knobs.max_pixels);
  TransmitReport report;
  report.mode = TransmitMode::kDirect;
  report.frame.mode = TransmitMode::kDirect;
  report.frame.rect = {0, 0, img.width(), img.height()};
  report.frame.original_width = static_cast<std::uint32_t>(img.width());
  report.frame.original_height = static_cast<std::uint32_t>(img.height());
  report.frame.scale = static_cast<float>(gated.scale);
  send(gated.image, cfg, report.frame);

  report.reconstructed = receive_frame(report.frame, BackgroundLibrary{}, cfg);
  report.psnr_vs_original = psnr(img, report.reconstructed);
  report.symbols_sent = report.frame.symbols.size();
  report.compression_factor = compression_factor(img, report.symbols_sent);
  report.fallback_reason = "forced";
  return report;
}

TransmitReport transmit_image(const ImageBuf& img, const BackgroundLibrary& lib, const ChannelConfig& cfg,
                              const PipelineKnobs& knobs) {
  const auto query = query_descriptors(img, knobs);
  const MatchOutcome match = best_match(query, lib, knobs.hamming_threshold, knobs.n_min);
  auto fallback = [&](const char* reason) {
    TransmitReport r = transmit_direct(img, cfg, knobs);
    r.match = match;
    r.fallback_reason = reason;
    return r;
  };
  if (!match.matched) return fallback("no-match");

  const BackgroundEntry& entry = *lib.find(*match.background_id);
  SegmenterConfig seg_cfg;
  seg_cfg.kind = knobs.segmenter;
  seg_cfg.tau = knobs.tau;
  if (knobs.segmenter == SegmenterKind::kProvidedMask) {
    seg_cfg.mask = knobs.person_mask;
  } else {
    seg_cfg.background = entry.image.width() == img.width() && entry.image.height() == img.height()
                             ? entry.image
                             : resize_bilinear(entry.image, img.width(), img.height());
  }
  SegmentationResult seg;
  try {
    seg = make_segmenter(seg_cfg)->segment(img);
  } catch (const NoForegroundError&) {
    return fallback("no-foreground");
  }

  const BoundingRect rect = pad_rect(seg.bbox, knobs.crop_padding, img.width(), img.height());
  const ResizeResult gated = resize_proportional(extract(img, rect), knobs.max_pixels);

  TransmitReport report;
  report.mode = TransmitMode::kKeyInfo;
  report.match = match;
  report.background_id = entry.id;
  report.record = CropRecord{rect, img.width(), img.height(), gated.scale, entry.id};
  report.frame.mode = TransmitMode::kKeyInfo;
  report.frame.background_id = entry.id;
  report.frame.rect = rect;
  report.frame.original_width = static_cast<std::uint32_t>(img.width());
  report.frame.original_height = static_cast<std::uint32_t>(img.height());
  report.frame.scale = static_cast<float>(gated.scale);
  send(gated.image, cfg, report.frame);

  std::optional<MaskBuf> crop_mask;
  if (knobs.transmit_mask) {
    MaskBuf m(rect.width(), rect.height());
    for (int y = 0; y < rect.height(); ++y)
      for (int x = 0; x < rect.width(); ++x) m.set(x, y, seg.mask.at(rect.x1 + x, rect.y1 + y));
    crop_mask = std::move(m);
  }
  report.reconstructed = receive_frame(report.frame, lib, cfg, crop_mask ? &*crop_mask : nullptr);
  report.psnr_vs_original = psnr(img, report.reconstructed);
  report.symbols_sent = report.frame.symbols.size();
  report.compression_factor = compression_factor(img, report.symbols_sent);
  return report;
}

ImageBuf receive_frame(const WireFrame& frame, const BackgroundLibrary& lib, const ChannelConfig& cfg,
                       const MaskBuf* crop_mask) {
  check_frame_budget(frame, cfg.mu);
  SymbolPayload payload;
  payload.symbols = frame.symbols;
  payload.width = frame.source_width();
  payload.height = frame.source_height();
  payload.gain = frame.gain;
  ChannelConfig rx = cfg;
  rx.snr_db = frame.snr_db;
  const ImageBuf decoded = decode(payload, rx);

  const int ow = static_cast<int>(frame.original_width);
  const int oh = static_cast<int>(frame.original_height);
  if (frame.mode == TransmitMode::kDirect) {
    return resize_bilinear(decoded, ow, oh);
  }
  const BackgroundEntry* entry = lib.find(frame.background_id);
  if (entry == nullptr) {
    throw FormatError("frame references background " + std::to_string(frame.background_id) +
                      " which is not in the library");
  }
  const CropRecord record{frame.rect, ow, oh, static_cast<double>(frame.scale), frame.background_id};
  return restore(decoded, record, entry->image, crop_mask);
}

std::uint64_t frame_seed(std::uint64_t seed, std::size_t frame_index) {
  return splitmix64_at(seed, frame_index);
}

int warmup_length(int segment_length, const VideoKnobs& knobs) {
  const int wanted = static_cast<int>(std::ceil(knobs.warmup_fraction * segment_length - 1e-9));
  return std::clamp(std::min(wanted, knobs.warmup_cap), 1, segment_length);
}

VideoResult transmit_video(const FrameSequence& seq, const ChannelConfig& cfg, const PipelineKnobs& knobs,
                           const VideoKnobs& video) {
  if (seq.frames.empty()) throw InputError("frame sequence is empty");
  if (seq.masks.size() != seq.frames.size()) throw InputError("frame and mask counts differ");
  VideoResult result;
  result.segments = split_scenes(seq.frames, seq.masks, video.split);
  result.reports.resize(seq.frames.size());

  for (std::size_t s = 0; s < result.segments.size(); ++s) {
    const SceneSegment& seg = result.segments[s];
    const int warm = warmup_length(seg.end - seg.start, video);

    FrameSequence received;
    for (int i = seg.start; i < seg.start + warm; ++i) {
      ChannelConfig fc = cfg;
      fc.seed = frame_seed(cfg.seed, static_cast<std::size_t>(i));
      TransmitReport r = transmit_direct(seq.frames[i], fc, knobs);
      r.fallback_reason = "warm-up";
      received.frames.push_back(r.reconstructed);
      received.masks.push_back(seq.masks[i]);
      result.reports[i] = std::move(r);
    }
    const StitchedBackground bg = stitch(received, video.aggregator);
    result.never_visible.push_back(bg.valid.count(0));

    BackgroundLibrary lib;
    lib.add(build_entry(static_cast<std::uint32_t>(s), bg.image, &bg.valid, knobs.features));
    for (int i = seg.start + warm; i < seg.end; ++i) {
      ChannelConfig fc = cfg;
      fc.seed = frame_seed(cfg.seed, static_cast<std::size_t>(i));
      PipelineKnobs fk = knobs;
      fk.person_mask = seq.masks[i];
      fk.segmenter = SegmenterKind::kProvidedMask;
      result.reports[i] = transmit_image(seq.frames[i], lib, fc, fk);
    }
    result.libraries.push_back(std::move(lib));
  }
  return result;
}

std::vector<EvalRow> eval_sweep(const std::vector<EvalScene>& scenes, const BackgroundLibrary& lib,
                                const std::vector<double>& snrs, const std::vector<std::uint64_t>& seeds,
                                const ChannelConfig& base, const PipelineKnobs& knobs, int jobs) {
  if (scenes.empty() || snrs.empty() || seeds.empty()) {
    throw InputError("eval needs at least one scene, SNR, and seed");
  }
  const std::size_t total = scenes.size() * snrs.size() * seeds.size();
  std::vector<EvalRow> data(total * 2);

  auto run_point = [&](std::size_t idx) {
    const std::size_t k = idx % seeds.size();
    const std::size_t j = (idx / seeds.size()) % snrs.size();
    const std::size_t i = idx / (seeds.size() * snrs.size());
    const EvalScene& scene = scenes[i];
    ChannelConfig cfg = base;
    cfg.snr_db = snrs[j];
    cfg.seed = seeds[k];
    PipelineKnobs sk = knobs;
    if (scene.person_mask) sk.person_mask = scene.person_mask;
    if (scene.landmarks) sk.landmarks = scene.landmarks;
    if (!sk.person_mask && sk.segmenter == SegmenterKind::kProvidedMask) {
      sk.segmenter = SegmenterKind::kBackgroundDiff;
    }
    const TransmitReport proposed = transmit_image(scene.image, lib, cfg, sk);
    const TransmitReport direct = transmit_direct(scene.image, cfg, sk);
    const std::string seed = std::to_string(seeds[k]);
    data[2 * idx] = {scene.name, snrs[j], seed, "proposed", proposed.psnr_vs_original,
                     static_cast<double>(proposed.symbols_sent), proposed.compression_factor};
    data[2 * idx + 1] = {scene.name, snrs[j], seed, "direct", direct.psnr_vs_original,
                         static_cast<double>(direct.symbols_sent), direct.compression_factor};
  };

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  if (workers == 1) {
    for (std::size_t idx = 0; idx < total; ++idx) run_point(idx);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t idx = next++; idx < total; idx = next++) {
          try {
            run_point(idx);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<EvalRow> rows = data;
  for (std::size_t i = 0; i < scenes.size(); ++i) {
    for (std::size_t j = 0; j < snrs.size(); ++j) {
      for (int m = 0; m < 2; ++m) {
        EvalRow avg{scenes[i].name, snrs[j], "mean", m == 0 ? "proposed" : "direct",
                    PsnrValue::decibels(0.0), 0.0, 0.0};
        double psnr_sum = 0.0;
        bool any_inf = false;
        for (std::size_t k = 0; k < seeds.size(); ++k) {
          const EvalRow& r = data[2 * ((i * snrs.size() + j) * seeds.size() + k) + m];
          any_inf = any_inf || r.psnr.is_infinite();
          psnr_sum += r.psnr.is_infinite() ? 0.0 : r.psnr.db();
          avg.symbols += r.symbols;
          avg.compression_factor += r.compression_factor;
        }
        const double n = static_cast<double>(seeds.size());
        avg.psnr = any_inf ? PsnrValue::infinite() : PsnrValue::decibels(psnr_sum / n);
        avg.symbols /= n;
        avg.compression_factor /= n;
        rows.push_back(avg);
      }
    }
  }
  return rows;
}

std::string eval_csv(const std::vector<EvalRow>& rows) {
  std::string out = kEvalCsvHeader;
  out += '\n';
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%g,%s,%s,%s,%.6g,%.6f\n", r.scene.c_str(), r.snr_db, r.seed.c_str(),
                  r.method.c_str(), r.psnr.to_string(4).c_str(), r.symbols, r.compression_factor);
    out += buf;
  }
  return out;
}

}  // namespace semcomm
