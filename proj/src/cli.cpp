#include "semcomm/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "semcomm/error.hpp"
#include "semcomm/pipeline.hpp"
#include "semcomm/png_io.hpp"
#include "semcomm/scheduler.hpp"
#include "semcomm/synth.hpp"

namespace semcomm::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// Flags shared by the commands that run background matching.
struct MatchFlags {
  int t = kDefaultHammingThreshold;
  int n_min = kDefaultMinMatches;
  int fast_threshold = FeatureParams{}.fast_threshold;
  int max_keypoints = FeatureParams{}.max_keypoints;
  std::string mask_path;
  std::string landmarks_path;

  void add_to(CLI::App* app, bool with_person = true) {
    app->add_option("--t", t, "Hamming threshold for a descriptor match")->capture_default_str()->check(
        CLI::Range(0, 256));
    app->add_option("--n-min", n_min, "Minimum matched pairs to accept a background")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app->add_option("--fast-threshold", fast_threshold, "FAST segment-test threshold")->capture_default_str();
    app->add_option("--max-keypoints", max_keypoints, "Keypoints kept per image")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    if (with_person) {
      app->add_option("--mask", mask_path, "Person mask PNG (0 = person)")->check(CLI::ExistingFile);
      app->add_option("--landmarks", landmarks_path, "Person landmarks JSON")->check(CLI::ExistingFile);
    }
  }

  FeatureParams features() const { return {fast_threshold, max_keypoints}; }

  void apply(PipelineKnobs& knobs) const {
    knobs.hamming_threshold = t;
    knobs.n_min = n_min;
    knobs.features = features();
    if (!mask_path.empty()) knobs.person_mask = read_mask_png(mask_path);
    if (!landmarks_path.empty()) knobs.landmarks = read_landmarks_json(landmarks_path);
  }
};

struct ChannelFlags {
  double snr_db = ChannelConfig{}.snr_db;
  double mu = ChannelConfig{}.mu;
  int block = ChannelConfig{}.block;
  std::uint64_t seed = 0;

  void add_to(CLI::App* app, bool need_seed) {
    app->add_option("--snr", snr_db, "Channel SNR in dB")->capture_default_str();
    app->add_option("--mu", mu, "Channel symbols per source sample")
        ->capture_default_str()
        ->check(CLI::Range(1e-9, 1.0));
    app->add_option("--block", block, "DCT block size")->capture_default_str()->check(CLI::Range(1, 64));
    if (need_seed) app->add_option("--seed", seed, "Noise seed")->required();
  }

  ChannelConfig config() const { return {snr_db, mu, block, seed}; }
};

std::vector<fs::path> png_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw InputError("no PNG files in " + dir.string());
  return files;
}

FrameSequence read_video(const fs::path& frames_dir, const fs::path& masks_dir) {
  FrameSequence seq;
  for (const auto& f : png_files(frames_dir)) {
    seq.frames.push_back(read_png(f));
    const fs::path m = masks_dir / f.filename();
    if (!fs::exists(m)) throw InputError("missing mask for frame " + f.filename().string());
    seq.masks.push_back(read_mask_png(m));
  }
  return seq;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InputError("cannot write " + path.string());
  os << text;
  if (!os) throw InputError("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

ordered_json match_json(const MatchOutcome& m) {
  ordered_json j;
  j["matched"] = m.matched;
  j["background_id"] = m.background_id ? ordered_json(*m.background_id) : ordered_json(nullptr);
  j["match_count"] = m.match_count;
  j["per_entry_counts"] = m.per_entry_counts;
  return j;
}

ordered_json report_json(const TransmitReport& r) {
  ordered_json j;
  j["mode"] = r.mode == TransmitMode::kKeyInfo ? "keyinfo" : "direct";
  j["background_id"] = r.background_id ? ordered_json(*r.background_id) : ordered_json(nullptr);
  j["psnr_db"] = r.psnr_vs_original.to_string();
  j["symbols"] = r.symbols_sent;
  j["compression_factor"] = r.compression_factor;
  if (r.record) {
    const auto& rect = r.record->rect;
    j["rect"] = {rect.x1, rect.y1, rect.x2, rect.y2};
    j["scale"] = r.record->scale;
  }
  j["fallback_reason"] = r.fallback_reason;
  j["match"] = match_json(r.match);
  return j;
}

Aggregator parse_aggregator(const std::string& s) { return s == "first" ? Aggregator::kFirst : Aggregator::kMean; }

std::vector<EvalScene> synthetic_scenes(int count, std::uint64_t seed, BackgroundLibrary& lib) {
  const auto backgrounds = synth::background_set(count, seed);
  std::vector<EvalScene> scenes;
  for (int i = 0; i < count; ++i) {
    lib.add(build_entry(static_cast<std::uint32_t>(i + 1), backgrounds[i]));
    auto sc = synth::scene_with_fraction(backgrounds[i], i, 0.12, splitmix64_at(seed, 1000 + i),
                                         "synthetic" + std::to_string(i + 1));
    scenes.push_back({sc.name, std::move(sc.image), std::move(sc.person_mask), std::move(sc.landmarks)});
  }
  return scenes;
}

std::vector<EvalScene> scenes_from_dir(const fs::path& dir) {
  std::vector<EvalScene> scenes;
  for (const auto& f : png_files(dir)) {
    const std::string stem = f.stem().string();
    if (stem.size() > 5 && stem.ends_with(".mask")) continue;
    EvalScene s{stem, read_png(f), std::nullopt, std::nullopt};
    const fs::path mask = dir / (stem + ".mask.png");
    if (fs::exists(mask)) s.person_mask = read_mask_png(mask);
    const fs::path landmarks = dir / (stem + ".landmarks.json");
    if (fs::exists(landmarks)) s.landmarks = read_landmarks_json(landmarks);
    scenes.push_back(std::move(s));
  }
  return scenes;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ParameterError("bad number in list: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParameterError("empty list");
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& csv) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw ParameterError("bad seed in list: '" + item + "'");
    out.push_back(std::stoull(item));
  }
  if (out.empty()) throw ParameterError("empty seed list");
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic image transmission toolkit", "semcomm"};
  app.require_subcommand(1);
  app.allow_extras(false);

  // bglib build / build-dynamic
  auto* bglib = app.add_subcommand("bglib", "Background library tools");
  bglib->require_subcommand(1);

  auto* build = bglib->add_subcommand("build", "Build a library from background images");
  std::vector<std::string> build_images;
  std::string build_out;
  std::uint32_t first_id = 1;
  MatchFlags build_match;
  build->add_option("images", build_images, "Background PNGs; ids are assigned in order")
      ->required()
      ->check(CLI::ExistingFile);
  build->add_option("--out", build_out, "Output .bgl path")->required();
  build->add_option("--first-id", first_id, "Id of the first entry")->capture_default_str();
  build->add_option("--fast-threshold", build_match.fast_threshold, "FAST segment-test threshold")
      ->capture_default_str();
  build->add_option("--max-keypoints", build_match.max_keypoints, "Keypoints kept per image")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  auto* dynamic = bglib->add_subcommand("build-dynamic", "Stitch video backgrounds into a library");
  std::string dyn_frames, dyn_masks, dyn_out, dyn_stitched, dyn_aggregator = "mean";
  SceneSplitParams dyn_split;
  dynamic->add_option("--frames", dyn_frames, "Directory of numbered PNG frames")->required();
  dynamic->add_option("--masks", dyn_masks, "Directory of masks named like the frames")->required();
  dynamic->add_option("--out", dyn_out, "Output .bgl path")->required();
  dynamic->add_option("--stitched-dir", dyn_stitched, "Also write stitched backgrounds and valid masks here");
  dynamic->add_option("--aggregator", dyn_aggregator, "Pixel aggregator")
      ->capture_default_str()
      ->check(CLI::IsMember({"mean", "first"}));
  dynamic->add_option("--sim-threshold", dyn_split.sim_threshold, "Matches needed to stay in a scene")
      ->capture_default_str();
  dynamic->add_option("--t", dyn_split.hamming_threshold, "Hamming threshold for scene similarity")
      ->capture_default_str()
      ->check(CLI::Range(0, 256));
  dynamic->add_flag("--raw-similarity", dyn_split.raw_similarity, "Compare unmasked frames when splitting");

  // match
  auto* match = app.add_subcommand("match", "Find the best library background for an image");
  std::string match_lib, match_image, match_out;
  bool require = false;
  MatchFlags match_flags;
  match->add_option("--lib", match_lib, "Background library")->required()->check(CLI::ExistingFile);
  match->add_option("--image", match_image, "Query PNG")->required()->check(CLI::ExistingFile);
  match->add_option("--out", match_out, "Write the result JSON here instead of standard output");
  match->add_flag("--require", require, "Exit with status 1 when no background matches");
  match_flags.add_to(match);

  // transmit
  auto* transmit = app.add_subcommand("transmit", "Send one image over the simulated channel");
  std::string tx_lib, tx_image, tx_out, tx_frame, tx_report, tx_segmenter = "diff";
  bool force_direct = false;
  long long max_pixels = kDefaultMaxPixels;
  int tau = BackgroundDiffSegmenter::kDefaultTau;
  MatchFlags tx_match;
  ChannelFlags tx_channel;
  transmit->add_option("--lib", tx_lib, "Background library")->check(CLI::ExistingFile);
  transmit->add_option("--image", tx_image, "Input PNG")->required()->check(CLI::ExistingFile);
  transmit->add_option("--out", tx_out, "Reconstructed PNG")->required();
  transmit->add_option("--frame", tx_frame, "Also write the received wire frame");
  transmit->add_option("--report", tx_report, "Also write a JSON report");
  transmit->add_option("--segmenter", tx_segmenter, "Key-information segmenter")
      ->capture_default_str()
      ->check(CLI::IsMember({"diff", "mask"}));
  transmit->add_option("--tau", tau, "Background-difference threshold")->capture_default_str();
  transmit->add_option("--max-pixels", max_pixels, "Pixel budget before downscaling")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  transmit->add_flag("--direct", force_direct, "Skip matching and send the whole image");
  tx_match.add_to(transmit);
  tx_channel.add_to(transmit, true);

  // receive
  auto* receive = app.add_subcommand("receive", "Reconstruct an image from a stored wire frame");
  std::string rx_lib, rx_frame, rx_out;
  ChannelFlags rx_channel;
  receive->add_option("--frame", rx_frame, "Wire frame file")->required()->check(CLI::ExistingFile);
  receive->add_option("--lib", rx_lib, "Background library")->check(CLI::ExistingFile);
  receive->add_option("--out", rx_out, "Reconstructed PNG")->required();
  receive->add_option("--mu", rx_channel.mu, "Channel symbols per source sample")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0));
  receive->add_option("--block", rx_channel.block, "DCT block size")->capture_default_str()->check(
      CLI::Range(1, 64));

  // transmit-video
  auto* video = app.add_subcommand("transmit-video", "Send a video using dynamic background libraries");
  std::string v_frames, v_masks, v_out, v_report, v_aggregator = "mean";
  VideoKnobs v_knobs;
  ChannelFlags v_channel;
  MatchFlags v_match;
  video->add_option("--frames", v_frames, "Directory of numbered PNG frames")->required();
  video->add_option("--masks", v_masks, "Directory of masks named like the frames")->required();
  video->add_option("--out", v_out, "Directory for reconstructed frames")->required();
  video->add_option("--report", v_report, "Per-frame CSV report");
  video->add_option("--warmup", v_knobs.warmup_fraction, "Fraction of each scene sent directly first")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  video->add_option("--warmup-cap", v_knobs.warmup_cap, "Upper bound on warm-up frames per scene")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  video->add_option("--aggregator", v_aggregator, "Pixel aggregator")
      ->capture_default_str()
      ->check(CLI::IsMember({"mean", "first"}));
  video->add_option("--sim-threshold", v_knobs.split.sim_threshold, "Matches needed to stay in a scene")
      ->capture_default_str();
  video->add_option("--split-t", v_knobs.split.hamming_threshold, "Hamming threshold for scene similarity")
      ->capture_default_str()
      ->check(CLI::Range(0, 256));
  video->add_flag("--raw-similarity", v_knobs.split.raw_similarity, "Compare unmasked frames when splitting");
  v_match.add_to(video, false);
  v_channel.add_to(video, true);

  // schedule
  auto* schedule = app.add_subcommand("schedule", "Plan per-user transmission modes and powers");
  std::string job_path, plan_out;
  std::optional<double> alpha_override, quantum_override;
  schedule->add_option("--job", job_path, "Job JSON")->required()->check(CLI::ExistingFile);
  schedule->add_option("--out", plan_out, "Output plan JSON")->required();
  schedule->add_option("--alpha", alpha_override, "Override the job's key-information quality weight");
  schedule->add_option("--p-quantum", quantum_override,
                       "Override the power grid step (default p_max / 10000)");

  // eval
  auto* eval = app.add_subcommand("eval", "PSNR sweep of the proposed pipeline against direct transmission");
  std::string ev_lib, ev_scenes, ev_out, ev_snrs = "1,4,7,10,13,16,19", ev_seeds;
  int synthetic = 0, jobs = 1;
  std::uint64_t synthetic_seed = 7;
  ChannelFlags ev_channel;
  MatchFlags ev_match;
  eval->add_option("--lib", ev_lib, "Background library")->check(CLI::ExistingFile);
  eval->add_option("--scenes", ev_scenes,
                   "Directory of scene PNGs with optional NAME.mask.png and NAME.landmarks.json");
  eval->add_option("--synthetic", synthetic, "Generate this many synthetic scenes and their library instead")
      ->check(CLI::PositiveNumber);
  eval->add_option("--synthetic-seed", synthetic_seed, "Seed for the synthetic corpus")->capture_default_str();
  eval->add_option("--snrs", ev_snrs, "Comma-separated SNR values in dB")->capture_default_str();
  eval->add_option("--seeds", ev_seeds, "Comma-separated noise seeds")->required();
  eval->add_option("--out", ev_out, "Output CSV")->required();
  eval->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  eval->add_option("--mu", ev_channel.mu, "Channel symbols per source sample")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0));
  eval->add_option("--block", ev_channel.block, "DCT block size")->capture_default_str()->check(
      CLI::Range(1, 64));
  ev_match.add_to(eval, false);

  std::vector<std::string> argv_storage{"semcomm"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (build->parsed()) {
      BackgroundLibrary lib;
      std::uint32_t id = first_id;
      for (const auto& path : build_images) lib.add(build_entry(id++, read_png(path), nullptr, build_match.features()));
      save_library(lib, build_out);
      err << "wrote " << lib.entries.size() << " entries to " << build_out << "\n";
    } else if (dynamic->parsed()) {
      const FrameSequence seq = read_video(dyn_frames, dyn_masks);
      const auto segments = split_scenes(seq.frames, seq.masks, dyn_split);
      BackgroundLibrary lib;
      for (std::size_t s = 0; s < segments.size(); ++s) {
        FrameSequence part;
        for (int f = segments[s].start; f < segments[s].end; ++f) {
          part.frames.push_back(seq.frames[f]);
          part.masks.push_back(seq.masks[f]);
        }
        const StitchedBackground bg = stitch(part, parse_aggregator(dyn_aggregator));
        const auto id = static_cast<std::uint32_t>(s + 1);
        lib.add(build_entry(id, bg.image, &bg.valid));
        if (!dyn_stitched.empty()) {
          fs::create_directories(dyn_stitched);
          write_png(fs::path(dyn_stitched) / ("scene" + std::to_string(id) + ".png"), bg.image);
          write_mask_png(fs::path(dyn_stitched) / ("scene" + std::to_string(id) + ".valid.png"), bg.valid);
        }
        err << "scene " << id << ": frames [" << segments[s].start << ", " << segments[s].end << "), "
            << bg.valid.count(1) << " valid pixels\n";
      }
      save_library(lib, dyn_out);
    } else if (match->parsed()) {
      const BackgroundLibrary lib = load_library(match_lib);
      PipelineKnobs knobs;
      match_flags.apply(knobs);
      const ImageBuf img = read_png(match_image);
      const MatchOutcome m = best_match(query_descriptors(img, knobs), lib, knobs.hamming_threshold, knobs.n_min);
      const std::string text = match_json(m).dump(2) + "\n";
      if (match_out.empty()) {
        out << text;
      } else {
        write_text(match_out, text);
      }
      if (require && !m.matched) {
        err << "no background reached " << knobs.n_min << " matches (best " << m.match_count << ")\n";
        return kDomainError;
      }
    } else if (transmit->parsed()) {
      PipelineKnobs knobs;
      tx_match.apply(knobs);
      knobs.max_pixels = max_pixels;
      knobs.tau = tau;
      knobs.segmenter = tx_segmenter == "mask" ? SegmenterKind::kProvidedMask : SegmenterKind::kBackgroundDiff;
      const ImageBuf img = read_png(tx_image);
      const ChannelConfig cfg = tx_channel.config();
      TransmitReport report;
      if (force_direct) {
        report = transmit_direct(img, cfg, knobs);
      } else {
        if (tx_lib.empty()) throw ConfigError("transmit needs --lib unless --direct is given");
        report = transmit_image(img, load_library(tx_lib), cfg, knobs);
      }
      write_png(tx_out, report.reconstructed);
      if (!tx_frame.empty()) write_file(tx_frame, frame_encode(report.frame));
      if (!tx_report.empty()) write_text(tx_report, report_json(report).dump(2) + "\n");
      err << (report.mode == TransmitMode::kKeyInfo ? "keyinfo" : "direct") << " psnr "
          << report.psnr_vs_original.to_string() << " dB, " << report.symbols_sent << " symbols\n";
    } else if (receive->parsed()) {
      const WireFrame frame = frame_decode(read_file(rx_frame));
      BackgroundLibrary lib;
      if (!rx_lib.empty()) lib = load_library(rx_lib);
      write_png(rx_out, receive_frame(frame, lib, rx_channel.config()));
    } else if (video->parsed()) {
      v_knobs.aggregator = parse_aggregator(v_aggregator);
      PipelineKnobs knobs;
      v_match.apply(knobs);
      v_knobs.split.features = v_match.features();
      const FrameSequence seq = read_video(v_frames, v_masks);
      const auto names = png_files(v_frames);
      const VideoResult result = transmit_video(seq, v_channel.config(), knobs, v_knobs);
      fs::create_directories(v_out);
      std::ostringstream csv;
      csv << "frame,segment,mode,psnr_db,symbols,compression_factor,fallback_reason\n";
      for (std::size_t i = 0; i < result.reports.size(); ++i) {
        const auto& r = result.reports[i];
        write_png(fs::path(v_out) / names[i].filename(), r.reconstructed);
        std::size_t seg = 0;
        while (seg + 1 < result.segments.size() && static_cast<int>(i) >= result.segments[seg].end) ++seg;
        csv << names[i].filename().string() << ',' << seg + 1 << ','
            << (r.mode == TransmitMode::kKeyInfo ? "keyinfo" : "direct") << ','
            << r.psnr_vs_original.to_string() << ',' << r.symbols_sent << ',' << r.compression_factor << ','
            << r.fallback_reason << '\n';
      }
      if (!v_report.empty()) write_text(v_report, csv.str());
      err << result.segments.size() << " scene(s), " << result.reports.size() << " frames\n";
    } else if (schedule->parsed()) {
      ScheduleJob job = parse_schedule_job(read_text(job_path));
      if (alpha_override) job.params.alpha = *alpha_override;
      if (quantum_override) job.params.p_quantum = *quantum_override;
      write_text(plan_out, plan_to_json(optimize(job.users, job.params)));
    } else if (eval->parsed()) {
      BackgroundLibrary lib;
      std::vector<EvalScene> scenes;
      if (synthetic > 0) {
        if (!ev_scenes.empty() || !ev_lib.empty())
          throw ConfigError("--synthetic cannot be combined with --scenes or --lib");
        scenes = synthetic_scenes(synthetic, synthetic_seed, lib);
      } else {
        if (ev_scenes.empty() || ev_lib.empty()) throw ConfigError("eval needs --scenes and --lib, or --synthetic");
        lib = load_library(ev_lib);
        scenes = scenes_from_dir(ev_scenes);
      }
      PipelineKnobs knobs;
      ev_match.apply(knobs);
      const auto rows = eval_sweep(scenes, lib, parse_doubles(ev_snrs), parse_seeds(ev_seeds),
                                   ev_channel.config(), knobs, jobs);
      write_text(ev_out, eval_csv(rows));
      err << rows.size() << " rows written to " << ev_out << "\n";
    }
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kOk;
}

int run(const std::vector<std::string>& args) { return run(args, std::cout, std::cerr); }

}  // namespace semcomm::cli
