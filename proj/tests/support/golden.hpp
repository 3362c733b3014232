#pragma once

#include "semcomm/bglib.hpp"
#include "semcomm/synth.hpp"
#include "semcomm/wire.hpp"

// Sources of the committed binary fixtures. The fixture writer and the tests
// both build from here, so a fixture that no longer decodes to these values
// means the on-disk format changed.
namespace semcomm::testing {

inline constexpr const char* kGoldenFrameFile = "frame_v1.sjsc";
inline constexpr const char* kGoldenLibraryFile = "library_v1.bgl";

inline WireFrame golden_frame() {
  WireFrame f;
  f.mode = TransmitMode::kKeyInfo;
  f.background_id = 2;
  f.rect = {5, 6, 9, 10};
  f.original_width = 40;
  f.original_height = 30;
  f.scale = 1.0f;
  f.gain = 37.25f;
  f.snr_db = 10.0f;
  for (int i = 0; i < 16; ++i) f.symbols.push_back((static_cast<float>(i) - 7.5f) * 0.125f);
  return f;
}

inline BackgroundLibrary golden_library() {
  BackgroundLibrary lib;
  lib.add(build_entry(3, synth::textured_background(48, 40, 11)));
  lib.add(build_entry(9, synth::textured_background(48, 40, 12)));
  return lib;
}

}  // namespace semcomm::testing
