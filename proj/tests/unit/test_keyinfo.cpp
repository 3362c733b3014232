#include <gtest/gtest.h>

#include "semcomm/channel.hpp"
#include "semcomm/error.hpp"
#include "semcomm/keyinfo.hpp"
#include "semcomm/synth.hpp"
#include "test_util.hpp"

namespace semcomm {
namespace {

using testing::filled;
using testing::random_image;

TEST(Extract, FullFrameIsIdentity) {
  const ImageBuf img = random_image(21, 13, 1);
  EXPECT_EQ(extract(img, {0, 0, 21, 13}), img);
}

TEST(Extract, SinglePixel) {
  const ImageBuf img = random_image(5, 5, 2);
  const ImageBuf px = extract(img, {0, 0, 1, 1});
  ASSERT_EQ(px.width(), 1);
  ASSERT_EQ(px.height(), 1);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(px.at(0, 0, c), img.at(0, 0, c));
}

TEST(Extract, OutOfBoundsThrows) {
  EXPECT_THROW(extract(ImageBuf(5, 5), {2, 2, 6, 4}), ShapeError);
  EXPECT_THROW(extract(ImageBuf(5, 5), {2, 2, 2, 4}), ShapeError);
}

TEST(Extract, CompositeBackIsExactInverse) {
  const ImageBuf img = random_image(30, 20, 3);
  for (BoundingRect r : {BoundingRect{0, 0, 30, 20}, BoundingRect{4, 3, 17, 19}, BoundingRect{29, 19, 30, 20}}) {
    EXPECT_EQ(composite(img, extract(img, r), r), img);
  }
}

TEST(PadRect, GrowsAndClamps) {
  EXPECT_EQ(pad_rect({5, 5, 10, 10}, 2, 40, 40), (BoundingRect{3, 3, 12, 12}));
  EXPECT_EQ(pad_rect({1, 0, 39, 40}, 2, 40, 40), (BoundingRect{0, 0, 40, 40}));
  EXPECT_EQ(pad_rect({5, 5, 10, 10}, 0, 40, 40), (BoundingRect{5, 5, 10, 10}));
}

TEST(Restore, ScaleOneReplacesOnlyTheRect) {
  const ImageBuf bg = random_image(40, 30, 4);
  const ImageBuf crop = random_image(10, 6, 5);
  const CropRecord rec{{12, 8, 22, 14}, 40, 30, 1.0, 1};
  const ImageBuf out = restore(crop, rec, bg);
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 40; ++x)
      for (int c = 0; c < 3; ++c) {
        const auto want = rec.rect.contains(x, y) ? crop.at(x - 12, y - 8, c) : bg.at(x, y, c);
        ASSERT_EQ(out.at(x, y, c), want) << x << "," << y;
      }
}

TEST(Restore, HalfScaleConstantCropIsExact) {
  const ImageBuf bg = random_image(64, 48, 6);
  const CropRecord rec{{10, 10, 30, 34}, 64, 48, 0.5, 1};
  int w = 0, h = 0;
  scaled_dims(20, 24, 0.5, w, h);
  const ImageBuf out = restore(filled(w, h, 17, 130, 250), rec, bg);
  for (int y = 0; y < 48; ++y)
    for (int x = 0; x < 64; ++x) {
      if (rec.rect.contains(x, y)) {
        ASSERT_EQ(out.at(x, y, 0), 17);
        ASSERT_EQ(out.at(x, y, 1), 130);
        ASSERT_EQ(out.at(x, y, 2), 250);
      } else {
        for (int c = 0; c < 3; ++c) ASSERT_EQ(out.at(x, y, c), bg.at(x, y, c));
      }
    }
}

TEST(Restore, MaskGatesComposition) {
  const ImageBuf bg = random_image(20, 20, 7);
  const ImageBuf crop = random_image(4, 4, 8);
  MaskBuf m(4, 4);
  m.set(1, 2, MaskBuf::kForeground);
  const ImageBuf out = restore(crop, {{5, 5, 9, 9}, 20, 20, 1.0, 1}, bg, &m);
  ImageBuf expected = bg;
  for (int c = 0; c < 3; ++c) expected.at(6, 7, c) = crop.at(1, 2, c);
  EXPECT_EQ(out, expected);
}

TEST(Restore, BackgroundOfOtherSizeIsResized) {
  const ImageBuf bg = filled(32, 24, 9, 9, 9);
  const ImageBuf out = restore(filled(4, 4, 200, 200, 200), {{0, 0, 4, 4}, 64, 48, 1.0, 1}, bg);
  EXPECT_EQ(out.width(), 64);
  EXPECT_EQ(out.height(), 48);
  EXPECT_EQ(out.at(10, 10, 0), 9);
  EXPECT_EQ(out.at(1, 1, 0), 200);
}

TEST(Restore, RejectsInconsistentRecords) {
  const ImageBuf bg(20, 20);
  EXPECT_THROW(restore(ImageBuf(4, 4), {{5, 5, 9, 9}, 20, 20, 0.0, 1}, bg), ShapeError);
  EXPECT_THROW(restore(ImageBuf(4, 4), {{5, 5, 9, 9}, 20, 20, 1.5, 1}, bg), ShapeError);
  EXPECT_THROW(restore(ImageBuf(3, 4), {{5, 5, 9, 9}, 20, 20, 1.0, 1}, bg), ShapeError);
  EXPECT_THROW(restore(ImageBuf(4, 4), {{15, 15, 25, 25}, 20, 20, 1.0, 1}, bg), ShapeError);
  EXPECT_THROW(restore(ImageBuf(4, 4), {{5, 5, 15, 15}, 20, 20, 0.5, 1}, bg), ShapeError);
}

TEST(Restore, NoisyCropBeatsNoisyFrameAtEqualBudget) {
  const ImageBuf bg = synth::textured_background(160, 120, 9);
  const auto scene = synth::scene_with_fraction(bg, 0, 0.1, 10, "s");
  const BoundingRect rect = pad_rect(scene.sprite_rect, kCropPadding, 160, 120);
  const ImageBuf crop = extract(scene.image, rect);

  ChannelConfig cfg;
  cfg.snr_db = 5.0;
  cfg.seed = 3;
  const TransmitResult sent_crop = transmit(crop, cfg);
  const ImageBuf restored = restore(sent_crop.image, {rect, 160, 120, 1.0, 1}, bg);

  // Whole frame squeezed into the same number of symbols.
  ChannelConfig frame_cfg = cfg;
  frame_cfg.mu = static_cast<double>(sent_crop.symbols_sent) / (160.0 * 120.0 * 3.0);
  const TransmitResult sent_frame = transmit(scene.image, frame_cfg);
  ASSERT_LE(sent_frame.symbols_sent, sent_crop.symbols_sent + 1);
  EXPECT_GT(psnr(scene.image, restored).db(), psnr(scene.image, sent_frame.image).db());
}

}  // namespace
}  // namespace semcomm
