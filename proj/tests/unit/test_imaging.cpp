#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "semcomm/error.hpp"
#include "semcomm/imaging.hpp"
#include "semcomm/png_io.hpp"
#include "test_util.hpp"

namespace semcomm {
namespace {

using testing::filled;
using testing::random_image;

double mse_oracle(const ImageBuf& a, const ImageBuf& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = static_cast<double>(a.data()[i]) - b.data()[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.data().size());
}

TEST(Psnr, IdenticalImagesAreInfinite) {
  const ImageBuf img = random_image(17, 9, 1);
  const PsnrValue p = psnr(img, img);
  EXPECT_TRUE(p.is_infinite());
  EXPECT_EQ(p.to_string(), "inf");
  EXPECT_TRUE(std::isinf(p.db()));
}

TEST(Psnr, MaximalErrorIsZeroDecibels) {
  const ImageBuf black = filled(1, 1, 0, 0, 0);
  const ImageBuf white = filled(1, 1, 255, 255, 255);
  EXPECT_NEAR(psnr(black, white).db(), 0.0, 1e-12);
}

TEST(Psnr, UniformOffsetOfFive) {
  const ImageBuf a = random_image(40, 30, 2, 0, 250);
  ImageBuf b = a;
  for (auto& v : b.data()) v = static_cast<std::uint8_t>(v + 5);
  const double expected = 10.0 * std::log10(255.0 * 255.0 / mse_oracle(a, b));
  EXPECT_NEAR(psnr(a, b).db(), expected, 1e-9);
  EXPECT_NEAR(psnr(a, b).db(), 34.1514, 1e-4);
}

TEST(Psnr, MatchesDirectMseOnRandomPairs) {
  for (std::uint32_t s = 0; s < 20; ++s) {
    const ImageBuf a = random_image(33, 21, s);
    const ImageBuf b = random_image(33, 21, s + 100);
    const double expected = 10.0 * std::log10(255.0 * 255.0 / mse_oracle(a, b));
    EXPECT_NEAR(psnr(a, b).db(), expected, 1e-9);
  }
}

TEST(Psnr, IsSymmetric) {
  for (std::uint32_t s = 0; s < 20; ++s) {
    const ImageBuf a = random_image(12, 7, s);
    const ImageBuf b = random_image(12, 7, s + 50);
    EXPECT_EQ(psnr(a, b), psnr(b, a));
  }
}

TEST(Psnr, StrictlyDecreasesWithUniformError) {
  const ImageBuf a = random_image(20, 20, 3, 0, 200);
  double previous = std::numeric_limits<double>::infinity();
  for (int e = 1; e <= 50; ++e) {
    ImageBuf b = a;
    for (auto& v : b.data()) v = static_cast<std::uint8_t>(v + e);
    const double db = psnr(a, b).db();
    EXPECT_LT(db, previous);
    previous = db;
  }
}

TEST(Psnr, ShapeMismatchThrows) {
  EXPECT_THROW(psnr(ImageBuf(4, 4), ImageBuf(4, 5)), ShapeError);
}

TEST(Resize, BelowBudgetIsUnchanged) {
  const ImageBuf img = random_image(100, 100, 4);
  const ResizeResult r = resize_proportional(img, 20000);
  EXPECT_EQ(r.scale, 1.0);
  EXPECT_EQ(r.image, img);
}

TEST(Resize, HalvesWhenBudgetIsQuarter) {
  const ResizeResult r = resize_proportional(random_image(200, 100, 5), 5000);
  EXPECT_EQ(r.image.width(), 100);
  EXPECT_EQ(r.image.height(), 50);
  EXPECT_DOUBLE_EQ(r.scale, 0.5);
}

TEST(Resize, ClampsToOnePixel) {
  const ResizeResult r = resize_proportional(random_image(3, 3, 6), 1);
  EXPECT_EQ(r.image.width(), 1);
  EXPECT_EQ(r.image.height(), 1);
  EXPECT_NEAR(r.scale, 1.0 / 3.0, 1e-6);
}

TEST(Resize, ProportionalNeverExceedsBudgetAndKeepsAspect) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> dim(2, 300);
  for (int i = 0; i < 200; ++i) {
    const int w = dim(rng), h = dim(rng);
    const long long budget = std::uniform_int_distribution<long long>(1, 1LL * w * h)(rng);
    const ResizeResult r = resize_proportional(ImageBuf(w, h), budget);
    const int ow = r.image.width(), oh = r.image.height();
    if (ow > 1 && oh > 1) {
      EXPECT_LE(1LL * ow * oh, budget) << w << "x" << h << " budget " << budget;
    }
    EXPECT_EQ(static_cast<double>(static_cast<float>(r.scale)), r.scale);
    int rw = 0, rh = 0;
    scaled_dims(w, h, r.scale, rw, rh);
    EXPECT_EQ(rw, ow);
    EXPECT_EQ(rh, oh);
    // Aspect ratio within one pixel of rounding.
    EXPECT_LE(std::abs(ow - w * r.scale), 1.0);
    EXPECT_LE(std::abs(oh - h * r.scale), 1.0);
  }
}

TEST(Resize, ExactHalvingAveragesTwoByTwoBlocks) {
  const ImageBuf img = random_image(16, 12, 8);
  const ImageBuf out = resize_bilinear(img, 8, 6);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 8; ++x)
      for (int c = 0; c < 3; ++c) {
        const double mean = (img.at(2 * x, 2 * y, c) + img.at(2 * x + 1, 2 * y, c) + img.at(2 * x, 2 * y + 1, c) +
                             img.at(2 * x + 1, 2 * y + 1, c)) /
                            4.0;
        EXPECT_NEAR(out.at(x, y, c), mean, 0.5 + 1e-9);
      }
}

TEST(Resize, ConstantImageStaysConstant) {
  const ImageBuf img = filled(7, 5, 10, 120, 240);
  for (auto [w, h] : {std::pair{3, 2}, std::pair{14, 10}, std::pair{1, 1}, std::pair{29, 3}}) {
    EXPECT_EQ(resize_bilinear(img, w, h), filled(w, h, 10, 120, 240));
  }
}

TEST(Resize, RejectsNonPositiveSize) {
  EXPECT_THROW(resize_bilinear(ImageBuf(4, 4), 0, 3), ShapeError);
  EXPECT_THROW(resize_proportional(ImageBuf(4, 4), 0), ParameterError);
}

TEST(ApplyMask, AllKeptIsIdentity) {
  const ImageBuf img = random_image(9, 6, 9);
  EXPECT_EQ(apply_mask(img, MaskBuf(9, 6, 1), 1), img);
}

TEST(ApplyMask, NothingKeptIsBlack) {
  EXPECT_EQ(apply_mask(random_image(9, 6, 10), MaskBuf(9, 6, 0), 1), ImageBuf(9, 6));
}

TEST(ApplyMask, TwoPixelDefinition) {
  ImageBuf img(2, 1);
  img.set_pixel(0, 0, 10, 20, 30);
  img.set_pixel(1, 0, 40, 50, 60);
  const ImageBuf out = apply_mask(img, MaskBuf(2, 1, std::vector<std::uint8_t>{0, 1}), 1);
  ImageBuf expected(2, 1);
  expected.set_pixel(1, 0, 40, 50, 60);
  EXPECT_EQ(out, expected);
}

TEST(ApplyMask, IsIdempotent) {
  std::mt19937 rng(11);
  for (int i = 0; i < 10; ++i) {
    const ImageBuf img = random_image(13, 8, i);
    std::vector<std::uint8_t> bits(13 * 8);
    for (auto& b : bits) b = rng() & 1u;
    const MaskBuf mask(13, 8, bits);
    for (std::uint8_t keep : {0, 1}) {
      const ImageBuf once = apply_mask(img, mask, keep);
      EXPECT_EQ(apply_mask(once, mask, keep), once);
    }
  }
}

TEST(ApplyMask, ShapeMismatchThrows) {
  EXPECT_THROW(apply_mask(ImageBuf(3, 3), MaskBuf(3, 2), 1), ShapeError);
}

TEST(Mask, RejectsValuesOtherThanZeroAndOne) {
  EXPECT_THROW(MaskBuf(2, 1, std::vector<std::uint8_t>{0, 2}), InputError);
  MaskBuf m(2, 2);
  EXPECT_THROW(m.set(0, 0, 255), InputError);
}

TEST(Composite, PatchRegionEqualsPatch) {
  const ImageBuf bg = random_image(20, 15, 12);
  const ImageBuf patch = random_image(6, 4, 13);
  const BoundingRect rect{3, 5, 9, 9};
  const ImageBuf out = composite(bg, patch, rect);
  for (int y = 0; y < 15; ++y)
    for (int x = 0; x < 20; ++x)
      for (int c = 0; c < 3; ++c) {
        const std::uint8_t want = rect.contains(x, y) ? patch.at(x - 3, y - 5, c) : bg.at(x, y, c);
        ASSERT_EQ(out.at(x, y, c), want);
      }
}

TEST(Composite, AllBackgroundPatchMaskLeavesBackground) {
  const ImageBuf bg = random_image(10, 10, 14);
  const MaskBuf none(4, 4, MaskBuf::kBackground);
  EXPECT_EQ(composite(bg, random_image(4, 4, 15), {2, 2, 6, 6}, &none), bg);
}

TEST(Composite, RedOnBlue) {
  const ImageBuf bg = filled(2, 2, 0, 0, 255);
  const ImageBuf out = composite(bg, filled(1, 1, 255, 0, 0), {0, 0, 1, 1});
  EXPECT_EQ(out.at(0, 0, 0), 255);
  EXPECT_EQ(out.at(0, 0, 2), 0);
  for (auto [x, y] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{1, 1}}) {
    EXPECT_EQ(out.at(x, y, 0), 0);
    EXPECT_EQ(out.at(x, y, 2), 255);
  }
}

TEST(Composite, OwnPatchIsIdentity) {
  const ImageBuf bg = random_image(25, 19, 16);
  const BoundingRect rect{4, 2, 21, 17};
  ImageBuf patch(rect.width(), rect.height());
  for (int y = 0; y < rect.height(); ++y)
    for (int x = 0; x < rect.width(); ++x)
      for (int c = 0; c < 3; ++c) patch.at(x, y, c) = bg.at(x + rect.x1, y + rect.y1, c);
  EXPECT_EQ(composite(bg, patch, rect), bg);
}

TEST(Composite, RejectsBadRect) {
  EXPECT_THROW(composite(ImageBuf(5, 5), ImageBuf(3, 3), {3, 3, 6, 6}), ShapeError);
  EXPECT_THROW(composite(ImageBuf(5, 5), ImageBuf(3, 3), {0, 0, 2, 2}), ShapeError);
}

TEST(Gray, IntegerLumaFormula) {
  const ImageBuf img = random_image(11, 7, 17);
  const auto gray = to_gray(img);
  ASSERT_EQ(gray.size(), 77u);
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 11; ++x) {
      const int want = (77 * img.at(x, y, 0) + 150 * img.at(x, y, 1) + 29 * img.at(x, y, 2) + 128) >> 8;
      EXPECT_EQ(gray[y * 11 + x], want);
    }
}

TEST(Rotate, FourQuarterTurnsAreIdentity) {
  const ImageBuf img = random_image(13, 6, 18);
  const ImageBuf r1 = rotate90(img);
  EXPECT_EQ(r1.width(), 6);
  EXPECT_EQ(r1.height(), 13);
  EXPECT_EQ(r1.at(6 - 1 - 2, 5, 1), img.at(5, 2, 1));
  EXPECT_EQ(rotate90(rotate90(rotate90(r1))), img);
}

TEST(PngIo, RoundTripsImagesAndMasks) {
  testing::TempDir dir("png");
  const ImageBuf img = random_image(31, 17, 19);
  write_png(dir / "a.png", img);
  EXPECT_EQ(read_png(dir / "a.png"), img);

  std::vector<std::uint8_t> bits(31 * 17);
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = (i * 7 % 5) < 2 ? 0 : 1;
  const MaskBuf mask(31, 17, bits);
  write_mask_png(dir / "m.png", mask);
  EXPECT_EQ(read_mask_png(dir / "m.png"), mask);
}

TEST(PngIo, GarbageIsFormatError) {
  const std::vector<std::uint8_t> junk{1, 2, 3, 4, 5, 6, 7, 8, 9};
  EXPECT_THROW(decode_png(junk), FormatError);
}

}  // namespace
}  // namespace semcomm
