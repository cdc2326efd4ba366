#include <cmath>

#include <gtest/gtest.h>

#include "panolayout/hog.hpp"
#include "panolayout/random.hpp"

namespace panolayout {
namespace {

GrayImage ramp_image(int w, int h, double cx, double cy) {
  GrayImage img(w, h, 0.f);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.at(x, y) = static_cast<float>(cx * x + cy * y);
  return img;
}

TEST(Hog, DimensionsAndPerCellNormalization) {
  Rng rng(11);
  GrayImage img(32, 32, 0.f);
  for (float& v : img.data) v = static_cast<float>(rng.uniform());
  HogDescriptor d = hog_descriptor(img);
  ASSERT_EQ(d.size(), static_cast<std::size_t>(kHogDim));
  ASSERT_EQ(kHogDim, 144);
  for (int c = 0; c < kHogCells * kHogCells; ++c) {
    double ss = 0.0;
    for (int b = 0; b < kHogBins; ++b) ss += d[c * kHogBins + b] * d[c * kHogBins + b];
    EXPECT_NEAR(std::sqrt(ss), 1.0, 1e-4) << "cell " << c;
  }
}

TEST(Hog, GradientDirectionLandsInExpectedBin) {
  // Pure x-gradient: unsigned angle 0 -> bin 0 in every cell.
  HogDescriptor dx = hog_descriptor(ramp_image(32, 32, 0.1, 0.0));
  // Pure y-gradient: angle pi/2 -> bin 4.
  HogDescriptor dy = hog_descriptor(ramp_image(32, 32, 0.0, 0.1));
  // Diagonal: angle pi/4 -> bin 2 (checked on border-free cells only, since
  // the replicated border halves one gradient component there).
  HogDescriptor dd = hog_descriptor(ramp_image(32, 32, 0.1, 0.1));
  for (int c = 0; c < kHogCells * kHogCells; ++c) {
    bool interior = c % kHogCells > 0 && c % kHogCells < 3 && c / kHogCells > 0 && c / kHogCells < 3;
    for (int b = 0; b < kHogBins; ++b) {
      EXPECT_NEAR(dx[c * kHogBins + b], b == 0 ? 1.0 : 0.0, 1e-6);
      EXPECT_NEAR(dy[c * kHogBins + b], b == 4 ? 1.0 : 0.0, 1e-6);
      if (interior) EXPECT_NEAR(dd[c * kHogBins + b], b == 2 ? 1.0 : 0.0, 1e-6);
    }
  }
  // Orientation is unsigned: a reversed ramp gives the same descriptor.
  HogDescriptor dxr = hog_descriptor(ramp_image(32, 32, -0.1, 0.0));
  for (int i = 0; i < kHogDim; ++i) EXPECT_NEAR(dx[i], dxr[i], 1e-6);
}

TEST(Hog, ConstantImageGivesZeroDescriptor) {
  HogDescriptor d = hog_descriptor(GrayImage(16, 16, 0.5f));
  for (float v : d) EXPECT_EQ(v, 0.f);
}

TEST(Hog, DistanceIsEuclideanAndChecked) {
  HogDescriptor dx = hog_descriptor(ramp_image(32, 32, 0.1, 0.0));
  HogDescriptor dy = hog_descriptor(ramp_image(32, 32, 0.0, 0.1));
  EXPECT_DOUBLE_EQ(hog_distance(dx, dx), 0.0);
  EXPECT_NEAR(hog_distance(dx, dy), hog_distance(dy, dx), 1e-12);
  // 16 cells, each contributing two unit components in different bins.
  EXPECT_NEAR(hog_distance(dx, dy), std::sqrt(32.0), 1e-5);
  EXPECT_THROW(hog_distance(dx, HogDescriptor(10, 0.f)), ValidationError);
}

TEST(Hog, TinyImagesRejected) {
  EXPECT_THROW(hog_descriptor(GrayImage(1, 5, 0.f)), ValidationError);
  EXPECT_THROW(hog_descriptor(GrayImage(5, 1, 0.f)), ValidationError);
}

}  // namespace
}  // namespace panolayout
