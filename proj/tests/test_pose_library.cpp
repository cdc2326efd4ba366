#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "panolayout/pose_library.hpp"

namespace panolayout {
namespace {

TEST(PoseGrid, IndexingRoundTripAndGeometry) {
  ASSERT_EQ(PoseGrid::kLabelCount, 360);
  for (int i = 0; i < PoseGrid::kLabelCount; ++i) {
    EXPECT_EQ(PoseGrid::index_of(PoseGrid::yaw_index(i), PoseGrid::pitch_index(i)), i);
    PoseLabel p = PoseGrid::label_of(i);
    EXPECT_GE(p.yaw_deg, 0.0);
    EXPECT_LT(p.yaw_deg, 360.0);
    EXPECT_GE(p.pitch_deg, 0.0);
    EXPECT_LE(p.pitch_deg, 40.0);
    EXPECT_EQ(PoseGrid::quantize(p), i);
  }
  EXPECT_DOUBLE_EQ(PoseGrid::label_of(PoseGrid::index_of(3, 2)).yaw_deg, 27.0);
  EXPECT_DOUBLE_EQ(PoseGrid::label_of(PoseGrid::index_of(3, 2)).pitch_deg, 10.0);
}

TEST(PoseGrid, QuantizeWrapsAndClamps) {
  EXPECT_EQ(PoseGrid::yaw_index(PoseGrid::quantize({4.4, 0.0})), 0);
  EXPECT_EQ(PoseGrid::yaw_index(PoseGrid::quantize({4.6, 0.0})), 1);
  EXPECT_EQ(PoseGrid::yaw_index(PoseGrid::quantize({356.0, 0.0})), 0);  // wraps to yaw 0
  EXPECT_EQ(PoseGrid::pitch_index(PoseGrid::quantize({0.0, 60.0})), 8);
  EXPECT_EQ(PoseGrid::pitch_index(PoseGrid::quantize({0.0, -3.0})), 0);
}

TEST(PoseMath, DistancesAndFrames) {
  EXPECT_DOUBLE_EQ(pose_distance_deg({350, 10}, {10, 5}), 25.0);
  EXPECT_DOUBLE_EQ(pose_distance_deg({0, 0}, {180, 40}), 220.0);
  EXPECT_DOUBLE_EQ(truncated_pose_distance({0, 0}, {180, 40}, 20.0), 20.0);
  EXPECT_DOUBLE_EQ(truncated_pose_distance({9, 0}, {0, 0}, 20.0), 9.0);

  EXPECT_DOUBLE_EQ(relative_yaw(30.0, 200.0), 190.0);
  EXPECT_DOUBLE_EQ(world_yaw(190.0, 200.0), 30.0);
  for (double wy : {0.0, 45.0, 311.0})
    for (double b : {12.0, 180.0, 359.0})
      EXPECT_NEAR(world_yaw(relative_yaw(wy, b), b), wy, 1e-12);

  EXPECT_NEAR(look_down_angle(1.7, 0.7, 1.0), 40.0, 1e-12);  // 45 deg clamped
  EXPECT_NEAR(look_down_angle(1.7, 0.7, 10.0), rad_to_deg(std::atan2(1.0, 10.0)), 1e-12);
  EXPECT_DOUBLE_EQ(look_down_angle(1.7, 2.5, 1.0), 0.0);  // above the camera
}

TEST(ModelView, RendersDeterministicShadedObjectOnBlack) {
  const ModelSpec& chair = ModelLibrary::standard().get("chair_a");
  GrayImage a = render_model_view(chair, {0.0, 10.0}, 64);
  GrayImage b = render_model_view(chair, {0.0, 10.0}, 64);
  EXPECT_TRUE(a == b);
  int lit = 0;
  for (float v : a.data) {
    EXPECT_GE(v, 0.f);
    EXPECT_LE(v, 1.f);
    lit += v > 0.f;
  }
  EXPECT_GT(lit, 64 * 64 / 20);
  EXPECT_LT(lit, 64 * 64);
  // The bounding-sphere framing leaves the border background.
  for (int i = 0; i < 64; ++i) {
    EXPECT_EQ(a.at(i, 0), 0.f);
    EXPECT_EQ(a.at(i, 63), 0.f);
    EXPECT_EQ(a.at(0, i), 0.f);
    EXPECT_EQ(a.at(63, i), 0.f);
  }
  // Lit pixels carry the ambient floor.
  for (float v : a.data)
    if (v > 0.f) EXPECT_GE(v, 0.25f - 1e-6f);
}

TEST(ModelView, PoseChangesTheImage) {
  const ModelSpec& bed = ModelLibrary::standard().get("bed_a");
  GrayImage front = render_model_view(bed, {0.0, 10.0}, 48);
  GrayImage side = render_model_view(bed, {90.0, 10.0}, 48);
  GrayImage tilted = render_model_view(bed, {0.0, 35.0}, 48);
  auto l2 = [](const GrayImage& p, const GrayImage& q) {
    double ss = 0.0;
    for (std::size_t i = 0; i < p.data.size(); ++i) {
      double d = p.data[i] - q.data[i];
      ss += d * d;
    }
    return std::sqrt(ss);
  };
  EXPECT_GT(l2(front, side), 1.0);
  EXPECT_GT(l2(front, tilted), 1.0);
}

TEST(ModelView, NoiseIsSeededAndBounded) {
  const ModelSpec& tv = ModelLibrary::standard().get("tv_a");
  ModelViewOptions opt;
  opt.noise_sigma = 0.1;
  opt.noise_seed = 42;
  GrayImage a = render_model_view(tv, {45.0, 5.0}, 48, opt);
  GrayImage b = render_model_view(tv, {45.0, 5.0}, 48, opt);
  EXPECT_TRUE(a == b);
  opt.noise_seed = 43;
  GrayImage c = render_model_view(tv, {45.0, 5.0}, 48, opt);
  EXPECT_FALSE(a == c);
  for (float v : c.data) {
    EXPECT_GE(v, 0.f);
    EXPECT_LE(v, 1.f);
  }
}

ModelLibrary trimmed_library() {
  ModelLibrary lib;
  lib.add(ModelLibrary::standard().get("chair_a"));
  lib.add(ModelLibrary::standard().get("plant_a"));
  return lib;
}

TEST(PoseLibrary, BuildCoversGridAndIndexesByClass) {
  PoseLibrary lib = PoseLibrary::build(trimmed_library(), 32);
  // Full grid for the orientable chair, pitch-only for the symmetric plant.
  ASSERT_EQ(lib.entries().size(), static_cast<std::size_t>(360 + 9));
  EXPECT_EQ(lib.entries_for_class(ObjectClass::kChair).size(), 360u);
  EXPECT_EQ(lib.entries_for_class(ObjectClass::kPlant).size(), 9u);
  EXPECT_TRUE(lib.entries_for_class(ObjectClass::kBed).empty());
  const PoseLibraryEntry& e = lib.entry("chair_a", 37);
  EXPECT_EQ(e.pose_index, 37);
  EXPECT_EQ(e.cls, ObjectClass::kChair);
  EXPECT_EQ(e.image.width, 32);
  EXPECT_EQ(e.hog.size(), static_cast<std::size_t>(kHogDim));
  EXPECT_THROW(lib.entry("chair_a", 1234), ValidationError);
  EXPECT_THROW(lib.entry("sofa_z", 0), ValidationError);
  // Entries are live renders: identical to a direct render of the same pose.
  GrayImage direct = render_model_view(trimmed_library().get("chair_a"),
                                       PoseGrid::label_of(37), 32);
  EXPECT_TRUE(e.image == direct);
}

TEST(PoseLibrary, ParallelBuildMatchesSerial) {
  PoseLibrary serial = PoseLibrary::build(trimmed_library(), 24, 1);
  PoseLibrary parallel = PoseLibrary::build(trimmed_library(), 24, 3);
  ASSERT_EQ(serial.entries().size(), parallel.entries().size());
  for (std::size_t i = 0; i < serial.entries().size(); ++i)
    EXPECT_TRUE(serial.entries()[i].image == parallel.entries()[i].image);
}

TEST(PoseLibrary, SaveLoadRoundTripsThroughPng) {
  ModelLibrary models;
  models.add(ModelLibrary::standard().get("plant_a"));
  PoseLibrary lib = PoseLibrary::build(models, 32);
  std::string dir = ::testing::TempDir() + "poselib_rt";
  std::filesystem::create_directories(dir);
  lib.save(dir);
  PoseLibrary back = PoseLibrary::load(dir);
  ASSERT_EQ(back.entries().size(), lib.entries().size());
  EXPECT_EQ(back.render_size(), 32);
  for (std::size_t i = 0; i < lib.entries().size(); ++i) {
    const PoseLibraryEntry& a = lib.entries()[i];
    const PoseLibraryEntry& b = back.entries()[i];
    EXPECT_EQ(a.model_id, b.model_id);
    EXPECT_EQ(a.cls, b.cls);
    EXPECT_EQ(a.pose_index, b.pose_index);
    float max_diff = 0.f;
    for (std::size_t k = 0; k < a.image.data.size(); ++k)
      max_diff = std::max(max_diff, std::fabs(a.image.data[k] - b.image.data[k]));
    EXPECT_LE(max_diff, 0.5f / 255.f + 1e-4f);  // 8-bit quantization only
  }
  EXPECT_THROW(PoseLibrary::load(::testing::TempDir() + "no_such_poselib"), IoError);
}

}  // namespace
}  // namespace panolayout
