#include <cmath>

#include <gtest/gtest.h>

#include "panolayout/pose_crf.hpp"

namespace panolayout {
namespace {

TEST(KSmallest, OrdersAndBreaksTiesByIndex) {
  std::vector<double> d = {3.0, 1.0, 2.0, 1.0};
  EXPECT_EQ(k_smallest_indices(d, 2), (std::vector<int>{1, 3}));
  EXPECT_EQ(k_smallest_indices(d, 3), (std::vector<int>{1, 3, 2}));
  EXPECT_TRUE(k_smallest_indices(d, 0).empty());
  EXPECT_EQ(k_smallest_indices(d, 99), (std::vector<int>{1, 3, 2, 0}));
  std::vector<double> ties = {5.0, 5.0, 5.0};
  EXPECT_EQ(k_smallest_indices(ties, 2), (std::vector<int>{0, 1}));
}

const PoseLibrary& chair_library() {
  static const PoseLibrary lib = [] {
    ModelLibrary models;
    models.add(ModelLibrary::standard().get("chair_a"));
    return PoseLibrary::build(models, 48);
  }();
  return lib;
}

const ModelLibrary& bed_models() {
  static const ModelLibrary lib = [] {
    ModelLibrary models;
    models.add(ModelLibrary::standard().get("bed_a"));
    models.add(ModelLibrary::standard().get("bed_b"));
    return models;
  }();
  return lib;
}

const PoseLibrary& bed_library() {
  static const PoseLibrary lib = PoseLibrary::build(bed_models(), 48);
  return lib;
}

TEST(PoseUnary, SelfQueryVotesGiveExponentialEnergies) {
  const PoseLibrary& lib = chair_library();
  const HogDescriptor& query = lib.entry("chair_a", 100).hog;
  std::vector<double> unary = pose_unary_energy(query, lib, ObjectClass::kChair, 6);
  ASSERT_EQ(unary.size(), static_cast<std::size_t>(PoseGrid::kLabelCount));
  // The exact pose is among the voted labels.
  EXPECT_NEAR(unary[100], std::exp(-1.0), 1e-12);
  int voted = 0;
  for (double v : unary) {
    EXPECT_GE(v, std::exp(-6.0) - 1e-12);
    EXPECT_LE(v, 1.0 + 1e-12);
    voted += v < 1.0;
  }
  // One model per pose: six single votes on six distinct labels.
  EXPECT_EQ(voted, 6);

  EXPECT_THROW(pose_unary_energy(query, lib, ObjectClass::kBed, 6), ValidationError);
}

TEST(NearestEntry, SelfRetrievalReturnsSourceModelAndPose) {
  const PoseLibrary& lib = bed_library();
  for (const char* id : {"bed_a", "bed_b"}) {
    for (int pose : {0, 77, 203, 359}) {
      const PoseLibraryEntry& hit = nearest_library_entry(lib.entry(id, pose).hog, lib,
                                                          ObjectClass::kBed);
      EXPECT_EQ(hit.model_id, id);
      EXPECT_EQ(hit.pose_index, pose);
    }
  }
}

TEST(ClassPoses, ExactLibraryQueryWithoutAuxViewsKeepsItsPose) {
  // Single-node graph: the unary votes plus closest-vote tie-breaking must
  // return the query's own pose when the query is a library render.
  PoseCrfConfig cfg;
  cfg.render_size = 48;
  cfg.aux_views = 0;
  cfg.iterations = 5;
  ModelLibrary chair;
  chair.add(ModelLibrary::standard().get("chair_a"));
  for (int truth : {0, 45, 162, 333, 359}) {
    std::vector<HogDescriptor> query = {chair_library().entry("chair_a", truth).hog};
    PoseCrfResult res = estimate_class_poses(query, ObjectClass::kChair, chair,
                                             chair_library(), cfg);
    ASSERT_EQ(res.targets.size(), 1u);
    EXPECT_EQ(res.targets[0].pose_index, truth);
    EXPECT_EQ(res.targets[0].model_id, "chair_a");
    EXPECT_EQ(res.node_count, 1);
    EXPECT_EQ(res.edge_count, 0);
  }
  // Two models per pose can outvote the exact match by one adjacent step at
  // worst; these poses tie and the closest vote settles them exactly.
  for (int truth : {45, 162, 333}) {
    std::vector<HogDescriptor> query = {bed_library().entry("bed_a", truth).hog};
    PoseCrfResult res = estimate_class_poses(query, ObjectClass::kBed, bed_models(),
                                             bed_library(), cfg);
    EXPECT_EQ(res.targets[0].pose_index, truth);
    EXPECT_EQ(res.targets[0].model_id, "bed_a");
  }
}

TEST(ClassPoses, AuxiliaryGraphIsConnectedWithSoundBounds) {
  PoseCrfConfig cfg;
  cfg.render_size = 48;
  cfg.aux_views = 16;
  cfg.iterations = 30;
  std::vector<HogDescriptor> queries = {bed_library().entry("bed_a", 45).hog,
                                        bed_library().entry("bed_a", 200).hog};
  PoseCrfResult res = estimate_class_poses(queries, ObjectClass::kBed, bed_models(),
                                           bed_library(), cfg);
  ASSERT_EQ(res.targets.size(), 2u);
  EXPECT_EQ(res.node_count, 2 + cfg.aux_views);
  EXPECT_GE(res.edge_count, res.node_count - 1);
  ASSERT_EQ(res.lower_bounds.size(), static_cast<std::size_t>(cfg.iterations));
  for (std::size_t i = 1; i < res.lower_bounds.size(); ++i)
    EXPECT_GE(res.lower_bounds[i], res.lower_bounds[i - 1] - 1e-9);
  EXPECT_GE(res.energy, res.lower_bounds.back() - 1e-9);
  for (const PoseEstimate& t : res.targets) {
    EXPECT_GE(t.pose_index, 0);
    EXPECT_LT(t.pose_index, PoseGrid::kLabelCount);
    EXPECT_EQ(t.model_id, "bed_a");
  }
}

TEST(ClassPoses, DeterministicAcrossRuns) {
  PoseCrfConfig cfg;
  cfg.render_size = 48;
  cfg.aux_views = 10;
  cfg.iterations = 15;
  std::vector<HogDescriptor> queries = {bed_library().entry("bed_b", 120).hog};
  PoseCrfResult a = estimate_class_poses(queries, ObjectClass::kBed, bed_models(),
                                         bed_library(), cfg);
  PoseCrfResult b = estimate_class_poses(queries, ObjectClass::kBed, bed_models(),
                                         bed_library(), cfg);
  ASSERT_EQ(a.targets.size(), 1u);
  EXPECT_EQ(a.targets[0].pose_index, b.targets[0].pose_index);
  EXPECT_DOUBLE_EQ(a.energy, b.energy);
  EXPECT_EQ(a.targets[0].model_id, "bed_b");

  cfg.seed = 99;  // different auxiliary draw
  PoseCrfResult c = estimate_class_poses(queries, ObjectClass::kBed, bed_models(),
                                         bed_library(), cfg);
  EXPECT_EQ(c.targets.size(), 1u);
}

TEST(ClassPoses, RejectsUnorientableAndEmptyInput) {
  EXPECT_TRUE(estimate_class_poses({}, ObjectClass::kBed, bed_models(), bed_library())
                  .targets.empty());
  std::vector<HogDescriptor> queries = {bed_library().entries()[0].hog};
  EXPECT_THROW(
      estimate_class_poses(queries, ObjectClass::kPlant, ModelLibrary::standard(), bed_library()),
      ValidationError);
}

}  // namespace
}  // namespace panolayout
