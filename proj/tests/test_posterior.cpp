#include <cmath>

#include <gtest/gtest.h>

#include "panolayout/model_view.hpp"
#include "panolayout/posterior.hpp"
#include "panolayout/room_generator.hpp"
#include "panolayout/renderer.hpp"

namespace panolayout {
namespace {

LabelImage labels_of(int w, int h, const std::vector<std::uint8_t>& v) {
  LabelImage img(w, h);
  img.data = v;
  return img;
}

TEST(SurfaceCostImages, CountsOnlyUnmaskedComparablePixels) {
  LabelImage obs = labels_of(4, 1, {1, 1, 2, 2});
  LabelImage hyp = labels_of(4, 1, {1, 2, 2, 3});
  LabelImage none;  // empty masks compare everything
  EXPECT_DOUBLE_EQ(surface_cost_images(obs, none, hyp, none), 0.5);

  // An observed none label drops the pixel from the comparison.
  LabelImage obs2 = labels_of(4, 1, {1, 0, 2, 2});
  EXPECT_DOUBLE_EQ(surface_cost_images(obs2, none, hyp, none), 1.0 / 3.0);

  // Observed-side mask (detection boxes) and hypothesis-side mask
  // (silhouettes) each remove their pixels.
  LabelImage obs_mask = labels_of(4, 1, {255, 0, 0, 0});
  EXPECT_DOUBLE_EQ(surface_cost_images(obs, obs_mask, hyp, none), 2.0 / 3.0);
  LabelImage hyp_mask = labels_of(4, 1, {0, 255, 0, 0});
  EXPECT_DOUBLE_EQ(surface_cost_images(obs, obs_mask, hyp, hyp_mask), 0.5);

  // A hypothesis none label at a compared pixel is a plain disagreement.
  LabelImage hyp_none = labels_of(4, 1, {0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(surface_cost_images(obs, none, hyp_none, none), 1.0);

  // Nothing comparable left: defined as total disagreement.
  LabelImage all_masked = labels_of(4, 1, {255, 255, 255, 255});
  EXPECT_DOUBLE_EQ(surface_cost_images(obs, all_masked, hyp, none), 1.0);
  LabelImage obs_none = labels_of(4, 1, {0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(surface_cost_images(obs_none, none, hyp, none), 1.0);

  LabelImage small = labels_of(2, 1, {1, 1});
  EXPECT_THROW(surface_cost_images(obs, none, small, none), ValidationError);
}

TEST(SurfaceCost, GroundTruthHypothesisOnItsOwnRenderIsZero) {
  const ModelLibrary& lib = ModelLibrary::standard();
  for (std::uint64_t seed : {3u, 7u}) {
    SceneParameters gt = generate_room(standard_room_templates()[seed % 5], lib, seed);
    SceneRender render = render_scene(gt, lib, 256, 128);
    ObservedRoom room = make_observed_room(render.labels, {});
    EXPECT_DOUBLE_EQ(surface_cost(room, gt, lib), 0.0);
  }
}

// Rescales a hypothesis about the camera the way scale sampling does.
SceneParameters rescaled(const SceneParameters& s, double factor) {
  SceneParameters out = s;
  out.lambda = s.lambda * factor;
  const Vec2 cam = s.camera.position;
  for (Wall& w : out.walls) {
    w.a = cam + (w.a - cam) * factor;
    w.b = cam + (w.b - cam) * factor;
    w.height *= factor;
  }
  return out;
}

TEST(SurfaceCost, ScaleSweepHasItsMinimumAtTheTrueScale) {
  SceneParameters gt;
  gt.camera.height = 1.70;
  gt.lambda = 1.0;
  std::vector<Vec2> poly = {{-2.2, -1.6}, {2.0, -1.6}, {2.0, 1.8}, {-2.2, 1.8}};
  for (std::size_t i = 0; i < poly.size(); ++i)
    gt.walls.push_back(Wall{poly[i], poly[(i + 1) % poly.size()], 2.5});

  const ModelLibrary& lib = ModelLibrary::standard();
  SceneRender render = render_scene(gt, lib, 256, 128);
  ObservedRoom room = make_observed_room(render.labels, {});

  double at_true = surface_cost(room, gt, lib);
  EXPECT_DOUBLE_EQ(at_true, 0.0);
  for (double f = 0.7; f < 1.31; f += 0.05) {
    if (std::fabs(f - 1.0) < 1e-9) continue;
    EXPECT_GT(surface_cost(room, rescaled(gt, f), lib), at_true) << "factor " << f;
  }
}

const PoseLibrary& chair_poses() {
  static const PoseLibrary lib = [] {
    ModelLibrary models;
    models.add(ModelLibrary::standard().get("chair_a"));
    models.add(ModelLibrary::standard().get("plant_a"));
    return PoseLibrary::build(models, 48);
  }();
  return lib;
}

// One chair along +x within 2 m (look-down clamps to exactly 40 degrees) at
// an on-grid relative yaw, so its crop reproduces a library render exactly.
SceneParameters chair_scene(double rel_yaw_deg) {
  SceneParameters s;
  s.camera.height = 1.70;
  s.lambda = 1.0;
  std::vector<Vec2> poly = {{-2.4, -2.0}, {2.4, -2.0}, {2.4, 2.0}, {-2.4, 2.0}};
  for (std::size_t i = 0; i < poly.size(); ++i)
    s.walls.push_back(Wall{poly[i], poly[(i + 1) % poly.size()], 2.5});
  SceneObject chair;
  chair.cls = ObjectClass::kChair;
  chair.model_id = "chair_a";
  chair.position = {1.5, 0.0};  // bearing 0
  chair.yaw_deg = rel_yaw_deg;
  s.objects.push_back(chair);
  return s;
}

TEST(OrientationCost, ZeroForExactCropAndPositiveWhenRotated) {
  SceneParameters gt = chair_scene(27.0);  // 3 yaw steps, pitch clamps to 40
  Detection det;
  det.cls = ObjectClass::kChair;
  det.x0 = 10;
  det.x1 = 20;
  det.y0 = 40;
  det.y1 = 60;

  GrayImage crop = render_model_view(ModelLibrary::standard().get("chair_a"),
                                     PoseLabel{27.0, 40.0}, 48);
  ObservedRoom room;
  room.pano = LabelImage(32, 16, 0);
  room.detections = {det};
  room.crop_hogs = {hog_descriptor(crop)};

  EXPECT_NEAR(orientation_cost(room, gt, chair_poses()), 0.0, 1e-12);

  SceneParameters wrong = gt;
  wrong.objects[0].yaw_deg = wrap_degrees(27.0 + 180.0);
  EXPECT_GT(orientation_cost(room, wrong, chair_poses()), 0.05);

  // Hypothesis poses snap to the grid: a sub-step yaw change keeps cost 0.
  SceneParameters nudged = gt;
  nudged.objects[0].yaw_deg = 27.0 + 3.0;
  EXPECT_NEAR(orientation_cost(room, nudged, chair_poses()), 0.0, 1e-12);
}

TEST(OrientationCost, SkipsPlantsAndMissingCrops) {
  SceneParameters gt = chair_scene(0.0);
  SceneObject plant;
  plant.cls = ObjectClass::kPlant;
  plant.model_id = "plant_a";
  plant.position = {0.0, 1.2};
  gt.objects.push_back(plant);

  Detection chair_det;
  chair_det.cls = ObjectClass::kChair;
  Detection plant_det;
  plant_det.cls = ObjectClass::kPlant;

  ObservedRoom room;
  room.pano = LabelImage(32, 16, 0);
  room.detections = {chair_det, plant_det};
  room.crop_hogs = {HogDescriptor{}, hog_descriptor(render_model_view(
                                         ModelLibrary::standard().get("plant_a"),
                                         PoseLabel{0.0, 40.0}, 48))};

  // Chair has no crop, plant has no orientation: the cost is empty.
  EXPECT_DOUBLE_EQ(orientation_cost(room, gt, chair_poses()), 0.0);
}

TEST(LogPosterior, CombinesWeightedComponents) {
  const ModelLibrary& lib = ModelLibrary::standard();
  SceneParameters gt = generate_room(standard_room_templates()[0], lib, 17);
  SceneRender render = render_scene(gt, lib, 256, 128);
  ObservedRoom room = make_observed_room(render.labels, {});

  PosteriorConfig cfg;
  cfg.surface_weight = 2.0;
  cfg.orientation_weight = 3.0;
  cfg.prior_weight = 0.5;
  cfg.prior.mu = 0.25;

  PosteriorBreakdown b = log_posterior(room, gt, lib, chair_poses(), cfg);
  EXPECT_DOUBLE_EQ(b.e_s, 0.0);
  EXPECT_DOUBLE_EQ(b.e_o, 0.0);  // no crops provided
  EXPECT_DOUBLE_EQ(b.e_ow, context_cost_object_wall(gt, lib, cfg.prior));
  EXPECT_DOUBLE_EQ(b.e_oo, context_cost_object_object(gt, lib));
  EXPECT_DOUBLE_EQ(b.log_posterior, -(2.0 * b.e_s + 3.0 * b.e_o + 0.5 * (b.e_ow + 0.25 * b.e_oo)));
  EXPECT_TRUE(std::isfinite(b.log_posterior));
}

TEST(ObservedRoomFactory, BuildsTheDetectionBoxMask) {
  Detection det;
  det.cls = ObjectClass::kBed;
  det.x0 = 2;
  det.x1 = 5;
  det.y0 = 3;
  det.y1 = 6;
  ObservedRoom room = make_observed_room(LabelImage(16, 8, 1), {det});
  EXPECT_EQ(room.box_mask.width, 16);
  EXPECT_EQ(room.box_mask.height, 8);
  LabelImage expect = detection_box_mask({det}, 16, 8);
  EXPECT_EQ(room.box_mask.data, expect.data);
}

}  // namespace
}  // namespace panolayout
