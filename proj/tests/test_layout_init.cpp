#include <cmath>

#include <gtest/gtest.h>

#include "panolayout/estimator.hpp"
#include "panolayout/layout_init.hpp"
#include "panolayout/random.hpp"
#include "panolayout/renderer.hpp"

namespace panolayout {
namespace {

SceneParameters box_room(double height = 2.5) {
  SceneParameters s;
  s.camera.height = 1.70;
  s.lambda = height / 2.5;
  std::vector<Vec2> poly = {{-2.2, -1.6}, {2.0, -1.6}, {2.0, 1.8}, {-2.2, 1.8}};
  for (std::size_t i = 0; i < poly.size(); ++i)
    s.walls.push_back(Wall{poly[i], poly[(i + 1) % poly.size()], height});
  return s;
}

double polygon_distance(const Vec2& p, const std::vector<Vec2>& poly) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i)
    d = std::min(d, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return d;
}

TEST(FloorBoundary, BackprojectsOntoTheWallLoop) {
  SceneParameters scene = box_room();
  SceneRender render = render_layout(scene, 512, 256);
  std::vector<PerspectiveView> views = make_layout_views(512, 256);
  ASSERT_EQ(views.size(), 6u);

  std::vector<Vec2> poly = scene.polygon();
  int total = 0;
  for (const PerspectiveView& view : views) {
    LabelImage labels = sample_view_labels(render.labels, view);
    ViewCloud cloud = extract_floor_boundary(labels, view, scene.camera.height, 512);
    ASSERT_EQ(cloud.points.size(), cloud.pano_cols.size());
    EXPECT_GT(cloud.points.size(), 50u);
    double worst = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
      double d = polygon_distance(cloud.points[i], poly);
      worst = std::max(worst, d);
      sum += d;
      EXPECT_GE(cloud.pano_cols[i], 0);
      EXPECT_LT(cloud.pano_cols[i], 512);
    }
    // One-pixel boundary quantization at the far corners stays below ~10 cm;
    // the average column is much closer.
    EXPECT_LT(worst, 0.15);
    EXPECT_LT(sum / cloud.points.size(), 0.06);
    total += static_cast<int>(cloud.points.size());
  }
  EXPECT_GT(total, 600);
}

TEST(FloorBoundary, SkipsMaskedColumns) {
  SceneParameters scene = box_room();
  SceneRender render = render_layout(scene, 512, 256);
  PerspectiveView view = make_layout_views(512, 256)[0];
  LabelImage labels = sample_view_labels(render.labels, view);

  std::vector<bool> skip(512, false);
  for (int c = 0; c < 40; ++c) skip[c] = true;
  ViewCloud masked = extract_floor_boundary(labels, view, scene.camera.height, 512, skip);
  ViewCloud full = extract_floor_boundary(labels, view, scene.camera.height, 512);
  EXPECT_LT(masked.points.size(), full.points.size());
  for (int col : masked.pano_cols) EXPECT_FALSE(skip[col]);
}

TEST(RingCorrespondences, PairNeighborViewsBySharedColumn) {
  std::vector<ViewCloud> clouds(3);
  clouds[0].pano_cols = {10, 11, 12};
  clouds[0].points = {{1, 0}, {1, 0.2}, {1, 0.4}};
  clouds[1].pano_cols = {12, 20};
  clouds[1].points = {{1, 0.4}, {0, 1}};
  clouds[2].pano_cols = {20, 30, 10};
  clouds[2].points = {{0, 1}, {-1, 0}, {1, 0}};

  std::vector<CloudCorrespondence> corr = build_ring_correspondences(clouds);
  // Neighbor pairs (0,1), (1,2) and the wrap-around (2,0), one per shared
  // column.
  ASSERT_EQ(corr.size(), 3u);
  EXPECT_EQ(corr[0].view_a, 0);
  EXPECT_EQ(corr[0].index_a, 2);
  EXPECT_EQ(corr[0].view_b, 1);
  EXPECT_EQ(corr[0].index_b, 0);
  EXPECT_EQ(corr[1].view_a, 1);
  EXPECT_EQ(corr[1].index_a, 1);
  EXPECT_EQ(corr[1].view_b, 2);
  EXPECT_EQ(corr[1].index_b, 0);
  EXPECT_EQ(corr[2].view_a, 2);
  EXPECT_EQ(corr[2].index_a, 2);
  EXPECT_EQ(corr[2].view_b, 0);
  EXPECT_EQ(corr[2].index_b, 0);
}

TEST(AlignViewClouds, RecoversAPreScaledViewExactly) {
  // View 1 carries the same boundary points as its neighbors but scaled by
  // 2; alignment must assign it scale 0.5 (first view pinned to 1).
  std::vector<ViewCloud> clouds(3);
  clouds[0].pano_cols = {10, 12};
  clouds[0].points = {{1, 0}, {1, 0.4}};
  clouds[1].pano_cols = {12, 20};
  clouds[1].points = {{2, 0.8}, {0, 2}};
  clouds[2].pano_cols = {20, 25};
  clouds[2].points = {{0, 1}, {-0.5, 1}};

  std::vector<CloudCorrespondence> corr = build_ring_correspondences(clouds);
  std::vector<double> scales = align_view_clouds(clouds, corr);
  ASSERT_EQ(scales.size(), 3u);
  EXPECT_NEAR(scales[0], 1.0, 1e-12);
  EXPECT_NEAR(scales[1], 0.5, 1e-9);
  EXPECT_NEAR(scales[2], 1.0, 1e-9);

  EXPECT_THROW(align_view_clouds({}, {}), EstimationError);
  EXPECT_THROW(align_view_clouds(clouds, {}), EstimationError);
}

TEST(WallFit, RecoversNoisyLShapeLines) {
  std::vector<Vec2> poly = {{-2.5, -2.0}, {2.5, -2.0}, {2.5, 0.5},
                            {0.5, 0.5},   {0.5, 2.0},  {-2.5, 2.0}};
  Rng rng(41);
  std::vector<Vec2> points;
  for (int k = 0; k < 720; ++k) {
    double az = 0.5 * k;
    Vec2 dir = unit_from_degrees(az);
    auto hit = ray_polygon_first_hit(Vec2{0, 0}, dir, poly);
    ASSERT_TRUE(hit.has_value());
    Vec2 p = dir * hit->t;
    points.push_back({p.x + rng.normal(0.0, 0.01), p.y + rng.normal(0.0, 0.01)});
  }

  std::vector<Wall> walls = fit_walls(points);
  ASSERT_EQ(walls.size(), 6u);

  // Each wall must be axis-aligned within one degree and its line must match
  // one of the six ground-truth lines.
  struct Line {
    int axis;
    double c;
  };
  std::vector<Line> expected = {{0, -2.0}, {1, 2.5}, {0, 0.5}, {1, 0.5}, {0, 2.0}, {1, -2.5}};
  std::vector<bool> hit_line(expected.size(), false);
  for (const Wall& w : walls) {
    Vec2 e = w.b - w.a;
    double angle_off = rad_to_deg(std::atan2(std::min(std::fabs(e.x), std::fabs(e.y)),
                                             std::max(std::fabs(e.x), std::fabs(e.y))));
    EXPECT_LT(angle_off, 1.0);
    int axis = std::fabs(e.x) >= std::fabs(e.y) ? 0 : 1;
    double c = axis == 0 ? 0.5 * (w.a.y + w.b.y) : 0.5 * (w.a.x + w.b.x);
    bool found = false;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (expected[i].axis == axis && std::fabs(expected[i].c - c) < 0.05 && !hit_line[i]) {
        hit_line[i] = found = true;
        break;
      }
    }
    EXPECT_TRUE(found) << "axis " << axis << " c " << c;

    // Inward normal (left of a->b on the counterclockwise loop) faces the
    // camera.
    Vec2 inward{-e.y, e.x};
    Vec2 mid = (w.a + w.b) * 0.5;
    EXPECT_GT(inward.dot(Vec2{0, 0} - mid), 0.0);
    EXPECT_DOUBLE_EQ(w.height, 2.5);
  }
  for (bool h : hit_line) EXPECT_TRUE(h);
}

TEST(WallFit, RejectsDegenerateInput) {
  EXPECT_THROW(fit_walls({{1, 0}, {1, 0.1}, {1, 0.2}}), EstimationError);
  // All points on one line: a single direction cannot close a loop.
  std::vector<Vec2> line;
  for (int i = 0; i < 20; ++i) line.push_back({-1.0 + 0.1 * i, 1.0});
  EXPECT_THROW(fit_walls(line), EstimationError);
}

TEST(WallHeight, RecoversRenderedHeight) {
  for (double h : {2.2, 2.8, 3.3}) {
    SceneParameters scene = box_room(h);
    SceneRender render = render_layout(scene, 512, 256);
    double est = estimate_wall_height(render.labels, scene.camera.height);
    EXPECT_NEAR(est, h, 0.06) << "height " << h;
  }
  // Fully masked panorama leaves nothing to measure.
  SceneRender render = render_layout(box_room(), 512, 256);
  std::vector<bool> all(512, true);
  EXPECT_THROW(estimate_wall_height(render.labels, 1.70, all), EstimationError);
}

TEST(InitialScene, NormalizesCleanRenderToBaseHeight) {
  const double true_height = 2.8;
  SceneParameters gt = box_room(true_height);
  SceneRender render = render_layout(gt, 512, 256);
  ObservedRoom room;
  room.pano = render.labels;

  InitialLayout init = estimate_initial_scene(room);
  EXPECT_NEAR(init.estimated_wall_height, true_height, 0.06);
  EXPECT_DOUBLE_EQ(init.scene.lambda, 1.0);
  ASSERT_EQ(init.scene.walls.size(), 4u);
  for (const Wall& w : init.scene.walls) EXPECT_DOUBLE_EQ(w.height, 2.5);

  // The recovered loop is the ground-truth loop shrunk by base/true height.
  double factor = 2.5 / true_height;
  std::vector<Vec2> expect;
  for (const Vec2& p : gt.polygon()) expect.push_back(p * factor);
  for (const Wall& w : init.scene.walls) {
    EXPECT_LT(polygon_distance(w.a, expect), 0.08);
    EXPECT_LT(polygon_distance(w.b, expect), 0.08);
  }
  EXPECT_TRUE(point_in_polygon(init.scene.camera.position, init.scene.polygon()));
}

TEST(InitialScene, HandlesAnLShapedRoom) {
  SceneParameters gt;
  gt.camera.height = 1.70;
  gt.lambda = 1.0;
  std::vector<Vec2> poly = {{-2.5, -2.0}, {2.5, -2.0}, {2.5, 0.5},
                            {0.5, 0.5},   {0.5, 2.0},  {-2.5, 2.0}};
  for (std::size_t i = 0; i < poly.size(); ++i)
    gt.walls.push_back(Wall{poly[i], poly[(i + 1) % poly.size()], 2.5});

  SceneRender render = render_layout(gt, 512, 256);
  ObservedRoom room;
  room.pano = render.labels;
  InitialLayout init = estimate_initial_scene(room);
  EXPECT_EQ(init.scene.walls.size(), 6u);
  EXPECT_NEAR(init.estimated_wall_height, 2.5, 0.06);
  for (const Wall& w : init.scene.walls) {
    EXPECT_LT(polygon_distance(w.a, poly), 0.12);
  }
}

}  // namespace
}  // namespace panolayout
