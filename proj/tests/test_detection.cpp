#include <set>

#include <gtest/gtest.h>

#include "panolayout/detection.hpp"

namespace panolayout {
namespace {

SceneParameters furnished_scene() {
  SceneParameters s;
  std::vector<Vec2> poly = {{-2.5, -2}, {2.5, -2}, {2.5, 2}, {-2.5, 2}};
  for (std::size_t i = 0; i < poly.size(); ++i)
    s.walls.push_back({poly[i], poly[(i + 1) % poly.size()], 2.5});
  SceneObject bed, chair, tv;
  bed.cls = ObjectClass::kBed;
  bed.model_id = "bed_a";
  bed.position = {1.2, 0.9};
  chair.cls = ObjectClass::kChair;
  chair.model_id = "chair_b";
  chair.position = {-1.5, 1.0};
  chair.yaw_deg = 90.0;
  tv.cls = ObjectClass::kTv;
  tv.model_id = "tv_a";
  tv.position = {0.5, -1.6};
  tv.yaw_deg = 90.0;
  s.objects = {bed, chair, tv};
  return s;
}

struct Silhouette {
  std::set<int> cols;
  int y_min = 1 << 30, y_max = -1;
  int pixels = 0;
};

std::vector<Silhouette> silhouettes_from_instance_map(const SceneParameters& s,
                                                      const ModelLibrary& lib, int w, int h) {
  SceneRender layout = render_layout(s, w, h);
  Image<int> ids = render_instance_map(s, lib, layout.depth);
  std::vector<Silhouette> out(s.objects.size());
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      int oi = ids.at(x, y);
      if (oi < 0) continue;
      out[oi].cols.insert(x);
      out[oi].y_min = std::min(out[oi].y_min, y);
      out[oi].y_max = std::max(out[oi].y_max, y);
      out[oi].pixels++;
    }
  return out;
}

TEST(ExactDetections, TightBoxesMatchInstanceMap) {
  SceneParameters s = furnished_scene();
  const ModelLibrary& lib = ModelLibrary::standard();
  const int w = 256, h = 128;
  std::vector<Silhouette> sil = silhouettes_from_instance_map(s, lib, w, h);
  SilhouetteBoxes boxes = exact_detections(s, lib, w, h);
  ASSERT_EQ(boxes.detections.size(), 3u);
  ASSERT_EQ(boxes.source_object, (std::vector<int>{0, 1, 2}));
  for (int i = 0; i < 3; ++i) {
    const Detection& d = boxes.detections[i];
    const Silhouette& g = sil[i];
    EXPECT_EQ(d.cls, s.objects[i].cls);
    EXPECT_FALSE(d.wraps()) << i;
    for (int c : g.cols) EXPECT_TRUE(d.contains_col(c)) << "object " << i << " col " << c;
    // The box edges themselves are occupied (tight box).
    EXPECT_TRUE(g.cols.count(static_cast<int>(d.x0)));
    EXPECT_TRUE(g.cols.count(static_cast<int>(d.x1)));
    EXPECT_EQ(d.y0, g.y_min);
    EXPECT_EQ(d.y1, g.y_max);
  }
}

TEST(ExactDetections, SeamCrossingObjectWraps) {
  SceneParameters s = furnished_scene();
  s.objects.clear();
  SceneObject plant;
  plant.cls = ObjectClass::kPlant;
  plant.model_id = "plant_a";
  plant.position = {1.5, 0.0};  // straight ahead: silhouette straddles column 0
  s.objects.push_back(plant);
  const int w = 256, h = 128;
  SilhouetteBoxes boxes = exact_detections(s, ModelLibrary::standard(), w, h);
  ASSERT_EQ(boxes.detections.size(), 1u);
  const Detection& d = boxes.detections[0];
  EXPECT_TRUE(d.wraps());
  EXPECT_TRUE(d.contains_col(0));
  EXPECT_TRUE(d.contains_col(w - 1));
  EXPECT_FALSE(d.contains_col(w / 2));
  EXPECT_NEAR(d.bearing_deg(w), 0.0, 3.0);
  std::vector<Silhouette> sil = silhouettes_from_instance_map(s, ModelLibrary::standard(), w, h);
  for (int c : sil[0].cols) EXPECT_TRUE(d.contains_col(c));
}

TEST(ExactDetections, MinPixelFilterSkipsButKeepsSourceIndices) {
  SceneParameters s = furnished_scene();
  const ModelLibrary& lib = ModelLibrary::standard();
  const int w = 256, h = 128;
  std::vector<Silhouette> sil = silhouettes_from_instance_map(s, lib, w, h);
  // Cut just above the smallest silhouette and expect exactly the survivors.
  std::vector<int> sizes = {sil[0].pixels, sil[1].pixels, sil[2].pixels};
  int cut = *std::min_element(sizes.begin(), sizes.end()) + 1;
  std::vector<int> expected;
  for (int i = 0; i < 3; ++i)
    if (sizes[i] >= cut) expected.push_back(i);
  ASSERT_LT(expected.size(), 3u);
  SilhouetteBoxes boxes = exact_detections(s, lib, w, h, cut);
  EXPECT_EQ(boxes.source_object, expected);
  SilhouetteBoxes none = exact_detections(s, lib, w, h, 1 << 28);
  EXPECT_TRUE(none.detections.empty());
}

TEST(Detection, BearingAndCenterHandleSeam) {
  Detection d;
  d.x0 = 10;
  d.x1 = 20;
  EXPECT_DOUBLE_EQ(d.center_col(512), 15.0);
  EXPECT_DOUBLE_EQ(d.bearing_deg(512), 15.5 * 360.0 / 512);
  Detection wrap;
  wrap.x0 = 510;
  wrap.x1 = 4;
  EXPECT_TRUE(wrap.wraps());
  EXPECT_DOUBLE_EQ(wrap.center_col(512), 1.0);
  EXPECT_TRUE(wrap.contains_col(511));
  EXPECT_TRUE(wrap.contains_col(2));
  EXPECT_FALSE(wrap.contains_col(5));
  EXPECT_FALSE(wrap.contains_col(509));
}

TEST(Jitter, DeterministicBoundedAndOrdered) {
  std::vector<Detection> dets(2);
  dets[0].x0 = 100;
  dets[0].y0 = 40;
  dets[0].x1 = 140;
  dets[0].y1 = 90;
  dets[1].x0 = 500;  // wraps
  dets[1].y0 = 10;
  dets[1].x1 = 30;
  dets[1].y1 = 50;
  Rng a(5), b(5);
  std::vector<Detection> ja = jitter_detections(dets, 4.0, 512, 256, a);
  std::vector<Detection> jb = jitter_detections(dets, 4.0, 512, 256, b);
  ASSERT_EQ(ja.size(), 2u);
  for (int i = 0; i < 2; ++i) {
    EXPECT_DOUBLE_EQ(ja[i].x0, jb[i].x0);
    EXPECT_DOUBLE_EQ(ja[i].y1, jb[i].y1);
  }
  EXPECT_NE(ja[0].x0, dets[0].x0);
  EXPECT_LE(ja[0].x0, ja[0].x1);
  EXPECT_LE(ja[0].y0, ja[0].y1);
  EXPECT_GE(ja[0].x0, 0.0);
  EXPECT_LE(ja[0].x1, 511.0);
  // The wrapped box stays wrapped modulo the width.
  EXPECT_GE(ja[1].x0, 0.0);
  EXPECT_LT(ja[1].x0, 512.0);
  EXPECT_GE(ja[1].x1, 0.0);
  EXPECT_LT(ja[1].x1, 512.0);

  // Heavy jitter still respects the image bounds.
  Rng c(6);
  std::vector<Detection> jc = jitter_detections(dets, 300.0, 512, 256, c);
  EXPECT_GE(jc[0].y0, 0.0);
  EXPECT_LE(jc[0].y1, 255.0);

  // Zero sigma is the identity.
  Rng z(7);
  std::vector<Detection> jz = jitter_detections(dets, 0.0, 512, 256, z);
  EXPECT_DOUBLE_EQ(jz[0].x0, 100.0);
  EXPECT_DOUBLE_EQ(jz[1].x0, 500.0);
}

TEST(BoxMask, CoversExpandedBoxesIncludingWrap) {
  std::vector<Detection> dets(2);
  dets[0].x0 = 2.3;
  dets[0].y0 = 1.0;
  dets[0].x1 = 4.2;
  dets[0].y1 = 2.0;
  dets[1].x0 = 6;  // wraps: columns 6,7,0,1
  dets[1].y0 = 3;
  dets[1].x1 = 1;
  dets[1].y1 = 3;
  LabelImage mask = detection_box_mask(dets, 8, 5);
  auto expect_on = [&](int x, int y, bool on) {
    EXPECT_EQ(mask.at(x, y) == 255, on) << x << "," << y;
  };
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 5; ++y) {
      bool in_first = x >= 2 && x <= 5 && y >= 1 && y <= 2;
      bool in_second = (x >= 6 || x <= 1) && y == 3;
      expect_on(x, y, in_first || in_second);
    }
}

TEST(DetectionIo, JsonRoundTripAndErrors) {
  std::vector<Detection> dets(2);
  dets[0].cls = ObjectClass::kTv;
  dets[0].x0 = 12.5;
  dets[0].y0 = 3;
  dets[0].x1 = 60;
  dets[0].y1 = 44.25;
  dets[0].score = 0.75;
  dets[1].cls = ObjectClass::kPlant;
  dets[1].x0 = 500;
  dets[1].x1 = 4;
  std::string path = ::testing::TempDir() + "dets.json";
  save_detections(path, dets);
  std::vector<Detection> back = load_detections(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].cls, ObjectClass::kTv);
  EXPECT_DOUBLE_EQ(back[0].x0, 12.5);
  EXPECT_DOUBLE_EQ(back[0].y1, 44.25);
  EXPECT_DOUBLE_EQ(back[0].score, 0.75);
  EXPECT_TRUE(back[1].wraps());

  EXPECT_THROW(load_detections("/nonexistent/dir/d.json"), IoError);
  std::string bad = ::testing::TempDir() + "bad_dets.json";
  {
    std::ofstream f(bad);
    f << "[{\"class\": \"bed\"}]";
  }
  EXPECT_THROW(load_detections(bad), IoError);
  {
    std::ofstream f(bad);
    f << "not json";
  }
  EXPECT_THROW(load_detections(bad), IoError);
}

}  // namespace
}  // namespace panolayout
