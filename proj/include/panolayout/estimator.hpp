#pragma once

// End-to-end estimation for one room: initial layout from the panorama,
// object pose estimation from the appearance crops, then MAP refinement by
// sampling.

#include <map>
#include <string>
#include <vector>

#include "panolayout/common.hpp"
#include "panolayout/detection.hpp"
#include "panolayout/image.hpp"
#include "panolayout/layout_init.hpp"
#include "panolayout/model_library.hpp"
#include "panolayout/pose_crf.hpp"
#include "panolayout/pose_library.hpp"
#include "panolayout/posterior.hpp"
#include "panolayout/projection.hpp"
#include "panolayout/sampler.hpp"
#include "panolayout/scene.hpp"

namespace panolayout {

struct EstimatorConfig {
  double camera_height = 1.70;
  double base_height = 2.5;
  // Objects start at this fraction of the wall distance along the detection
  // bearing.
  double object_ray_fraction = 0.6;
  // Columns near detection boxes are excluded from boundary extraction.
  int mask_dilate_cols = 6;
  WallFitOptions wall_fit;
  PoseCrfConfig crf;
  PosteriorConfig posterior;
  SamplerConfig sampler;
};

// Column exclusion mask from the detection boxes, dilated.
inline std::vector<bool> detection_column_mask(const std::vector<Detection>& dets, int width,
                                               int dilate) {
  std::vector<bool> mask(width, false);
  for (const Detection& d : dets) {
    int xa = static_cast<int>(std::floor(d.x0)) - dilate;
    int xb = static_cast<int>(std::ceil(d.x1)) + dilate;
    if (d.wraps()) xb += width;
    for (int x = xa; x <= xb; ++x) mask[((x % width) + width) % width] = true;
  }
  return mask;
}

struct InitialLayout {
  SceneParameters scene;
  double estimated_wall_height = 0.0;
};

// Wall loop and object seeds from the observed panorama: denoise, extract
// per-view floor boundaries, align the view clouds, fit Manhattan walls,
// then normalize the loop so the estimated wall height maps to the base
// height (scale lambda = 1).
inline InitialLayout estimate_initial_scene(const ObservedRoom& room,
                                            const EstimatorConfig& cfg = {}) {
  const int W = room.pano.width, H = room.pano.height;
  LabelImage filtered = mode_filter_labels(room.pano, 1, true);
  std::vector<bool> skip_cols = detection_column_mask(room.detections, W, cfg.mask_dilate_cols);

  std::vector<PerspectiveView> views = make_layout_views(W, H);
  std::vector<ViewCloud> clouds;
  for (std::size_t i = 0; i < views.size(); ++i) {
    LabelImage view_labels = sample_view_labels(filtered, views[i]);
    ViewCloud cloud = extract_floor_boundary(view_labels, views[i], cfg.camera_height, W,
                                             skip_cols);
    cloud.view_index = static_cast<int>(i);
    clouds.push_back(std::move(cloud));
  }
  std::vector<CloudCorrespondence> corr = build_ring_correspondences(clouds);
  std::vector<double> scales = align_view_clouds(clouds, corr);
  // Overlapping views sample the same panorama columns; average per column so
  // the merged boundary is a single clean loop.
  std::vector<Vec2> col_sum(W, Vec2{0, 0});
  std::vector<int> col_count(W, 0);
  for (std::size_t i = 0; i < clouds.size(); ++i) {
    for (std::size_t k = 0; k < clouds[i].points.size(); ++k) {
      int col = clouds[i].pano_cols[k];
      col_sum[col] += clouds[i].points[k] * scales[i];
      ++col_count[col];
    }
  }
  std::vector<Vec2> merged;
  for (int col = 0; col < W; ++col) {
    if (col_count[col] > 0) merged.push_back(col_sum[col] / static_cast<double>(col_count[col]));
  }
  std::vector<Wall> walls = fit_walls(merged, cfg.wall_fit);

  InitialLayout init;
  init.estimated_wall_height = estimate_wall_height(filtered, cfg.camera_height, skip_cols);
  double factor = cfg.base_height / init.estimated_wall_height;

  init.scene.camera.height = cfg.camera_height;
  init.scene.lambda = 1.0;
  for (Wall& w : walls) {
    w.a = w.a * factor;
    w.b = w.b * factor;
    w.height = cfg.base_height;
    init.scene.walls.push_back(w);
  }
  validate_scene_geometry(init.scene);
  return init;
}

// Places one object per detection along its bearing.
inline void seed_objects_from_detections(SceneParameters& scene,
                                         const std::vector<Detection>& dets,
                                         const ModelLibrary& lib, int pano_width,
                                         double ray_fraction) {
  std::vector<Vec2> poly = scene.polygon();
  scene.objects.clear();
  for (const Detection& d : dets) {
    double bearing = d.bearing_deg(pano_width);
    Vec2 dir = unit_from_degrees(bearing);
    auto hit = ray_polygon_first_hit(scene.camera.position, dir, poly);
    if (!hit) throw EstimationError("object seeding: bearing ray missed the walls");
    SceneObject obj;
    obj.cls = d.cls;
    obj.model_id = lib.default_model(d.cls).id;
    obj.position = scene.camera.position + dir * (ray_fraction * hit->t);
    obj.yaw_deg = bearing;  // facing away from the camera until estimated
    scene.objects.push_back(obj);
  }
}

struct RoomEstimate {
  InitialLayout init_layout;
  SceneParameters init;   // after object seeding and pose assignment
  SceneParameters final_scene;
  MapResult map;
};

inline RoomEstimate estimate_room(const ObservedRoom& room, const ModelLibrary& lib,
                                  const PoseLibrary& poses, const EstimatorConfig& cfg = {}) {
  RoomEstimate out;
  out.init_layout = estimate_initial_scene(room, cfg);
  out.init = out.init_layout.scene;
  seed_objects_from_detections(out.init, room.detections, lib, room.pano.width,
                               cfg.object_ray_fraction);

  // Pose stage: one appearance graph per orientable class present.
  std::map<ObjectClass, std::vector<int>> groups;
  for (std::size_t di = 0; di < room.detections.size(); ++di) {
    if (di >= room.crop_hogs.size() || room.crop_hogs[di].empty()) continue;
    groups[room.detections[di].cls].push_back(static_cast<int>(di));
  }
  for (const auto& [cls, det_indices] : groups) {
    if (has_canonical_orientation(cls)) {
      std::vector<HogDescriptor> queries;
      for (int di : det_indices) queries.push_back(room.crop_hogs[di]);
      PoseCrfResult crf = estimate_class_poses(queries, cls, lib, poses, cfg.crf);
      for (std::size_t q = 0; q < det_indices.size(); ++q) {
        int di = det_indices[q];
        SceneObject& obj = out.init.objects[di];
        obj.model_id = crf.targets[q].model_id;
        obj.yaw_deg = world_yaw(crf.targets[q].pose.yaw_deg,
                                room.detections[di].bearing_deg(room.pano.width));
      }
    } else {
      for (int di : det_indices) {
        out.init.objects[di].model_id =
            nearest_library_entry(room.crop_hogs[di], poses, cls).model_id;
      }
    }
  }

  out.map = run_map_search(room, out.init, lib, poses, cfg.posterior, cfg.sampler);
  out.final_scene = out.map.best;
  return out;
}

}  // namespace panolayout
