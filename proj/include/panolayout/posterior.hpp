#pragma once

// Scene log-posterior: surface-orientation agreement, object appearance
// agreement, and the context prior.

#include <cmath>
#include <vector>

#include "panolayout/common.hpp"
#include "panolayout/context_prior.hpp"
#include "panolayout/detection.hpp"
#include "panolayout/hog.hpp"
#include "panolayout/model_library.hpp"
#include "panolayout/pose.hpp"
#include "panolayout/pose_library.hpp"
#include "panolayout/renderer.hpp"
#include "panolayout/scene.hpp"

namespace panolayout {

// Everything the estimator observes about one room.
struct ObservedRoom {
  LabelImage pano;                       // orientation labels (possibly noisy)
  std::vector<Detection> detections;     // oracle boxes
  LabelImage box_mask;                   // 0/255 union of the detection boxes
  std::vector<HogDescriptor> crop_hogs;  // appearance crop descriptor per detection
};

inline ObservedRoom make_observed_room(LabelImage pano, std::vector<Detection> detections,
                                       std::vector<HogDescriptor> crop_hogs = {}) {
  ObservedRoom room;
  room.box_mask = detection_box_mask(detections, pano.width, pano.height);
  room.pano = std::move(pano);
  room.detections = std::move(detections);
  room.crop_hogs = std::move(crop_hogs);
  return room;
}

// Label disagreement between the observed panorama and a rendered hypothesis,
// as a fraction of the compared pixels.  Pixels are skipped when covered by
// an observed detection box, by the hypothesis object silhouette, or when the
// observation itself carries the none label; a hypothesis none label at a
// compared pixel counts as disagreement.
inline double surface_cost_images(const LabelImage& observed, const LabelImage& observed_mask,
                                  const LabelImage& hyp_labels, const LabelImage& hyp_mask) {
  if (observed.width != hyp_labels.width || observed.height != hyp_labels.height)
    throw ValidationError("surface_cost: size mismatch");
  std::size_t compared = 0, agree = 0;
  for (std::size_t i = 0; i < observed.data.size(); ++i) {
    if (observed_mask.data.size() == observed.data.size() && observed_mask.data[i]) continue;
    if (hyp_mask.data.size() == observed.data.size() && hyp_mask.data[i]) continue;
    if (observed.data[i] == kLabelNone) continue;
    ++compared;
    if (observed.data[i] == hyp_labels.data[i]) ++agree;
  }
  if (compared == 0) return 1.0;
  return 1.0 - static_cast<double>(agree) / static_cast<double>(compared);
}

inline double surface_cost(const ObservedRoom& room, const SceneParameters& hypothesis,
                           const ModelLibrary& lib) {
  SceneRender layout = render_layout(hypothesis, room.pano.width, room.pano.height);
  Image<int> ids = render_instance_map(hypothesis, lib, layout.depth);
  LabelImage hyp_mask(room.pano.width, room.pano.height, 0);
  for (std::size_t i = 0; i < ids.data.size(); ++i) {
    if (ids.data[i] >= 0) hyp_mask.data[i] = 255;
  }
  return surface_cost_images(room.pano, room.box_mask, layout.labels, hyp_mask);
}

// Mean appearance distance between each observed crop and the library view
// of the hypothesis object at its (quantized) relative pose.  Objects of
// classes without a canonical orientation are skipped, as are detections
// without crops.  `det_to_obj` maps detection index to hypothesis object
// index; by default they correspond one-to-one in order.
inline double orientation_cost(const ObservedRoom& room, const SceneParameters& hypothesis,
                               const PoseLibrary& poses,
                               const std::vector<int>& det_to_obj = {}) {
  double total = 0.0;
  int counted = 0;
  for (std::size_t di = 0; di < room.detections.size(); ++di) {
    if (di >= room.crop_hogs.size() || room.crop_hogs[di].empty()) continue;
    int oi = det_to_obj.empty() ? static_cast<int>(di)
                                : (di < det_to_obj.size() ? det_to_obj[di] : -1);
    if (oi < 0 || oi >= static_cast<int>(hypothesis.objects.size())) continue;
    const SceneObject& obj = hypothesis.objects[oi];
    if (!has_canonical_orientation(obj.cls)) continue;
    Vec2 rel = obj.position - hypothesis.camera.position;
    double dist = rel.norm();
    if (dist < 1e-9) continue;
    double bearing = wrap_degrees(rad_to_deg(std::atan2(rel.y, rel.x)));
    PoseLabel pose{relative_yaw(obj.yaw_deg, bearing),
                   look_down_angle(hypothesis.camera.height, 0.0, dist)};
    const PoseLibraryEntry& entry = poses.entry(obj.model_id, PoseGrid::quantize(pose));
    total += hog_distance(room.crop_hogs[di], entry.hog);
    ++counted;
  }
  return counted > 0 ? total / counted : 0.0;
}

struct PosteriorConfig {
  ContextPriorConfig prior;
  double surface_weight = 1.0;
  double orientation_weight = 1.0;
  double prior_weight = 1.0;
};

struct PosteriorBreakdown {
  double e_s = 0.0;
  double e_o = 0.0;
  double e_ow = 0.0;
  double e_oo = 0.0;
  double log_posterior = 0.0;
};

inline PosteriorBreakdown log_posterior(const ObservedRoom& room,
                                        const SceneParameters& hypothesis,
                                        const ModelLibrary& lib, const PoseLibrary& poses,
                                        const PosteriorConfig& cfg = {},
                                        const std::vector<int>& det_to_obj = {}) {
  PosteriorBreakdown b;
  b.e_s = surface_cost(room, hypothesis, lib);
  b.e_o = orientation_cost(room, hypothesis, poses, det_to_obj);
  b.e_ow = context_cost_object_wall(hypothesis, lib, cfg.prior);
  b.e_oo = context_cost_object_object(hypothesis, lib);
  b.log_posterior = -(cfg.surface_weight * b.e_s + cfg.orientation_weight * b.e_o +
                      cfg.prior_weight * (b.e_ow + cfg.prior.mu * b.e_oo));
  return b;
}

}  // namespace panolayout
