#pragma once

// Object-wall and object-object context terms and the resulting scene prior.

#include <cmath>
#include <vector>

#include "panolayout/common.hpp"
#include "panolayout/geometry.hpp"
#include "panolayout/model_library.hpp"
#include "panolayout/scene.hpp"

namespace panolayout {

struct ContextPriorConfig {
  double mu = 0.25;    // weight of the object-object term
  double nu_n = 10.0;  // weight of the wall-alignment term
  // Orientation term per object: by default 1 - |n_o . n_w| (favors facing
  // parallel or anti-parallel to the nearest wall normal); the literal
  // variant uses |n_o . n_w| directly.
  bool literal_alignment = false;
  // Weight on footprint area lying outside the wall polygon.  This keeps the
  // prior from rewarding positions beyond the walls, where the distance and
  // alignment terms alone are symmetric about the wall line.
  double containment_weight = 100.0;
};

// Area of the object's footprint lying outside the (possibly non-convex)
// room polygon.
inline double footprint_outside_area(const OrientedRect& rect,
                                     const std::vector<Vec2>& room_ccw) {
  double inside = convex_intersection_area(room_ccw, rect.corner_list());
  return std::max(0.0, rect.area() - inside);
}

// Index of the wall closest to a point (by point-to-segment distance).
inline int closest_wall_index(const Vec2& p, const std::vector<Wall>& walls) {
  if (walls.empty()) throw ValidationError("closest_wall_index: no walls");
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < walls.size(); ++i) {
    double d = point_segment_distance(p, walls[i].a, walls[i].b);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

// Object-wall energy: for every object, distance to the nearest wall plus a
// weighted orientation term against that wall's normal, plus the containment
// penalty.  Orientation is skipped for classes without a canonical facing
// direction.
inline double context_cost_object_wall(const SceneParameters& scene, const ModelLibrary& lib,
                                       const ContextPriorConfig& cfg = {}) {
  if (scene.objects.empty()) return 0.0;
  std::vector<Vec2> poly = scene.polygon();
  double total = 0.0;
  for (const SceneObject& obj : scene.objects) {
    int wi = closest_wall_index(obj.position, scene.walls);
    const Wall& w = scene.walls[wi];
    total += point_segment_distance(obj.position, w.a, w.b);
    if (has_canonical_orientation(obj.cls)) {
      double align = std::fabs(obj.facing().dot(w.inward_normal()));
      total += cfg.nu_n * (cfg.literal_alignment ? align : 1.0 - align);
    }
    if (cfg.containment_weight > 0.0) {
      total += cfg.containment_weight *
               footprint_outside_area(object_footprint(obj, lib), poly);
    }
  }
  return total;
}

// Object-object energy: sum of pairwise footprint overlap areas.
inline double context_cost_object_object(const SceneParameters& scene, const ModelLibrary& lib) {
  double total = 0.0;
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    OrientedRect ri = object_footprint(scene.objects[i], lib);
    for (std::size_t j = i + 1; j < scene.objects.size(); ++j) {
      total += rect_intersection_area(ri, object_footprint(scene.objects[j], lib));
    }
  }
  return total;
}

struct ContextPrior {
  double e_ow = 0.0;
  double e_oo = 0.0;
  double energy = 0.0;  // e_ow + mu * e_oo
  double value = 1.0;   // exp(-energy)
};

inline ContextPrior evaluate_context_prior(const SceneParameters& scene, const ModelLibrary& lib,
                                           const ContextPriorConfig& cfg = {}) {
  ContextPrior p;
  p.e_ow = context_cost_object_wall(scene, lib, cfg);
  p.e_oo = context_cost_object_object(scene, lib);
  p.energy = p.e_ow + cfg.mu * p.e_oo;
  p.value = std::exp(-p.energy);
  return p;
}

}  // namespace panolayout
