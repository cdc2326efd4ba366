#pragma once

// Synthetic ground-truth room generation: Manhattan templates with
// closure-preserving wall-length perturbations, sampled wall heights, and
// furniture placed by rejection sampling plus context-prior hill climbing.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "panolayout/common.hpp"
#include "panolayout/context_prior.hpp"
#include "panolayout/geometry.hpp"
#include "panolayout/model_library.hpp"
#include "panolayout/random.hpp"
#include "panolayout/scene.hpp"

namespace panolayout {

struct RoomTemplate {
  std::string name;
  std::vector<Vec2> polygon;  // counterclockwise, camera at the origin inside
  struct Slot {
    ObjectClass cls;
    int min_count = 0;
    int max_count = 0;
  };
  std::vector<Slot> slots;
};

// Built-in templates.  All are star-shaped from the origin with margin, so
// every wall stays fully visible from the camera after perturbation; one
// template carries two short (0.6 m) walls to exercise the short-wall rule.
inline const std::vector<RoomTemplate>& standard_room_templates() {
  static const std::vector<RoomTemplate> kTemplates = [] {
    std::vector<RoomTemplate> t;
    t.push_back({"box",
                 {{-2.2, -1.6}, {2.0, -1.6}, {2.0, 1.8}, {-2.2, 1.8}},
                 {{ObjectClass::kBed, 1, 1},
                  {ObjectClass::kTv, 0, 1},
                  {ObjectClass::kChair, 0, 2},
                  {ObjectClass::kPlant, 0, 1}}});
    t.push_back({"lshape",
                 {{-2.5, -2.0}, {2.5, -2.0}, {2.5, 0.5}, {0.5, 0.5}, {0.5, 2.0}, {-2.5, 2.0}},
                 {{ObjectClass::kBed, 1, 1},
                  {ObjectClass::kChair, 1, 2},
                  {ObjectClass::kTv, 1, 1},
                  {ObjectClass::kPlant, 0, 1}}});
    t.push_back({"tshape",
                 {{-1.2, -2.2},
                  {1.2, -2.2},
                  {1.2, -0.6},
                  {3.0, -0.6},
                  {3.0, 1.4},
                  {-3.0, 1.4},
                  {-3.0, -0.6},
                  {-1.2, -0.6}},
                 {{ObjectClass::kBed, 1, 1},
                  {ObjectClass::kChair, 0, 1},
                  {ObjectClass::kTv, 0, 1},
                  {ObjectClass::kPlant, 0, 1}}});
    t.push_back({"zshape",
                 {{-2.5, -2.0},
                  {0.5, -2.0},
                  {0.5, -0.5},
                  {2.5, -0.5},
                  {2.5, 2.0},
                  {-0.5, 2.0},
                  {-0.5, 0.5},
                  {-2.5, 0.5}},
                 {{ObjectClass::kBed, 1, 1},
                  {ObjectClass::kChair, 0, 2},
                  {ObjectClass::kTv, 0, 1},
                  {ObjectClass::kPlant, 0, 1}}});
    t.push_back({"corner",
                 {{-2.2, -1.8}, {2.2, -1.8}, {2.2, 1.2}, {1.6, 1.2}, {1.6, 1.8}, {-2.2, 1.8}},
                 {{ObjectClass::kBed, 1, 1},
                  {ObjectClass::kChair, 0, 1},
                  {ObjectClass::kTv, 0, 1},
                  {ObjectClass::kPlant, 0, 1}}});
    return t;
  }();
  return kTemplates;
}

struct GeneratorConfig {
  double camera_height = 1.70;
  double base_height = 2.5;          // canonical wall height at lambda = 1
  double height_mean = 2.7;          // sampled true wall height
  double height_sigma = 0.2;
  double height_min = 2.05;          // keep within the scale-search range
  double height_max = 3.45;
  double perturb_range = 0.3;        // wall length perturbation, uniform +/-
  double min_perturb_length = 0.7;   // shorter walls stay exact
  double min_camera_clearance = 0.65;  // keeps floor boundaries inside the views
  double min_object_camera_dist = 0.5;
  int placement_attempts = 200;
  int refine_steps = 50;
  double refine_sigma_start = 0.3;
  double refine_sigma_end = 0.05;
  ContextPriorConfig prior;
};

namespace detail {

// True if every wall is fully visible from the origin (checked by sampling
// each wall and casting rays).
inline bool star_shaped_from_origin(const std::vector<Vec2>& poly, double step = 0.1) {
  std::size_t m = poly.size();
  for (std::size_t w = 0; w < m; ++w) {
    Vec2 a = poly[w];
    Vec2 b = poly[(w + 1) % m];
    double len = (b - a).norm();
    int samples = std::max(2, static_cast<int>(std::ceil(len / step)));
    for (int s = 0; s <= samples; ++s) {
      double u = (s + 0.5) / (samples + 1);  // stay off the corners
      Vec2 target = a + (b - a) * u;
      auto hit = ray_polygon_first_hit(Vec2{0, 0}, target.normalized(), poly);
      if (!hit || hit->segment_index != static_cast<int>(w)) return false;
      if (std::fabs(hit->t - target.norm()) > 1e-6) return false;
    }
  }
  return true;
}

inline double min_camera_wall_distance(const std::vector<Vec2>& poly) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < poly.size(); ++i) {
    d = std::min(d, point_segment_distance(Vec2{0, 0}, poly[i], poly[(i + 1) % poly.size()]));
  }
  return d;
}

// Perturbs wall lengths and restores per-axis closure by spreading the
// deficit uniformly over the perturbed walls of that axis (the least-squares
// correction under equal weighting).  Walls at or below the length threshold
// are left exactly unperturbed.
inline std::vector<Vec2> perturb_wall_lengths(const std::vector<Vec2>& poly,
                                              const GeneratorConfig& cfg, Rng& rng) {
  std::size_t m = poly.size();
  std::vector<Vec2> extents(m);
  std::vector<int> wall_axis(m);
  std::vector<bool> perturbed(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    Vec2 e = poly[(i + 1) % m] - poly[i];
    wall_axis[i] = std::fabs(e.x) >= std::fabs(e.y) ? 0 : 1;
    double len = e.norm();
    if (len > cfg.min_perturb_length) {
      double delta = rng.uniform(-cfg.perturb_range, cfg.perturb_range);
      double factor = std::max(0.1, (len + delta) / len);
      e = e * factor;
      perturbed[i] = true;
    } else {
      // Burn a draw so wall eligibility does not shift the stream.
      (void)rng.uniform(-cfg.perturb_range, cfg.perturb_range);
    }
    extents[i] = e;
  }
  for (int ax = 0; ax < 2; ++ax) {
    double deficit = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (wall_axis[i] != ax) continue;
      deficit += ax == 0 ? extents[i].x : extents[i].y;
      if (perturbed[i]) ++count;
    }
    if (std::fabs(deficit) < 1e-12) continue;
    if (count == 0) throw EstimationError("perturb_wall_lengths: cannot close loop");
    double corr = -deficit / count;
    for (std::size_t i = 0; i < m; ++i) {
      if (wall_axis[i] != ax || !perturbed[i]) continue;
      if (ax == 0) extents[i].x += corr; else extents[i].y += corr;
    }
  }
  // Rebuild and recenter on the template centroid.
  std::vector<Vec2> out(m);
  Vec2 v{0, 0};
  Vec2 mean_old{0, 0}, mean_new{0, 0};
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = v;
    v += extents[i];
    mean_old += poly[i];
    mean_new += out[i];
  }
  Vec2 shift = (mean_old - mean_new) / static_cast<double>(m);
  for (Vec2& p : out) p += shift;
  return out;
}

inline double point_rect_distance(const Vec2& p, const OrientedRect& r) {
  auto c = r.corners();
  std::vector<Vec2> poly(c.begin(), c.end());
  if (point_in_polygon(p, poly)) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) d = std::min(d, point_segment_distance(p, c[i], c[(i + 1) % 4]));
  return d;
}

}  // namespace detail

// True when the object sits fully inside the walls, clear of the camera and
// of all other objects.
inline bool object_placement_feasible(const SceneParameters& scene, std::size_t obj_index,
                                      const ModelLibrary& lib, double min_camera_dist) {
  const SceneObject& obj = scene.objects[obj_index];
  OrientedRect fp = object_footprint(obj, lib);
  std::vector<Vec2> poly = scene.polygon();
  if (footprint_outside_area(fp, poly) > 1e-9) return false;
  if (detail::point_rect_distance(scene.camera.position, fp) < min_camera_dist) return false;
  for (std::size_t j = 0; j < scene.objects.size(); ++j) {
    if (j == obj_index) continue;
    if (rect_intersection_area(fp, object_footprint(scene.objects[j], lib)) > 1e-9) return false;
  }
  return true;
}

// Generates one ground-truth room from a template.
inline SceneParameters generate_room(const RoomTemplate& tmpl, const ModelLibrary& lib,
                                     std::uint64_t seed, const GeneratorConfig& cfg = {}) {
  Rng rng = Rng::stream(seed, {0x9001});

  // Walls: perturb until the loop stays simple, star-shaped and clear of the
  // camera; fall back to the unperturbed template.
  std::vector<Vec2> poly = tmpl.polygon;
  for (int attempt = 0; attempt < 50; ++attempt) {
    std::vector<Vec2> cand = detail::perturb_wall_lengths(tmpl.polygon, cfg, rng);
    if (!polygon_is_simple(cand)) continue;
    if (polygon_signed_area(cand) <= 0.0) continue;
    if (!point_in_polygon(Vec2{0, 0}, cand)) continue;
    if (detail::min_camera_wall_distance(cand) < cfg.min_camera_clearance) continue;
    if (!detail::star_shaped_from_origin(cand)) continue;
    poly = cand;
    break;
  }

  double height = std::clamp(rng.normal(cfg.height_mean, cfg.height_sigma), cfg.height_min,
                             cfg.height_max);

  SceneParameters scene;
  scene.camera.height = cfg.camera_height;
  scene.lambda = height / cfg.base_height;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    scene.walls.push_back(Wall{poly[i], poly[(i + 1) % poly.size()], height});
  }
  validate_scene_geometry(scene);

  // Object counts per slot, then rejection-sampled placements.
  double min_x = 1e9, max_x = -1e9, min_y = 1e9, max_y = -1e9;
  for (const Vec2& p : poly) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  for (const auto& slot : tmpl.slots) {
    int count = rng.uniform_int(slot.min_count, slot.max_count);
    for (int k = 0; k < count; ++k) {
      auto models = lib.models_for_class(slot.cls);
      SceneObject obj;
      obj.cls = slot.cls;
      obj.model_id = models[rng.uniform_int(0, static_cast<int>(models.size()) - 1)]->id;
      scene.objects.push_back(obj);
      bool placed = false;
      for (int attempt = 0; attempt < cfg.placement_attempts; ++attempt) {
        SceneObject& o = scene.objects.back();
        o.position = {rng.uniform(min_x, max_x), rng.uniform(min_y, max_y)};
        o.yaw_deg = rng.uniform(0.0, 360.0);
        if (object_placement_feasible(scene, scene.objects.size() - 1, lib,
                                      cfg.min_object_camera_dist)) {
          placed = true;
          break;
        }
      }
      if (!placed) scene.objects.pop_back();  // crowded room; skip this object
    }
  }

  // Context-prior hill climbing with decaying move size; proposals must stay
  // feasible and reduce the prior energy.
  for (int step = 0; step < cfg.refine_steps; ++step) {
    double frac = cfg.refine_steps > 1 ? static_cast<double>(step) / (cfg.refine_steps - 1) : 0.0;
    double sigma = cfg.refine_sigma_start *
                   std::pow(cfg.refine_sigma_end / cfg.refine_sigma_start, frac);
    double yaw_sigma = 30.0 * sigma / cfg.refine_sigma_start;
    for (std::size_t oi = 0; oi < scene.objects.size(); ++oi) {
      ContextPrior before = evaluate_context_prior(scene, lib, cfg.prior);
      SceneObject saved = scene.objects[oi];
      scene.objects[oi].position.x += rng.normal(0.0, sigma);
      scene.objects[oi].position.y += rng.normal(0.0, sigma);
      scene.objects[oi].yaw_deg = wrap_degrees(scene.objects[oi].yaw_deg + rng.normal(0.0, yaw_sigma));
      bool ok = object_placement_feasible(scene, oi, lib, cfg.min_object_camera_dist);
      if (ok) {
        ContextPrior after = evaluate_context_prior(scene, lib, cfg.prior);
        ok = after.energy < before.energy;
      }
      if (!ok) scene.objects[oi] = saved;
    }
  }

  validate_scene_geometry(scene);
  return scene;
}

}  // namespace panolayout
