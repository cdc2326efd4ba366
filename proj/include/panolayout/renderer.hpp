#pragma once

// Synthetic rendering of scenes into equirectangular orientation-label
// panoramas, depth maps, and object masks.
//
// The layout pass works per column: one 2D ray-polygon intersection gives the
// wall distance, then each row picks the nearest of {floor, ceiling, wall}
// analytically.  Objects are rendered afterwards inside conservative angular
// bounding boxes with per-pixel ray tests against their primitives, using the
// layout depth for occlusion.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "panolayout/common.hpp"
#include "panolayout/geometry.hpp"
#include "panolayout/image.hpp"
#include "panolayout/model_library.hpp"
#include "panolayout/projection.hpp"
#include "panolayout/random.hpp"
#include "panolayout/scene.hpp"

namespace panolayout {

struct SceneRender {
  LabelImage labels;
  GrayImage depth;  // ray length in meters; +inf where no surface
};

inline constexpr float kDepthInfinity = std::numeric_limits<float>::infinity();

// Renders walls, floor and ceiling only (no objects).
inline SceneRender render_layout(const SceneParameters& scene, int width, int height) {
  SceneRender out;
  out.labels = LabelImage(width, height, kLabelNone);
  out.depth = GrayImage(width, height, kDepthInfinity);
  const double cam_h = scene.camera.height;
  const double ceil_h = scene.wall_height();
  const std::vector<Vec2> poly = scene.polygon();
  const Vec2 cam = scene.camera.position;

  for (int x = 0; x < width; ++x) {
    double azimuth = (x + 0.5) * 360.0 / width;
    Vec2 dir2 = unit_from_degrees(azimuth);
    auto hit = ray_polygon_first_hit(cam, dir2, poly);
    double d_wall = hit ? hit->t : -1.0;
    std::uint8_t wall_label = kLabelNone;
    if (hit) {
      const Wall& w = scene.walls[hit->segment_index];
      wall_label = w.axis() == 1 ? kLabelWallX : kLabelWallY;
    }
    for (int y = 0; y < height; ++y) {
      double elevation = 90.0 - (y + 0.5) * 180.0 / height;
      double te = std::tan(deg_to_rad(elevation));
      double best_d = std::numeric_limits<double>::infinity();
      std::uint8_t label = kLabelNone;
      if (d_wall > 0.0) {
        double z_w = cam_h + d_wall * te;
        if (z_w >= 0.0 && z_w <= ceil_h) {
          best_d = d_wall;
          label = wall_label;
        }
      }
      if (te < 0.0) {
        double d_f = -cam_h / te;
        if (d_f < best_d) {
          best_d = d_f;
          label = kLabelFloorCeil;
        }
      } else if (te > 0.0 && ceil_h > cam_h) {
        double d_c = (ceil_h - cam_h) / te;
        if (d_c < best_d) {
          best_d = d_c;
          label = kLabelFloorCeil;
        }
      }
      out.labels.at(x, y) = label;
      if (std::isfinite(best_d)) {
        double cos_e = std::cos(deg_to_rad(elevation));
        out.depth.at(x, y) = static_cast<float>(best_d / cos_e);
      }
    }
  }
  return out;
}

namespace detail {

struct PixelBox {
  int x0 = 0, x1 = -1;  // inclusive column range, possibly x0 > width-1 for wrap
  int y0 = 0, y1 = -1;
};

// Conservative pixel bounding box of an object's silhouette.  Columns are
// given as an unwrapped inclusive range [x0, x1]; callers take x % width.
inline std::optional<PixelBox> object_pixel_box(const SceneObject& obj, const ModelSpec& model,
                                                const CameraModel& camera, int width,
                                                int height, int margin = 2) {
  OrientedRect fp = object_footprint_rect(obj, model);
  auto corners = fp.corners();
  Vec2 rel_center = obj.position - camera.position;
  double center_az = rad_to_deg(std::atan2(rel_center.y, rel_center.x));
  double min_off = 0.0, max_off = 0.0;
  double d_min = std::numeric_limits<double>::infinity();
  double d_max = 0.0;
  for (int i = 0; i < 4; ++i) {
    Vec2 rel = corners[i] - camera.position;
    double az = rad_to_deg(std::atan2(rel.y, rel.x));
    double off = az - center_az;
    while (off > 180.0) off -= 360.0;
    while (off < -180.0) off += 360.0;
    min_off = std::min(min_off, off);
    max_off = std::max(max_off, off);
    double d_edge = point_segment_distance(camera.position, corners[i], corners[(i + 1) % 4]);
    d_min = std::min(d_min, d_edge);
    d_max = std::max(d_max, (corners[i] - camera.position).norm());
  }
  if (d_min < 1e-6) return std::nullopt;  // camera inside the footprint
  double top = model.height - camera.height;
  double bottom = -camera.height;
  double el_max = std::max(rad_to_deg(std::atan2(top, d_min)), rad_to_deg(std::atan2(top, d_max)));
  double el_min = std::min(rad_to_deg(std::atan2(bottom, d_min)),
                           rad_to_deg(std::atan2(bottom, d_max)));

  PixelBox box;
  double col_lo = wrap_degrees(center_az + min_off) / 360.0 * width;
  double span_cols = (max_off - min_off) / 360.0 * width;
  box.x0 = static_cast<int>(std::floor(col_lo)) - margin;
  box.x1 = static_cast<int>(std::ceil(col_lo + span_cols)) + margin;
  box.y0 = std::max(0, pano_row_of_elevation(el_max, height) - margin);
  box.y1 = std::min(height - 1, pano_row_of_elevation(el_min, height) + margin);
  if (box.x1 - box.x0 + 1 >= width) {
    box.x0 = 0;
    box.x1 = width - 1;
  }
  if (box.y1 < box.y0) return std::nullopt;
  return box;
}

}  // namespace detail

// Per-pixel index of the frontmost visible object (-1 where none).  Uses the
// layout depth for wall/floor occlusion.
inline Image<int> render_instance_map(const SceneParameters& scene, const ModelLibrary& lib,
                                      const GrayImage& layout_depth) {
  const int width = layout_depth.width;
  const int height = layout_depth.height;
  Image<int> ids(width, height, -1);
  GrayImage obj_depth(width, height, kDepthInfinity);
  Vec3 cam_pos{scene.camera.position.x, scene.camera.position.y, scene.camera.height};
  for (std::size_t oi = 0; oi < scene.objects.size(); ++oi) {
    const SceneObject& obj = scene.objects[oi];
    const ModelSpec& model = lib.get(obj.model_id);
    auto box = detail::object_pixel_box(obj, model, scene.camera, width, height);
    if (!box) continue;
    Vec3 local_origin = world_to_model_point(obj, cam_pos);
    for (int xi = box->x0; xi <= box->x1; ++xi) {
      int x = ((xi % width) + width) % width;
      for (int y = box->y0; y <= box->y1; ++y) {
        SphericalDirection s = pano_pixel_to_direction(x, y, width, height);
        Vec3 dir = world_to_model_vector(obj, direction_to_vector(s));
        auto hit = ray_model_hit(model, local_origin, dir);
        if (!hit) continue;
        float t = static_cast<float>(hit->t);
        if (t < layout_depth.at(x, y) && t < obj_depth.at(x, y)) {
          obj_depth.at(x, y) = t;
          ids.at(x, y) = static_cast<int>(oi);
        }
      }
    }
  }
  return ids;
}

// Binary mask (0/255) of all object pixels.
inline LabelImage render_object_mask(const SceneParameters& scene, const ModelLibrary& lib,
                                     int width, int height) {
  SceneRender layout = render_layout(scene, width, height);
  Image<int> ids = render_instance_map(scene, lib, layout.depth);
  LabelImage mask(width, height, 0);
  for (std::size_t i = 0; i < ids.data.size(); ++i) {
    if (ids.data[i] >= 0) mask.data[i] = 255;
  }
  return mask;
}

// Full observed-style panorama: layout labels with object pixels set to the
// none/masked label, depth covering both.
inline SceneRender render_scene(const SceneParameters& scene, const ModelLibrary& lib,
                                int width, int height) {
  SceneRender out = render_layout(scene, width, height);
  Image<int> ids = render_instance_map(scene, lib, out.depth);
  // Recompute object depths for the output map.
  Vec3 cam_pos{scene.camera.position.x, scene.camera.position.y, scene.camera.height};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      int oi = ids.at(x, y);
      if (oi < 0) continue;
      const SceneObject& obj = scene.objects[oi];
      const ModelSpec& model = lib.get(obj.model_id);
      SphericalDirection s = pano_pixel_to_direction(x, y, width, height);
      Vec3 dir = world_to_model_vector(obj, direction_to_vector(s));
      auto hit = ray_model_hit(model, world_to_model_point(obj, cam_pos), dir);
      if (hit) out.depth.at(x, y) = static_cast<float>(hit->t);
      out.labels.at(x, y) = kLabelNone;
    }
  }
  return out;
}

// Flips each label with the given probability to one of the other three
// codes, chosen uniformly.
inline LabelImage apply_label_noise(const LabelImage& labels, double flip_prob, Rng& rng) {
  LabelImage out = labels;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    double u = rng.uniform();
    if (u < flip_prob) {
      std::uint8_t v = out.data[i];
      int pick = rng.uniform_int(0, 2);
      std::uint8_t nv = 0;
      int seen = 0;
      for (std::uint8_t cand = 0; cand < 4; ++cand) {
        if (cand == v) continue;
        if (seen == pick) {
          nv = cand;
          break;
        }
        ++seen;
      }
      out.data[i] = nv;
    } else {
      // Keep the draw count per pixel fixed regardless of outcome.
      (void)rng.uniform_int(0, 2);
    }
  }
  return out;
}

}  // namespace panolayout
