#pragma once

// Parametric furniture models.  Each model lives in a local frame with +x as
// the facing direction, z up, and the origin at the footprint center on the
// floor.  Shapes are unions of a few primitives, enough to give each class a
// distinctive silhouette (and the orientable classes a front/back asymmetry).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "panolayout/common.hpp"
#include "panolayout/geometry.hpp"
#include "panolayout/scene.hpp"

namespace panolayout {

struct Primitive {
  enum class Type { kBox, kCylinder, kSphere };
  Type type = Type::kBox;
  Vec3 center;  // local frame
  // kBox: full extents (x, y, z); kCylinder: (radius, unused, height) with a
  // vertical axis; kSphere: (radius, unused, unused).
  Vec3 size;
};

struct ModelSpec {
  std::string id;
  ObjectClass cls = ObjectClass::kBed;
  double footprint_depth = 0.0;  // along facing (+x)
  double footprint_width = 0.0;  // across facing
  double height = 0.0;
  std::vector<Primitive> parts;
};

struct PrimitiveHit {
  double t = 0.0;
  Vec3 normal;  // outward unit normal in the local frame
};

namespace detail {

inline std::optional<PrimitiveHit> ray_box(const Vec3& o, const Vec3& d, const Vec3& center,
                                           const Vec3& size) {
  double tmin = 0.0, tmax = std::numeric_limits<double>::infinity();
  int enter_axis = -1;
  double enter_sign = 0.0;
  const double oc[3] = {o.x - center.x, o.y - center.y, o.z - center.z};
  const double dd[3] = {d.x, d.y, d.z};
  const double half[3] = {0.5 * size.x, 0.5 * size.y, 0.5 * size.z};
  for (int ax = 0; ax < 3; ++ax) {
    if (std::fabs(dd[ax]) < 1e-14) {
      if (std::fabs(oc[ax]) > half[ax]) return std::nullopt;
      continue;
    }
    double inv = 1.0 / dd[ax];
    double t0 = (-half[ax] - oc[ax]) * inv;
    double t1 = (half[ax] - oc[ax]) * inv;
    double sign = -1.0;
    if (t0 > t1) {
      std::swap(t0, t1);
      sign = 1.0;
    }
    if (t0 > tmin) {
      tmin = t0;
      enter_axis = ax;
      enter_sign = sign;
    }
    tmax = std::min(tmax, t1);
    if (tmin > tmax) return std::nullopt;
  }
  if (enter_axis < 0 || tmin <= 1e-12) return std::nullopt;  // starts inside or behind
  Vec3 n{0, 0, 0};
  if (enter_axis == 0) n.x = enter_sign;
  if (enter_axis == 1) n.y = enter_sign;
  if (enter_axis == 2) n.z = enter_sign;
  return PrimitiveHit{tmin, n};
}

inline std::optional<PrimitiveHit> ray_sphere(const Vec3& o, const Vec3& d, const Vec3& center,
                                              double radius) {
  Vec3 oc = o - center;
  double b = oc.dot(d);
  double c = oc.dot(oc) - radius * radius;
  double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  double t = -b - std::sqrt(disc);
  if (t <= 1e-12) return std::nullopt;
  Vec3 n = (o + t * d - center) / radius;
  return PrimitiveHit{t, n};
}

inline std::optional<PrimitiveHit> ray_cylinder(const Vec3& o, const Vec3& d, const Vec3& center,
                                                double radius, double height) {
  double z0 = center.z - 0.5 * height;
  double z1 = center.z + 0.5 * height;
  std::optional<PrimitiveHit> best;
  // Side surface.
  double ox = o.x - center.x, oy = o.y - center.y;
  double a = d.x * d.x + d.y * d.y;
  if (a > 1e-14) {
    double b = ox * d.x + oy * d.y;
    double c = ox * ox + oy * oy - radius * radius;
    double disc = b * b - a * c;
    if (disc >= 0.0) {
      double t = (-b - std::sqrt(disc)) / a;
      if (t > 1e-12) {
        double z = o.z + t * d.z;
        if (z >= z0 && z <= z1) {
          Vec3 n{(ox + t * d.x) / radius, (oy + t * d.y) / radius, 0.0};
          best = PrimitiveHit{t, n};
        }
      }
    }
  }
  // End caps.
  for (double cap_z : {z0, z1}) {
    if (std::fabs(d.z) < 1e-14) continue;
    double t = (cap_z - o.z) / d.z;
    if (t <= 1e-12 || (best && t >= best->t)) continue;
    double x = o.x + t * d.x - center.x;
    double y = o.y + t * d.y - center.y;
    if (x * x + y * y <= radius * radius) {
      best = PrimitiveHit{t, Vec3{0, 0, cap_z == z1 ? 1.0 : -1.0}};
    }
  }
  return best;
}

}  // namespace detail

// Nearest forward intersection with a model, in its local frame.
inline std::optional<PrimitiveHit> ray_model_hit(const ModelSpec& model, const Vec3& origin,
                                                 const Vec3& dir) {
  std::optional<PrimitiveHit> best;
  for (const Primitive& p : model.parts) {
    std::optional<PrimitiveHit> hit;
    switch (p.type) {
      case Primitive::Type::kBox:
        hit = detail::ray_box(origin, dir, p.center, p.size);
        break;
      case Primitive::Type::kCylinder:
        hit = detail::ray_cylinder(origin, dir, p.center, p.size.x, p.size.z);
        break;
      case Primitive::Type::kSphere:
        hit = detail::ray_sphere(origin, dir, p.center, p.size.x);
        break;
    }
    if (hit && (!best || hit->t < best->t)) best = hit;
  }
  return best;
}

class ModelLibrary {
 public:
  const ModelSpec& get(const std::string& id) const {
    for (const ModelSpec& m : models_) {
      if (m.id == id) return m;
    }
    throw ValidationError("unknown model id: " + id);
  }

  std::vector<const ModelSpec*> models_for_class(ObjectClass cls) const {
    std::vector<const ModelSpec*> out;
    for (const ModelSpec& m : models_) {
      if (m.cls == cls) out.push_back(&m);
    }
    return out;
  }

  const std::vector<ModelSpec>& models() const { return models_; }

  const ModelSpec& default_model(ObjectClass cls) const {
    for (const ModelSpec& m : models_) {
      if (m.cls == cls) return m;
    }
    throw ValidationError("no model for class");
  }

  void add(ModelSpec m) { models_.push_back(std::move(m)); }

  // The built-in catalog: two variants per furniture class.
  static const ModelLibrary& standard() {
    static const ModelLibrary lib = make_standard();
    return lib;
  }

 private:
  static ModelLibrary make_standard() {
    using T = Primitive::Type;
    ModelLibrary lib;
    {
      ModelSpec m{"bed_a", ObjectClass::kBed, 2.0, 1.6, 1.2, {}};
      m.parts.push_back({T::kBox, {-0.925, 0.0, 0.60}, {0.15, 1.6, 1.20}});  // headboard
      m.parts.push_back({T::kBox, {0.075, 0.0, 0.275}, {1.85, 1.6, 0.55}});  // mattress
      lib.add(m);
    }
    {
      ModelSpec m{"bed_b", ObjectClass::kBed, 1.9, 1.4, 1.05, {}};
      m.parts.push_back({T::kBox, {-0.90, 0.0, 0.525}, {0.10, 1.4, 1.05}});
      m.parts.push_back({T::kBox, {0.05, 0.0, 0.25}, {1.80, 1.4, 0.50}});
      lib.add(m);
    }
    {
      ModelSpec m{"chair_a", ObjectClass::kChair, 0.5, 0.5, 1.0, {}};
      m.parts.push_back({T::kBox, {0.0, 0.0, 0.225}, {0.50, 0.50, 0.45}});   // seat
      m.parts.push_back({T::kBox, {-0.20, 0.0, 0.725}, {0.10, 0.50, 0.55}});  // backrest
      lib.add(m);
    }
    {
      ModelSpec m{"chair_b", ObjectClass::kChair, 0.55, 0.55, 0.9, {}};
      m.parts.push_back({T::kBox, {0.0, 0.0, 0.21}, {0.55, 0.55, 0.42}});
      m.parts.push_back({T::kBox, {-0.225, 0.0, 0.66}, {0.10, 0.55, 0.48}});
      lib.add(m);
    }
    {
      ModelSpec m{"tv_a", ObjectClass::kTv, 0.30, 1.2, 0.9, {}};
      m.parts.push_back({T::kBox, {0.10, 0.0, 0.55}, {0.08, 1.20, 0.70}});  // screen
      m.parts.push_back({T::kBox, {0.0, 0.0, 0.10}, {0.10, 0.30, 0.20}});   // column
      m.parts.push_back({T::kBox, {0.0, 0.0, 0.02}, {0.30, 0.50, 0.04}});   // base
      lib.add(m);
    }
    {
      ModelSpec m{"tv_b", ObjectClass::kTv, 0.30, 0.95, 0.8, {}};
      m.parts.push_back({T::kBox, {0.10, 0.0, 0.51}, {0.08, 0.95, 0.58}});
      m.parts.push_back({T::kBox, {0.0, 0.0, 0.11}, {0.10, 0.25, 0.22}});
      m.parts.push_back({T::kBox, {0.0, 0.0, 0.02}, {0.28, 0.45, 0.04}});
      lib.add(m);
    }
    {
      ModelSpec m{"plant_a", ObjectClass::kPlant, 0.66, 0.66, 1.05, {}};
      m.parts.push_back({T::kCylinder, {0.0, 0.0, 0.175}, {0.16, 0.0, 0.35}});  // pot
      m.parts.push_back({T::kSphere, {0.0, 0.0, 0.72}, {0.33, 0.0, 0.0}});      // foliage
      lib.add(m);
    }
    {
      ModelSpec m{"plant_b", ObjectClass::kPlant, 0.56, 0.56, 0.88, {}};
      m.parts.push_back({T::kCylinder, {0.0, 0.0, 0.15}, {0.14, 0.0, 0.30}});
      m.parts.push_back({T::kSphere, {0.0, 0.0, 0.60}, {0.28, 0.0, 0.0}});
      lib.add(m);
    }
    return lib;
  }

  std::vector<ModelSpec> models_;
};

// Floor footprint of an object instance in world coordinates.
inline OrientedRect object_footprint_rect(const SceneObject& obj, const ModelSpec& m) {
  return OrientedRect{obj.position, obj.yaw_deg, m.footprint_depth, m.footprint_width};
}

inline OrientedRect object_footprint(const SceneObject& obj, const ModelLibrary& lib) {
  return object_footprint_rect(obj, lib.get(obj.model_id));
}

// World -> model-local transform for rays.
inline Vec3 world_to_model_point(const SceneObject& obj, const Vec3& p) {
  double c = std::cos(deg_to_rad(obj.yaw_deg));
  double s = std::sin(deg_to_rad(obj.yaw_deg));
  double dx = p.x - obj.position.x;
  double dy = p.y - obj.position.y;
  return {c * dx + s * dy, -s * dx + c * dy, p.z};
}

inline Vec3 world_to_model_vector(const SceneObject& obj, const Vec3& v) {
  double c = std::cos(deg_to_rad(obj.yaw_deg));
  double s = std::sin(deg_to_rad(obj.yaw_deg));
  return {c * v.x + s * v.y, -s * v.x + c * v.y, v.z};
}

}  // namespace panolayout
