#pragma once

// Scene parameterization: camera, global scale, Manhattan wall loop, and
// furniture objects, plus JSON (de)serialization.

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "panolayout/common.hpp"
#include "panolayout/geometry.hpp"

namespace panolayout {

enum class ObjectClass { kBed, kChair, kTv, kPlant };

inline const char* to_string(ObjectClass c) {
  switch (c) {
    case ObjectClass::kBed: return "bed";
    case ObjectClass::kChair: return "chair";
    case ObjectClass::kTv: return "tv";
    case ObjectClass::kPlant: return "plant";
  }
  throw ValidationError("unknown object class");
}

inline ObjectClass object_class_from_string(const std::string& s) {
  if (s == "bed") return ObjectClass::kBed;
  if (s == "chair") return ObjectClass::kChair;
  if (s == "tv") return ObjectClass::kTv;
  if (s == "plant") return ObjectClass::kPlant;
  throw ValidationError("unknown object class: " + s);
}

inline const std::vector<ObjectClass>& all_object_classes() {
  static const std::vector<ObjectClass> kClasses = {
      ObjectClass::kBed, ObjectClass::kChair, ObjectClass::kTv, ObjectClass::kPlant};
  return kClasses;
}

// Classes with a well-defined facing direction; pose estimation skips the
// rest (rotationally ambiguous shapes like plants).
inline bool has_canonical_orientation(ObjectClass c) { return c != ObjectClass::kPlant; }

struct CameraModel {
  Vec2 position{0.0, 0.0};
  double height = 1.70;
};

// One wall segment of the Manhattan loop.  Endpoints run counterclockwise
// around the room, so the interior lies to the left of a -> b and the inward
// normal is the edge direction rotated +90 degrees.
struct Wall {
  Vec2 a;
  Vec2 b;
  double height = 2.5;

  Vec2 center() const { return (a + b) * 0.5; }
  double length() const { return (b - a).norm(); }
  Vec2 direction() const { return (b - a).normalized(); }
  Vec2 inward_normal() const { return direction().perp(); }
  // 0: runs along x (normal along y); 1: runs along y (normal along x).
  int axis() const { return std::fabs(b.x - a.x) >= std::fabs(b.y - a.y) ? 0 : 1; }
  double orientation_deg() const {
    return wrap_degrees(rad_to_deg(std::atan2(b.y - a.y, b.x - a.x)));
  }
};

struct SceneObject {
  ObjectClass cls = ObjectClass::kBed;
  Vec2 position;       // footprint center on the floor
  double yaw_deg = 0;  // facing direction (world azimuth)
  std::string model_id;

  Vec2 facing() const { return unit_from_degrees(yaw_deg); }
};

struct SceneParameters {
  CameraModel camera;
  double lambda = 1.0;  // global scale (wall height = 2.5 * lambda)
  std::vector<Wall> walls;
  std::vector<SceneObject> objects;

  std::vector<Vec2> polygon() const {
    std::vector<Vec2> poly;
    poly.reserve(walls.size());
    for (const Wall& w : walls) poly.push_back(w.a);
    return poly;
  }

  double wall_height() const {
    return walls.empty() ? 0.0 : walls.front().height;
  }
};

// Checks the structural invariants of a scene: at least four walls forming a
// closed, simple, counterclockwise, axis-aligned loop with equal heights, the
// camera strictly inside, and a positive scale.  Object placement relative to
// the walls is checked separately because sampling intermediates may violate
// it.
inline void validate_scene_geometry(const SceneParameters& s, double eps = 1e-6) {
  if (s.lambda <= 0.0) throw ValidationError("scene: lambda must be positive");
  if (s.walls.size() < 4) throw ValidationError("scene: need at least 4 walls");
  double h0 = s.walls.front().height;
  for (std::size_t i = 0; i < s.walls.size(); ++i) {
    const Wall& w = s.walls[i];
    const Wall& next = s.walls[(i + 1) % s.walls.size()];
    if ((w.b - next.a).norm() > eps) throw ValidationError("scene: wall loop not closed");
    double dx = std::fabs(w.b.x - w.a.x);
    double dy = std::fabs(w.b.y - w.a.y);
    if (std::min(dx, dy) > eps) throw ValidationError("scene: wall not axis-aligned");
    if (std::max(dx, dy) <= eps) throw ValidationError("scene: zero-length wall");
    if (w.height <= 0.0) throw ValidationError("scene: wall height must be positive");
    if (std::fabs(w.height - h0) > eps) throw ValidationError("scene: wall heights differ");
  }
  std::vector<Vec2> poly = s.polygon();
  if (!polygon_is_simple(poly)) throw ValidationError("scene: wall loop self-intersects");
  if (polygon_signed_area(poly) <= 0.0)
    throw ValidationError("scene: wall loop must be counterclockwise");
  if (!point_in_polygon(s.camera.position, poly))
    throw ValidationError("scene: camera must lie inside the wall loop");
}

// Rescales a hypothesis to a new global scale.  Wall endpoints and object
// positions move radially about the camera while object model dimensions stay
// fixed, so a smaller scale brings walls and furniture closer to the camera
// without shrinking the furniture itself; the fixed-size furniture then
// subtends a larger image area, which is what makes the rendered comparison
// sensitive to scale.
inline SceneParameters rescale_scene(const SceneParameters& scene, double new_lambda) {
  SceneParameters out = scene;
  double ratio = new_lambda / scene.lambda;
  out.lambda = new_lambda;
  const Vec2 cam = scene.camera.position;
  for (Wall& w : out.walls) {
    w.a = cam + (w.a - cam) * ratio;
    w.b = cam + (w.b - cam) * ratio;
    w.height *= ratio;
  }
  for (SceneObject& obj : out.objects) obj.position = cam + (obj.position - cam) * ratio;
  return out;
}

// --- JSON serialization ----------------------------------------------------

inline nlohmann::json scene_to_json(const SceneParameters& s) {
  nlohmann::json j;
  j["camera"] = {{"height", s.camera.height}};
  j["lambda"] = s.lambda;
  j["walls"] = nlohmann::json::array();
  for (const Wall& w : s.walls) {
    j["walls"].push_back({{"x1", w.a.x},
                          {"y1", w.a.y},
                          {"x2", w.b.x},
                          {"y2", w.b.y},
                          {"height", w.height}});
  }
  j["objects"] = nlohmann::json::array();
  for (const SceneObject& o : s.objects) {
    j["objects"].push_back({{"class", to_string(o.cls)},
                            {"x", o.position.x},
                            {"y", o.position.y},
                            {"yaw_deg", o.yaw_deg},
                            {"model_id", o.model_id}});
  }
  return j;
}

inline SceneParameters scene_from_json(const nlohmann::json& j) {
  SceneParameters s;
  try {
    s.camera.height = j.at("camera").at("height").get<double>();
    s.lambda = j.at("lambda").get<double>();
    for (const auto& jw : j.at("walls")) {
      Wall w;
      w.a = {jw.at("x1").get<double>(), jw.at("y1").get<double>()};
      w.b = {jw.at("x2").get<double>(), jw.at("y2").get<double>()};
      w.height = jw.at("height").get<double>();
      s.walls.push_back(w);
    }
    for (const auto& jo : j.at("objects")) {
      SceneObject o;
      o.cls = object_class_from_string(jo.at("class").get<std::string>());
      o.position = {jo.at("x").get<double>(), jo.at("y").get<double>()};
      o.yaw_deg = jo.at("yaw_deg").get<double>();
      o.model_id = jo.at("model_id").get<std::string>();
      s.objects.push_back(o);
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("scene json: ") + e.what());
  }
  return s;
}

inline void save_scene(const std::string& path, const SceneParameters& s) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << scene_to_json(s).dump(2) << "\n";
  if (!f) throw IoError("write failed: " + path);
}

inline SceneParameters load_scene(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open for reading: " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("scene json: ") + e.what());
  }
  return scene_from_json(j);
}

}  // namespace panolayout
