#pragma once

// Top-view SVG floor maps: wall polygon, object footprints with facing
// arrows, camera marker, and a one-meter scale bar.  Output text is fully
// deterministic for a given scene.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "panolayout/common.hpp"
#include "panolayout/geometry.hpp"
#include "panolayout/model_library.hpp"
#include "panolayout/scene.hpp"

namespace panolayout {

struct FloorMapOptions {
  double units_per_meter = 50.0;  // fixed meter-to-SVG-unit scale
  double margin_m = 0.8;
  const SceneParameters* reference = nullptr;  // optional overlay, drawn dashed
};

namespace detail {

inline std::string svg_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline const char* class_color(ObjectClass cls) {
  switch (cls) {
    case ObjectClass::kBed: return "#5b8dd9";
    case ObjectClass::kChair: return "#d9a05b";
    case ObjectClass::kTv: return "#9b5bd9";
    case ObjectClass::kPlant: return "#5bd98d";
  }
  return "#888888";
}

}  // namespace detail

inline std::string floor_map_svg(const SceneParameters& scene, const ModelLibrary& lib,
                                 const FloorMapOptions& opt = {}) {
  std::vector<Vec2> poly = scene.polygon();
  double min_x = poly[0].x, max_x = poly[0].x, min_y = poly[0].y, max_y = poly[0].y;
  auto grow = [&](const Vec2& p) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  };
  for (const Vec2& p : poly) grow(p);
  for (const SceneObject& obj : scene.objects)
    for (const Vec2& c : object_footprint(obj, lib).corners()) grow(c);
  if (opt.reference) {
    for (const Vec2& p : opt.reference->polygon()) grow(p);
    for (const SceneObject& obj : opt.reference->objects)
      for (const Vec2& c : object_footprint(obj, lib).corners()) grow(c);
  }
  grow(scene.camera.position);

  const double upm = opt.units_per_meter;
  const double m = opt.margin_m;
  auto sx = [&](double x) { return (x - min_x + m) * upm; };
  auto sy = [&](double y) { return (max_y - y + m) * upm; };
  const double bar_band = 0.7;  // extra bottom strip for the scale bar
  double width_u = (max_x - min_x + 2 * m) * upm;
  double height_u = (max_y - min_y + 2 * m + bar_band) * upm;

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + detail::svg_num(width_u) +
         "\" height=\"" + detail::svg_num(height_u) + "\" viewBox=\"0 0 " +
         detail::svg_num(width_u) + " " + detail::svg_num(height_u) + "\">\n";
  out +=
      "<defs><marker id=\"ah\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" "
      "orient=\"auto\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#222\"/></marker></defs>\n";

  auto polygon_points = [&](const std::vector<Vec2>& pts) {
    std::string s;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) s += " ";
      s += detail::svg_num(sx(pts[i].x)) + "," + detail::svg_num(sy(pts[i].y));
    }
    return s;
  };

  if (opt.reference) {
    out += "<polygon class=\"room-ref\" points=\"" + polygon_points(opt.reference->polygon()) +
           "\" fill=\"none\" stroke=\"#999\" stroke-width=\"2\" stroke-dasharray=\"6,4\"/>\n";
    for (const SceneObject& obj : opt.reference->objects) {
      OrientedRect r = object_footprint(obj, lib);
      out += "<g class=\"object-ref\" transform=\"translate(" + detail::svg_num(sx(r.center.x)) +
             "," + detail::svg_num(sy(r.center.y)) + ") rotate(" + detail::svg_num(-r.angle_deg) +
             ")\"><rect x=\"" + detail::svg_num(-r.depth / 2 * upm) + "\" y=\"" +
             detail::svg_num(-r.width / 2 * upm) + "\" width=\"" + detail::svg_num(r.depth * upm) +
             "\" height=\"" + detail::svg_num(r.width * upm) +
             "\" fill=\"none\" stroke=\"#999\" stroke-width=\"1.5\" "
             "stroke-dasharray=\"4,3\"/></g>\n";
    }
  }

  out += "<polygon class=\"room\" points=\"" + polygon_points(poly) +
         "\" fill=\"#f7f4ec\" stroke=\"#333\" stroke-width=\"3\"/>\n";

  for (const SceneObject& obj : scene.objects) {
    OrientedRect r = object_footprint(obj, lib);
    std::string cls = to_string(obj.cls);
    out += "<g class=\"object " + cls + "\" transform=\"translate(" +
           detail::svg_num(sx(r.center.x)) + "," + detail::svg_num(sy(r.center.y)) + ") rotate(" +
           detail::svg_num(-r.angle_deg) + ")\">";
    out += "<rect x=\"" + detail::svg_num(-r.depth / 2 * upm) + "\" y=\"" +
           detail::svg_num(-r.width / 2 * upm) + "\" width=\"" + detail::svg_num(r.depth * upm) +
           "\" height=\"" + detail::svg_num(r.width * upm) + "\" fill=\"" +
           detail::class_color(obj.cls) +
           "\" fill-opacity=\"0.55\" stroke=\"#222\" stroke-width=\"1.5\"/>";
    double arrow_len = (r.depth / 2 + 0.25) * upm;
    out += "<line class=\"facing\" x1=\"0\" y1=\"0\" x2=\"" + detail::svg_num(arrow_len) +
           "\" y2=\"0\" stroke=\"#222\" stroke-width=\"2\" marker-end=\"url(#ah)\"/>";
    out += "</g>\n";
    out += "<text x=\"" + detail::svg_num(sx(r.center.x)) + "\" y=\"" +
           detail::svg_num(sy(r.center.y) - 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" "
           "fill=\"#111\">" +
           cls + "</text>\n";
  }

  out += "<circle class=\"camera\" cx=\"" + detail::svg_num(sx(scene.camera.position.x)) +
         "\" cy=\"" + detail::svg_num(sy(scene.camera.position.y)) + "\" r=\"" +
         detail::svg_num(0.1 * upm) +
         "\" fill=\"#e03131\" stroke=\"#5c0000\" stroke-width=\"1.5\"/>\n";

  double bar_y = (max_y - min_y + 2 * m + 0.35) * upm;
  double bar_x = m * upm;
  out += "<line class=\"scalebar\" x1=\"" + detail::svg_num(bar_x) + "\" y1=\"" +
         detail::svg_num(bar_y) + "\" x2=\"" + detail::svg_num(bar_x + upm) + "\" y2=\"" +
         detail::svg_num(bar_y) + "\" stroke=\"#000\" stroke-width=\"3\"/>\n";
  out += "<text x=\"" + detail::svg_num(bar_x + upm / 2) + "\" y=\"" +
         detail::svg_num(bar_y - 6) +
         "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">1 m</text>\n";
  out += "</svg>\n";
  return out;
}

inline void write_floor_map(const std::string& path, const SceneParameters& scene,
                            const ModelLibrary& lib, const FloorMapOptions& opt = {}) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write floor map " + path);
  f << floor_map_svg(scene, lib, opt);
}

}  // namespace panolayout
