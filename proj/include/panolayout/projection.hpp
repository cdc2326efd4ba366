#pragma once

// Equirectangular panorama and perspective-view mappings.
//
// Conventions: right-handed world, z up, floor at z = 0, camera on the +z
// axis.  Azimuth 0 points along +x and grows counterclockwise (toward +y);
// elevation grows upward.  Panorama column x covers azimuths
// [x*360/W, (x+1)*360/W) so the left edge of column 0 is azimuth 0; row 0
// starts at elevation +90.  Pixel centers sit at half-integer offsets.

#include <cmath>
#include <optional>
#include <vector>

#include "panolayout/common.hpp"
#include "panolayout/geometry.hpp"
#include "panolayout/image.hpp"

namespace panolayout {

struct SphericalDirection {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
};

inline Vec3 direction_to_vector(const SphericalDirection& s) {
  double a = deg_to_rad(s.azimuth_deg);
  double e = deg_to_rad(s.elevation_deg);
  double ce = std::cos(e);
  return {ce * std::cos(a), ce * std::sin(a), std::sin(e)};
}

inline SphericalDirection vector_to_direction(const Vec3& v) {
  double a = rad_to_deg(std::atan2(v.y, v.x));
  double e = rad_to_deg(std::atan2(v.z, std::sqrt(v.x * v.x + v.y * v.y)));
  return {wrap_degrees(a), e};
}

// Continuous pixel coordinates (integer coordinates address pixel centers).
inline Vec2 direction_to_pano_pixel(const SphericalDirection& s, int width, int height) {
  double px = wrap_degrees(s.azimuth_deg) / 360.0 * width - 0.5;
  double py = (90.0 - s.elevation_deg) / 180.0 * height - 0.5;
  return {px, py};
}

inline SphericalDirection pano_pixel_to_direction(double px, double py, int width, int height) {
  double a = wrap_degrees((px + 0.5) * 360.0 / width);
  double e = 90.0 - (py + 0.5) * 180.0 / height;
  return {a, e};
}

// Nearest panorama column containing the given azimuth.
inline int pano_col_of_azimuth(double azimuth_deg, int width) {
  int c = static_cast<int>(std::floor(wrap_degrees(azimuth_deg) / 360.0 * width));
  if (c >= width) c = width - 1;
  if (c < 0) c = 0;
  return c;
}

inline int pano_row_of_elevation(double elevation_deg, int height) {
  int r = static_cast<int>(std::floor((90.0 - elevation_deg) / 180.0 * height));
  if (r >= height) r = height - 1;
  if (r < 0) r = 0;
  return r;
}

// Pinhole view looking horizontally at azimuth yaw_deg.  The image right
// vector is up x forward, so image x grows with azimuth; image y grows
// downward.
struct PerspectiveView {
  double yaw_deg = 0.0;
  double fov_deg = 90.0;  // horizontal field of view
  int width = 0;
  int height = 0;

  double focal() const { return 0.5 * width / std::tan(0.5 * deg_to_rad(fov_deg)); }
  Vec3 forward() const {
    double y = deg_to_rad(yaw_deg);
    return {std::cos(y), std::sin(y), 0.0};
  }
  Vec3 right() const {
    Vec3 f = forward();
    return Vec3{0.0, 0.0, 1.0}.cross(f);
  }
};

// Direction of the ray through continuous view pixel (px, py).
inline Vec3 view_pixel_to_vector(const PerspectiveView& v, double px, double py) {
  double f = v.focal();
  double xc = (px + 0.5 - 0.5 * v.width) / f;
  double yc = (0.5 * v.height - (py + 0.5)) / f;
  Vec3 dir = v.forward() + xc * v.right() + yc * Vec3{0.0, 0.0, 1.0};
  return dir.normalized();
}

inline SphericalDirection view_pixel_to_direction(const PerspectiveView& v, double px, double py) {
  return vector_to_direction(view_pixel_to_vector(v, px, py));
}

// Projects a direction into the view.  Returns continuous pixel coordinates,
// or nullopt when the direction lies at or behind the image plane.
inline std::optional<Vec2> direction_to_view_pixel(const PerspectiveView& v, const Vec3& dir) {
  double along = dir.dot(v.forward());
  if (along <= 1e-12) return std::nullopt;
  double f = v.focal();
  double xc = dir.dot(v.right()) / along;
  double yc = dir.z / along;
  double px = xc * f + 0.5 * v.width - 0.5;
  double py = 0.5 * v.height - yc * f - 0.5;
  return Vec2{px, py};
}

inline std::optional<Vec2> direction_to_view_pixel(const PerspectiveView& v,
                                                   const SphericalDirection& s) {
  return direction_to_view_pixel(v, direction_to_vector(s));
}

// Six horizontal views, 60 degrees apart (90 degree fov, so 30 degree
// overlap between neighbors).  Focal length matches the panorama's
// pixels-per-radian at the equator; the vertical extent reaches about
// +/-70 degrees so floor and ceiling boundaries of nearby walls stay in
// frame.
inline std::vector<PerspectiveView> make_layout_views(int pano_width, int pano_height) {
  (void)pano_height;
  double f = pano_width / (2.0 * kPi);
  int w = 2 * static_cast<int>(std::lround(f));  // 2 * f * tan(45 deg)
  int h = 2 * static_cast<int>(std::lround(f * std::tan(deg_to_rad(70.0))));
  std::vector<PerspectiveView> views;
  for (int i = 0; i < 6; ++i) {
    views.push_back(PerspectiveView{60.0 * i, 90.0, w, h});
  }
  return views;
}

// Samples a label panorama into a perspective view with nearest-neighbor
// lookups.
inline LabelImage sample_view_labels(const LabelImage& pano, const PerspectiveView& view) {
  LabelImage out(view.width, view.height);
  for (int y = 0; y < view.height; ++y) {
    for (int x = 0; x < view.width; ++x) {
      SphericalDirection s = view_pixel_to_direction(view, x, y);
      int col = pano_col_of_azimuth(s.azimuth_deg, pano.width);
      int row = pano_row_of_elevation(s.elevation_deg, pano.height);
      out.at(x, y) = pano.at(col, row);
    }
  }
  return out;
}

// Intersects the ray through the camera with the horizontal plane z =
// plane_z.  Requires the ray to point toward the plane.
inline Vec2 backproject_to_plane(const SphericalDirection& s, double camera_height,
                                 double plane_z) {
  Vec3 d = direction_to_vector(s);
  double dz = plane_z - camera_height;
  if (d.z * dz <= 1e-12) throw EstimationError("backproject_to_plane: ray misses plane");
  double t = dz / d.z;
  return {d.x * t, d.y * t};
}

}  // namespace panolayout
