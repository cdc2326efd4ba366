#pragma once

// Orthographic grayscale renders of furniture models at a given relative
// pose.  Used to build the pose library and the observed appearance crops,
// so both sides of any descriptor comparison come from the same code path.

#include <cmath>

#include "panolayout/common.hpp"
#include "panolayout/geometry.hpp"
#include "panolayout/image.hpp"
#include "panolayout/model_library.hpp"
#include "panolayout/pose.hpp"
#include "panolayout/random.hpp"

namespace panolayout {

struct ModelViewOptions {
  double fill = 0.8;        // fraction of the frame covered by the bounding sphere
  double offset_x = 0.0;    // framing shift, fraction of the frame
  double offset_y = 0.0;
  double noise_sigma = 0.0; // additive Gaussian pixel noise
  std::uint64_t noise_seed = 0;
};

namespace detail {

struct ModelBounds {
  Vec3 center;
  double radius = 0.0;
};

inline ModelBounds model_bounds(const ModelSpec& model) {
  double lo[3] = {1e9, 1e9, 1e9};
  double hi[3] = {-1e9, -1e9, -1e9};
  auto extend = [&](const Vec3& c, double rx, double ry, double rz) {
    lo[0] = std::min(lo[0], c.x - rx);
    hi[0] = std::max(hi[0], c.x + rx);
    lo[1] = std::min(lo[1], c.y - ry);
    hi[1] = std::max(hi[1], c.y + ry);
    lo[2] = std::min(lo[2], c.z - rz);
    hi[2] = std::max(hi[2], c.z + rz);
  };
  for (const Primitive& p : model.parts) {
    switch (p.type) {
      case Primitive::Type::kBox:
        extend(p.center, 0.5 * p.size.x, 0.5 * p.size.y, 0.5 * p.size.z);
        break;
      case Primitive::Type::kCylinder:
        extend(p.center, p.size.x, p.size.x, 0.5 * p.size.z);
        break;
      case Primitive::Type::kSphere:
        extend(p.center, p.size.x, p.size.x, p.size.x);
        break;
    }
  }
  ModelBounds b;
  b.center = {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1]), 0.5 * (lo[2] + hi[2])};
  double dx = hi[0] - lo[0], dy = hi[1] - lo[1], dz = hi[2] - lo[2];
  b.radius = 0.5 * std::sqrt(dx * dx + dy * dy + dz * dz);
  return b;
}

}  // namespace detail

// Renders the model as seen from a camera at the given relative pose: the
// viewing ray has azimuth matching pose.yaw (0 = looking at the object's
// back) and points down by pose.pitch.  Orthographic projection, fixed
// camera-frame light, Lambertian shading on black background.
inline GrayImage render_model_view(const ModelSpec& model, const PoseLabel& pose, int size,
                                   const ModelViewOptions& opts = {}) {
  if (size < 4) throw ValidationError("render_model_view: size too small");
  double yaw = deg_to_rad(pose.yaw_deg);
  double pitch = deg_to_rad(pose.pitch_deg);
  // Viewing direction (camera -> object) in the model's local frame.
  Vec3 view{std::cos(-yaw) * std::cos(pitch), std::sin(-yaw) * std::cos(pitch),
            -std::sin(pitch)};
  Vec3 up_world{0.0, 0.0, 1.0};
  Vec3 right = view.cross(up_world);
  double rn = right.norm();
  if (rn < 1e-9) right = Vec3{0.0, 1.0, 0.0}; else right = right / rn;
  Vec3 up = right.cross(view).normalized();

  detail::ModelBounds bounds = detail::model_bounds(model);
  double half_extent = bounds.radius / std::max(opts.fill, 1e-6);
  double px_size = 2.0 * half_extent / size;
  // Light fixed relative to the camera: above, slightly right and behind it.
  Vec3 light = (view * -1.0 + up * 0.8 + right * 0.4).normalized();

  GrayImage img(size, size, 0.f);
  double stand_off = bounds.radius + 5.0;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      double ix = (x + 0.5 - 0.5 * size) * px_size - opts.offset_x * 2.0 * half_extent;
      double iy = (0.5 * size - (y + 0.5)) * px_size - opts.offset_y * 2.0 * half_extent;
      Vec3 origin = bounds.center + right * ix + up * iy - view * stand_off;
      auto hit = ray_model_hit(model, origin, view);
      if (!hit) continue;
      double lambert = std::max(0.0, hit->normal.dot(light));
      img.at(x, y) = static_cast<float>(0.25 + 0.75 * lambert);
    }
  }
  if (opts.noise_sigma > 0.0) {
    Rng rng(opts.noise_seed);
    for (float& v : img.data) {
      v = static_cast<float>(v + rng.normal(0.0, opts.noise_sigma));
      if (v < 0.f) v = 0.f;
      if (v > 1.f) v = 1.f;
    }
  }
  return img;
}

}  // namespace panolayout
