#pragma once

// Discrete relative-pose grid for object orientation estimation.  A pose is
// the object's yaw in the camera-centric frame (0 = facing directly away
// along the viewing ray) and the camera's look-down angle toward it.

#include <cmath>

#include "panolayout/common.hpp"

namespace panolayout {

struct PoseLabel {
  double yaw_deg = 0.0;    // relative yaw in [0, 360)
  double pitch_deg = 0.0;  // look-down angle in [0, 40]
};

class PoseGrid {
 public:
  static constexpr int kYawSteps = 40;
  static constexpr int kPitchSteps = 9;
  static constexpr int kLabelCount = kYawSteps * kPitchSteps;  // 360
  static constexpr double kYawStepDeg = 9.0;
  static constexpr double kPitchStepDeg = 5.0;

  static int index_of(int yaw_i, int pitch_i) { return pitch_i * kYawSteps + yaw_i; }
  static int yaw_index(int label) { return label % kYawSteps; }
  static int pitch_index(int label) { return label / kYawSteps; }

  static PoseLabel label_of(int index) {
    return {yaw_index(index) * kYawStepDeg, pitch_index(index) * kPitchStepDeg};
  }

  // Nearest grid label (cyclic in yaw, clamped in pitch).
  static int quantize(const PoseLabel& p) {
    int yi = static_cast<int>(std::lround(wrap_degrees(p.yaw_deg) / kYawStepDeg)) % kYawSteps;
    int pi = static_cast<int>(std::lround(p.pitch_deg / kPitchStepDeg));
    if (pi < 0) pi = 0;
    if (pi >= kPitchSteps) pi = kPitchSteps - 1;
    return index_of(yi, pi);
  }
};

// Pose distance: circular yaw difference plus pitch difference, in degrees.
inline double pose_distance_deg(const PoseLabel& a, const PoseLabel& b) {
  return circular_diff_degrees(a.yaw_deg, b.yaw_deg) + std::fabs(a.pitch_deg - b.pitch_deg);
}

inline double truncated_pose_distance(const PoseLabel& a, const PoseLabel& b, double gamma) {
  return std::min(pose_distance_deg(a, b), gamma);
}

// Relative yaw of an object seen along bearing_deg, and back.
inline double relative_yaw(double world_yaw_deg, double bearing_deg) {
  return wrap_degrees(world_yaw_deg - bearing_deg);
}

inline double world_yaw(double relative_yaw_deg, double bearing_deg) {
  return wrap_degrees(relative_yaw_deg + bearing_deg);
}

// Look-down angle toward an object standing on the floor at the given
// horizontal distance, clamped to the pose grid's pitch range.
inline double look_down_angle(double camera_height, double object_z, double distance) {
  double a = rad_to_deg(std::atan2(camera_height - object_z, std::max(distance, 1e-9)));
  if (a < 0.0) a = 0.0;
  if (a > 40.0) a = 40.0;
  return a;
}

}  // namespace panolayout
