#pragma once

// Object detections on the panorama: axis-aligned pixel boxes (wrapping the
// azimuth seam when x0 > x1), synthesis from rendered ground truth, noise
// injection, masks, and JSON I/O.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "panolayout/common.hpp"
#include "panolayout/image.hpp"
#include "panolayout/model_library.hpp"
#include "panolayout/random.hpp"
#include "panolayout/renderer.hpp"
#include "panolayout/scene.hpp"

namespace panolayout {

struct Detection {
  ObjectClass cls = ObjectClass::kBed;
  // Inclusive pixel bounds; x0 > x1 means the box crosses the azimuth seam.
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double score = 1.0;

  bool wraps() const { return x0 > x1; }

  double center_col(int pano_width) const {
    if (!wraps()) return 0.5 * (x0 + x1);
    double c = 0.5 * (x0 + x1 + pano_width);
    if (c >= pano_width) c -= pano_width;
    return c;
  }

  // Azimuth of the box center.
  double bearing_deg(int pano_width) const {
    return wrap_degrees((center_col(pano_width) + 0.5) * 360.0 / pano_width);
  }

  // Column membership respecting the seam.
  bool contains_col(int x) const {
    return wraps() ? (x >= x0 || x <= x1) : (x >= x0 && x <= x1);
  }
};

// One exact detection per visible object (silhouette bounding box), in
// ground-truth object order; invisible objects are skipped.  Returns the box
// list and, for each box, the index of the source object.
struct SilhouetteBoxes {
  std::vector<Detection> detections;
  std::vector<int> source_object;
};

inline SilhouetteBoxes exact_detections(const SceneParameters& scene, const ModelLibrary& lib,
                                        int width, int height, int min_pixels = 12) {
  SceneRender layout = render_layout(scene, width, height);
  Image<int> ids = render_instance_map(scene, lib, layout.depth);
  SilhouetteBoxes out;
  for (std::size_t oi = 0; oi < scene.objects.size(); ++oi) {
    std::vector<bool> col_hit(width, false);
    int y_min = height, y_max = -1, pixels = 0;
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        if (ids.at(x, y) != static_cast<int>(oi)) continue;
        col_hit[x] = true;
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
        ++pixels;
      }
    }
    if (pixels < min_pixels) continue;
    // Column span: complement of the longest empty run (cyclic).
    int best_gap_len = -1, best_gap_start = 0;
    int run_start = -1;
    for (int x = 0; x < 2 * width; ++x) {
      bool empty = !col_hit[x % width];
      if (empty && run_start < 0) run_start = x;
      if ((!empty || x == 2 * width - 1) && run_start >= 0) {
        int run_end = empty ? x : x - 1;
        int len = std::min(run_end - run_start + 1, width);
        if (run_start < width && len > best_gap_len) {
          best_gap_len = len;
          best_gap_start = run_start;
        }
        run_start = -1;
      }
    }
    Detection d;
    d.cls = scene.objects[oi].cls;
    if (best_gap_len <= 0) {  // all columns occupied
      d.x0 = 0;
      d.x1 = width - 1;
    } else {
      d.x0 = (best_gap_start + best_gap_len) % width;
      d.x1 = (best_gap_start - 1 + width) % width;
    }
    d.y0 = y_min;
    d.y1 = y_max;
    d.score = 1.0;
    out.detections.push_back(d);
    out.source_object.push_back(static_cast<int>(oi));
  }
  return out;
}

// Adds independent Gaussian jitter to each box edge.  Non-wrapping boxes
// keep x0 <= x1; y stays within the image.
inline std::vector<Detection> jitter_detections(const std::vector<Detection>& dets,
                                                double sigma_px, int width, int height,
                                                Rng& rng) {
  std::vector<Detection> out;
  out.reserve(dets.size());
  for (const Detection& d : dets) {
    Detection j = d;
    bool wrapped = d.wraps();
    j.x0 = d.x0 + rng.normal(0.0, sigma_px);
    j.x1 = d.x1 + rng.normal(0.0, sigma_px);
    j.y0 = std::clamp(d.y0 + rng.normal(0.0, sigma_px), 0.0, height - 1.0);
    j.y1 = std::clamp(d.y1 + rng.normal(0.0, sigma_px), 0.0, height - 1.0);
    if (j.y0 > j.y1) std::swap(j.y0, j.y1);
    if (!wrapped) {
      j.x0 = std::clamp(j.x0, 0.0, width - 1.0);
      j.x1 = std::clamp(j.x1, 0.0, width - 1.0);
      if (j.x0 > j.x1) std::swap(j.x0, j.x1);
    } else {
      j.x0 = std::fmod(std::fmod(j.x0, width) + width, width);
      j.x1 = std::fmod(std::fmod(j.x1, width) + width, width);
    }
    out.push_back(j);
  }
  return out;
}

// 0/255 mask of all detection boxes.
inline LabelImage detection_box_mask(const std::vector<Detection>& dets, int width, int height) {
  LabelImage mask(width, height, 0);
  for (const Detection& d : dets) {
    int ya = std::max(0, static_cast<int>(std::floor(d.y0)));
    int yb = std::min(height - 1, static_cast<int>(std::ceil(d.y1)));
    int xa = static_cast<int>(std::floor(d.x0));
    int xb = static_cast<int>(std::ceil(d.x1));
    if (d.wraps()) xb += width;
    for (int xi = xa; xi <= xb; ++xi) {
      int x = ((xi % width) + width) % width;
      for (int y = ya; y <= yb; ++y) mask.at(x, y) = 255;
    }
  }
  return mask;
}

inline nlohmann::json detections_to_json(const std::vector<Detection>& dets) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Detection& d : dets) {
    arr.push_back({{"class", to_string(d.cls)},
                   {"x0", d.x0},
                   {"y0", d.y0},
                   {"x1", d.x1},
                   {"y1", d.y1},
                   {"score", d.score}});
  }
  return arr;
}

inline std::vector<Detection> detections_from_json(const nlohmann::json& arr) {
  std::vector<Detection> dets;
  try {
    for (const auto& row : arr) {
      Detection d;
      d.cls = object_class_from_string(row.at("class").get<std::string>());
      d.x0 = row.at("x0").get<double>();
      d.y0 = row.at("y0").get<double>();
      d.x1 = row.at("x1").get<double>();
      d.y1 = row.at("y1").get<double>();
      d.score = row.at("score").get<double>();
      dets.push_back(d);
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("detections json: ") + e.what());
  }
  return dets;
}

inline void save_detections(const std::string& path, const std::vector<Detection>& dets) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << detections_to_json(dets).dump(2) << "\n";
}

inline std::vector<Detection> load_detections(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open for reading: " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("detections json: ") + e.what());
  }
  return detections_from_json(j);
}

}  // namespace panolayout
