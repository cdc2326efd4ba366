#pragma once

// Initial layout estimation from an observed orientation panorama:
// perspective view extraction, per-column floor boundary backprojection,
// ring alignment of the per-view point clouds, Manhattan wall fitting, and
// wall-height normalization.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "panolayout/common.hpp"
#include "panolayout/detection.hpp"
#include "panolayout/geometry.hpp"
#include "panolayout/image.hpp"
#include "panolayout/model_library.hpp"
#include "panolayout/projection.hpp"
#include "panolayout/scene.hpp"

namespace panolayout {

struct ViewCloud {
  int view_index = 0;
  std::vector<Vec2> points;    // metric floor points (camera at origin)
  std::vector<int> pano_cols;  // provenance: panorama column per point
};

// Per-column wall-floor boundary points of one perspective view, metrically
// backprojected at the camera height.  Columns listed in skip_pano_cols
// (e.g. covered by detections) and columns without a floor label below the
// horizon are dropped.  A boundary pixel must be backed by a second floor
// pixel directly below it, and points beyond max_distance are discarded:
// label-noise clusters that survive the mode filter otherwise backproject
// near the horizon to spurious points tens of meters out.
inline ViewCloud extract_floor_boundary(const LabelImage& view_labels, const PerspectiveView& view,
                                        double camera_height, int pano_width,
                                        const std::vector<bool>& skip_pano_cols = {},
                                        double max_distance = 12.0) {
  ViewCloud cloud;
  int horizon = view_labels.height / 2;
  for (int x = 0; x < view_labels.width; ++x) {
    int found = -1;
    for (int y = horizon; y < view_labels.height; ++y) {
      if (view_labels.at(x, y) == kLabelFloorCeil) {
        found = y;
        break;
      }
    }
    if (found < 0) continue;
    if (found + 1 < view_labels.height && view_labels.at(x, found + 1) != kLabelFloorCeil)
      continue;
    Vec3 dir = view_pixel_to_vector(view, x, found);
    if (dir.z >= -1e-6) continue;
    SphericalDirection s = vector_to_direction(dir);
    int pano_col = pano_col_of_azimuth(s.azimuth_deg, pano_width);
    if (!skip_pano_cols.empty() && skip_pano_cols[pano_col]) continue;
    double t = camera_height / -dir.z;
    Vec2 p{dir.x * t, dir.y * t};
    if (p.norm() > max_distance) continue;
    cloud.points.push_back(p);
    cloud.pano_cols.push_back(pano_col);
  }
  return cloud;
}

struct CloudCorrespondence {
  int view_a = 0, index_a = 0;
  int view_b = 0, index_b = 0;
};

// Pairs points of neighboring views that originate from the same panorama
// column (views overlap by design).
inline std::vector<CloudCorrespondence> build_ring_correspondences(
    const std::vector<ViewCloud>& clouds) {
  std::vector<CloudCorrespondence> out;
  int n = static_cast<int>(clouds.size());
  for (int a = 0; a < n; ++a) {
    int b = (a + 1) % n;
    if (b == a) continue;
    for (std::size_t ia = 0; ia < clouds[a].pano_cols.size(); ++ia) {
      for (std::size_t ib = 0; ib < clouds[b].pano_cols.size(); ++ib) {
        if (clouds[a].pano_cols[ia] == clouds[b].pano_cols[ib]) {
          out.push_back({a, static_cast<int>(ia), b, static_cast<int>(ib)});
          break;
        }
      }
    }
  }
  return out;
}

// Solves for one scale per view so corresponding points coincide, with the
// first view's scale fixed to 1: ring propagation of pairwise least-squares
// ratios for the initial guess, then one joint linear least-squares solve.
inline std::vector<double> align_view_clouds(const std::vector<ViewCloud>& clouds,
                                             const std::vector<CloudCorrespondence>& corr) {
  int n = static_cast<int>(clouds.size());
  if (n == 0) throw EstimationError("align_view_clouds: no clouds");
  std::vector<double> scales(n, 1.0);
  if (n == 1) return scales;

  // Ring propagation.
  for (int a = 0; a < n - 1; ++a) {
    int b = a + 1;
    double num = 0.0, den = 0.0;
    for (const auto& c : corr) {
      if ((c.view_a == a && c.view_b == b) || (c.view_a == b && c.view_b == a)) {
        const Vec2& pa = c.view_a == a ? clouds[a].points[c.index_a] : clouds[a].points[c.index_b];
        const Vec2& pb = c.view_a == a ? clouds[b].points[c.index_b] : clouds[b].points[c.index_a];
        num += pa.dot(pb);
        den += pb.dot(pb);
      }
    }
    scales[b] = den > 1e-12 ? scales[a] * num / den : scales[a];
  }

  // Joint refinement: minimize sum |s_a p_a - s_b p_b|^2 with s_0 = 1.
  std::vector<double> m(static_cast<std::size_t>(n - 1) * (n - 1), 0.0);
  std::vector<double> rhs(n - 1, 0.0);
  auto add = [&](int i, int j, double v) { m[static_cast<std::size_t>(i) * (n - 1) + j] += v; };
  bool any = false;
  for (const auto& c : corr) {
    const Vec2& pa = clouds[c.view_a].points[c.index_a];
    const Vec2& pb = clouds[c.view_b].points[c.index_b];
    any = true;
    int ia = c.view_a - 1, ib = c.view_b - 1;
    double aa = pa.dot(pa), bb = pb.dot(pb), ab = pa.dot(pb);
    if (ia >= 0) add(ia, ia, aa);
    if (ib >= 0) add(ib, ib, bb);
    if (ia >= 0 && ib >= 0) {
      add(ia, ib, -ab);
      add(ib, ia, -ab);
    } else if (ia < 0 && ib >= 0) {
      rhs[ib] += ab;
    } else if (ib < 0 && ia >= 0) {
      rhs[ia] += ab;
    }
  }
  if (!any) throw EstimationError("align_view_clouds: no correspondences");
  try {
    std::vector<double> sol = solve_linear_system(m, rhs);
    for (int i = 1; i < n; ++i) scales[i] = sol[i - 1];
  } catch (const EstimationError&) {
    // Keep the ring-propagated scales when the joint system is rank
    // deficient (e.g. a view without correspondences).
  }
  return scales;
}

struct WallFitOptions {
  double inlier_tol = 0.03;     // point-to-line inlier distance
  int max_iterations = 50;      // boundary reassignment rounds
  double merge_tol = 0.12;      // same-line merge distance for adjacent runs
  int min_run_points = 2;
  double base_height = 2.5;
  double segment_gap_deg = 10.0;  // azimuth gap that splits the boundary
};

namespace detail {

struct WallRun {
  int axis = 0;  // 0: wall along x (line y = c); 1: wall along y (line x = c)
  double c = 0.0;
  std::vector<int> points;  // indices into the azimuth-sorted order
  int segment = 0;          // azimuth segment the run belongs to
};

inline double run_coordinate(const Vec2& p, int axis) { return axis == 0 ? p.y : p.x; }

}  // namespace detail

// Fits an axis-aligned wall loop around the camera (at the origin) to the
// merged boundary points.  Points are processed in azimuth order and split
// into contiguous segments wherever a large azimuth gap separates them
// (columns masked by detections leave such gaps); secants, majority votes
// and runs never cross a gap.  Contiguous runs vote for an axis via local
// secants, runs are refit and their boundaries reassigned for a few rounds,
// adjacent same-line runs merge (rejoining a wall interrupted by a masked
// gap), and adjacent parallel runs on different lines get a connecting
// perpendicular wall (an occluded wall).  Consecutive line intersections
// give the corner loop.
inline std::vector<Wall> fit_walls(const std::vector<Vec2>& points,
                                   const WallFitOptions& opts = {}) {
  if (static_cast<int>(points.size()) < 8)
    throw EstimationError("fit_walls: too few boundary points");

  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double aa = std::atan2(points[a].y, points[a].x);
    double ab = std::atan2(points[b].y, points[b].x);
    if (aa != ab) return aa < ab;
    return a < b;
  });

  // Azimuth step between consecutive sorted points, in [0, 360).
  auto gap_deg = [&](int pa, int pb) {
    double g = rad_to_deg(std::atan2(points[pb].y, points[pb].x) -
                          std::atan2(points[pa].y, points[pa].x));
    if (g < 0) g += 360.0;
    return g;
  };

  // Rotate the order so it starts just after a masked gap, if there is one;
  // the boundary is then a linear sequence of segments instead of a full
  // cycle.  Segments smaller than a run are unusable and dropped.
  bool cyclic = true;
  {
    int m = static_cast<int>(order.size());
    for (int i = 0; i < m; ++i) {
      if (gap_deg(order[i], order[(i + 1) % m]) > opts.segment_gap_deg) {
        std::rotate(order.begin(), order.begin() + (i + 1) % m, order.end());
        cyclic = false;
        break;
      }
    }
  }
  // Inclusive [begin, end] positions of each segment in the current order.
  auto segment_bounds = [&](const std::vector<int>& ord) {
    std::vector<std::pair<int, int>> segs;
    int m = static_cast<int>(ord.size());
    int b = 0;
    for (int i = 0; i < m; ++i) {
      if (i == m - 1 || gap_deg(ord[i], ord[i + 1]) > opts.segment_gap_deg) {
        segs.push_back({b, i});
        b = i + 1;
      }
    }
    return segs;
  };
  std::vector<std::pair<int, int>> segs;
  if (cyclic) {
    segs.push_back({0, static_cast<int>(order.size()) - 1});
  } else {
    for (bool dropped = true; dropped;) {
      dropped = false;
      segs = segment_bounds(order);
      for (const auto& [b, e] : segs) {
        if (e - b + 1 < opts.min_run_points) {
          order.erase(order.begin() + b, order.begin() + e + 1);
          dropped = true;
          break;
        }
      }
    }
    if (static_cast<int>(order.size()) < 8)
      throw EstimationError("fit_walls: too few boundary points");
  }
  const int n = static_cast<int>(order.size());
  auto pt = [&](int sorted_idx) -> const Vec2& { return points[order[sorted_idx]]; };
  std::vector<int> seg_of(n);
  for (std::size_t s = 0; s < segs.size(); ++s)
    for (int i = segs[s].first; i <= segs[s].second; ++i) seg_of[i] = static_cast<int>(s);

  // Axis vote per point from the local secant direction, then a majority
  // filter so isolated noise flips cannot split a wall in two.  Windows are
  // clamped to the point's segment (cyclic when the boundary is unbroken).
  const int win = std::clamp(n / 72, 2, 8);
  std::vector<int> axis(n);
  for (const auto& [b, e] : segs) {
    for (int i = b; i <= e; ++i) {
      int lo = cyclic ? (i - win + n) % n : std::max(b, i - win);
      int hi = cyclic ? (i + win) % n : std::min(e, i + win);
      Vec2 t = pt(hi) - pt(lo);
      axis[i] = std::fabs(t.x) >= std::fabs(t.y) ? 0 : 1;
    }
  }
  std::vector<int> smoothed(n);
  for (const auto& [b, e] : segs) {
    for (int i = b; i <= e; ++i) {
      int ones = 0, count = 0;
      for (int k = -win; k <= win; ++k) {
        int j = i + k;
        if (cyclic) {
          j = (j + n) % n;
        } else if (j < b || j > e) {
          continue;
        }
        ones += axis[j];
        ++count;
      }
      smoothed[i] = 2 * ones > count ? 1 : (2 * ones < count ? 0 : axis[i]);
    }
  }
  axis = smoothed;

  // Initial contiguous runs; a run breaks at axis changes and at segment
  // boundaries.
  std::vector<detail::WallRun> runs;
  if (cyclic) {
    int start = 0;
    while (start < n && axis[start] == axis[(start + n - 1) % n]) ++start;
    if (start == n) throw EstimationError("fit_walls: single direction only");
    int i = start;
    do {
      detail::WallRun run;
      run.axis = axis[i];
      run.segment = 0;
      int j = i;
      while (axis[j % n] == run.axis && static_cast<int>(run.points.size()) < n) {
        run.points.push_back(j % n);
        ++j;
        if (j % n == start) break;
      }
      runs.push_back(std::move(run));
      i = j % n;
    } while (i != start);
  } else {
    for (int i = 0; i < n; ++i) {
      if (runs.empty() || runs.back().axis != axis[i] ||
          runs.back().segment != seg_of[i]) {
        runs.push_back({axis[i], 0.0, {}, seg_of[i]});
      }
      runs.back().points.push_back(i);
    }
  }

  auto refit = [&](detail::WallRun& r) {
    double s = 0.0;
    for (int idx : r.points) s += detail::run_coordinate(pt(idx), r.axis);
    r.c = s / static_cast<double>(r.points.size());
  };
  for (auto& r : runs) refit(r);

  // Boundary reassignment rounds; points only move between runs of the same
  // segment (never across a masked gap).
  for (int iter = 0; iter < opts.max_iterations; ++iter) {
    bool moved = false;
    for (std::size_t r = 0; r < runs.size() && runs.size() > 2; ++r) {
      if (!cyclic && r + 1 == runs.size()) continue;
      detail::WallRun& cur = runs[r];
      detail::WallRun& nxt = runs[(r + 1) % runs.size()];
      if (cur.segment != nxt.segment) continue;
      // Move trailing points of cur to nxt while they fit nxt's line better.
      while (cur.points.size() > 1) {
        const Vec2& p = pt(cur.points.back());
        double dc = std::fabs(detail::run_coordinate(p, cur.axis) - cur.c);
        double dn = std::fabs(detail::run_coordinate(p, nxt.axis) - nxt.c);
        if (dn < dc) {
          nxt.points.insert(nxt.points.begin(), cur.points.back());
          cur.points.pop_back();
          moved = true;
        } else {
          break;
        }
      }
      // And leading points of nxt to cur.
      while (nxt.points.size() > 1) {
        const Vec2& p = pt(nxt.points.front());
        double dn = std::fabs(detail::run_coordinate(p, nxt.axis) - nxt.c);
        double dc = std::fabs(detail::run_coordinate(p, cur.axis) - cur.c);
        if (dc < dn) {
          cur.points.push_back(nxt.points.front());
          nxt.points.erase(nxt.points.begin());
          moved = true;
        } else {
          break;
        }
      }
    }
    for (auto& r : runs) refit(r);
    if (!moved) break;
  }

  // Drop undersized runs, giving their points to the better neighbor line.
  for (std::size_t r = 0; r < runs.size();) {
    if (static_cast<int>(runs[r].points.size()) >= opts.min_run_points) {
      ++r;
      continue;
    }
    if (runs.size() <= 3) throw EstimationError("fit_walls: degenerate run structure");
    detail::WallRun& prev = runs[(r + runs.size() - 1) % runs.size()];
    detail::WallRun& next = runs[(r + 1) % runs.size()];
    for (int idx : runs[r].points) {
      double dp = std::fabs(detail::run_coordinate(pt(idx), prev.axis) - prev.c);
      double dn = std::fabs(detail::run_coordinate(pt(idx), next.axis) - next.c);
      if (dp <= dn) prev.points.push_back(idx); else next.points.insert(next.points.begin(), idx);
    }
    runs.erase(runs.begin() + r);
    r = 0;  // neighbor identities changed; restart scan
    for (auto& rr : runs) refit(rr);
  }

  // Merge cyclically adjacent runs on the same line (restart after every
  // merge to keep indices simple).
  for (bool merged = true; merged && runs.size() > 2;) {
    merged = false;
    for (std::size_t r = 0; r < runs.size(); ++r) {
      std::size_t s = (r + 1) % runs.size();
      if (s == r) break;
      if (runs[r].axis == runs[s].axis && std::fabs(runs[r].c - runs[s].c) <= opts.merge_tol) {
        runs[r].points.insert(runs[r].points.end(), runs[s].points.begin(),
                              runs[s].points.end());
        refit(runs[r]);
        runs.erase(runs.begin() + s);
        merged = true;
        break;
      }
    }
  }

  // Insert a perpendicular (occluded) wall between adjacent parallel runs on
  // different lines: the connecting line passes through the endpoint of the
  // run nearer to the camera.
  std::vector<detail::WallRun> walls_runs;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const detail::WallRun& cur = runs[r];
    const detail::WallRun& nxt = runs[(r + 1) % runs.size()];
    walls_runs.push_back(cur);
    if (cur.axis == nxt.axis) {
      const Vec2& p_end = pt(cur.points.back());
      const Vec2& p_begin = pt(nxt.points.front());
      const Vec2& anchor = p_end.norm() <= p_begin.norm() ? p_end : p_begin;
      detail::WallRun ins;
      ins.axis = 1 - cur.axis;
      ins.c = detail::run_coordinate(anchor, ins.axis);
      walls_runs.push_back(ins);
    }
  }

  if (walls_runs.size() < 4) throw EstimationError("fit_walls: fewer than 4 walls");
  // Corners from consecutive line intersections (axes alternate now).
  std::vector<Vec2> corners;
  for (std::size_t r = 0; r < walls_runs.size(); ++r) {
    const detail::WallRun& a = walls_runs[(r + walls_runs.size() - 1) % walls_runs.size()];
    const detail::WallRun& b = walls_runs[r];
    if (a.axis == b.axis) throw EstimationError("fit_walls: parallel adjacent walls remain");
    // axis 0 has line y = c, axis 1 has line x = c.
    corners.push_back(a.axis == 0 ? Vec2{b.c, a.c} : Vec2{a.c, b.c});
  }
  if (polygon_signed_area(corners) < 0.0) std::reverse(corners.begin(), corners.end());
  if (!polygon_is_simple(corners)) throw EstimationError("fit_walls: degenerate layout");
  if (!point_in_polygon(Vec2{0, 0}, corners))
    throw EstimationError("fit_walls: camera outside fitted layout");

  std::vector<Wall> walls;
  for (std::size_t r = 0; r < corners.size(); ++r) {
    walls.push_back(Wall{corners[r], corners[(r + 1) % corners.size()], opts.base_height});
  }
  return walls;
}

// Median wall height from the floor and ceiling boundaries of the panorama:
// per column the floor boundary fixes the wall distance at the known camera
// height, and the ceiling boundary elevation converts it to a height.
inline double estimate_wall_height(const LabelImage& pano, double camera_height,
                                   const std::vector<bool>& skip_cols = {}) {
  int horizon = pano.height / 2;
  std::vector<double> heights;
  for (int x = 0; x < pano.width; ++x) {
    if (!skip_cols.empty() && skip_cols[x]) continue;
    int floor_row = -1, ceil_row = -1;
    for (int y = horizon; y < pano.height; ++y) {
      if (pano.at(x, y) == kLabelFloorCeil) {
        floor_row = y;
        break;
      }
    }
    for (int y = horizon - 1; y >= 0; --y) {
      if (pano.at(x, y) == kLabelFloorCeil) {
        ceil_row = y;
        break;
      }
    }
    if (floor_row < 0 || ceil_row < 0) continue;
    double e_f = pano_pixel_to_direction(x, floor_row, pano.width, pano.height).elevation_deg;
    double e_c = pano_pixel_to_direction(x, ceil_row, pano.width, pano.height).elevation_deg;
    if (e_f >= -0.5 || e_c <= 0.5) continue;
    double d = camera_height / std::tan(deg_to_rad(-e_f));
    heights.push_back(camera_height + d * std::tan(deg_to_rad(e_c)));
  }
  if (heights.empty()) throw EstimationError("estimate_wall_height: no usable columns");
  std::sort(heights.begin(), heights.end());
  return heights[heights.size() / 2];
}

}  // namespace panolayout
