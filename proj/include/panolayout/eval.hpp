#pragma once

// Error metrics between estimated scenes and ground truth: class-constrained
// object matching, per-class position/orientation statistics, wall-height
// error, and deterministic CSV / plain-text report writers.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "panolayout/common.hpp"
#include "panolayout/scene.hpp"

namespace panolayout {

struct MatchedObject {
  int gt_index = -1;
  int est_index = -1;
  ObjectClass cls = ObjectClass::kBed;
  double position_err_m = 0.0;
  bool has_yaw = false;  // false for classes without a canonical orientation
  double yaw_err_deg = 0.0;
};

struct SceneComparison {
  std::vector<MatchedObject> matches;
  std::vector<int> missed_gt;     // ground-truth objects with no estimate
  std::vector<int> spurious_est;  // estimates matched to nothing
  double height_err_m = 0.0;      // |base_height * lambda_est - h_gt|
};

// Greedy matching: candidate pairs share a class and lie within `gate_m`
// of each other; closest pairs claim their endpoints first.
inline SceneComparison compare_scenes(const SceneParameters& gt, const SceneParameters& est,
                                      double gate_m = 1.0, double base_height = 2.5) {
  struct Cand {
    double dist;
    int gi, ei;
  };
  std::vector<Cand> cands;
  for (int gi = 0; gi < static_cast<int>(gt.objects.size()); ++gi) {
    for (int ei = 0; ei < static_cast<int>(est.objects.size()); ++ei) {
      if (gt.objects[gi].cls != est.objects[ei].cls) continue;
      double d = (gt.objects[gi].position - est.objects[ei].position).norm();
      if (d <= gate_m) cands.push_back({d, gi, ei});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.gi != b.gi) return a.gi < b.gi;
    return a.ei < b.ei;
  });

  SceneComparison cmp;
  std::vector<bool> gt_used(gt.objects.size(), false), est_used(est.objects.size(), false);
  for (const Cand& c : cands) {
    if (gt_used[c.gi] || est_used[c.ei]) continue;
    gt_used[c.gi] = est_used[c.ei] = true;
    MatchedObject m;
    m.gt_index = c.gi;
    m.est_index = c.ei;
    m.cls = gt.objects[c.gi].cls;
    m.position_err_m = c.dist;
    if (has_canonical_orientation(m.cls)) {
      m.has_yaw = true;
      m.yaw_err_deg = circular_diff_degrees(gt.objects[c.gi].yaw_deg, est.objects[c.ei].yaw_deg);
    }
    cmp.matches.push_back(m);
  }
  for (int gi = 0; gi < static_cast<int>(gt.objects.size()); ++gi)
    if (!gt_used[gi]) cmp.missed_gt.push_back(gi);
  for (int ei = 0; ei < static_cast<int>(est.objects.size()); ++ei)
    if (!est_used[ei]) cmp.spurious_est.push_back(ei);
  cmp.height_err_m = std::abs(base_height * est.lambda - gt.wall_height());
  return cmp;
}

struct MetricStats {
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;
};

inline MetricStats compute_stats(const std::vector<double>& xs) {
  MetricStats s;
  s.count = static_cast<int>(xs.size());
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / xs.size();
  double var = 0.0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(var / xs.size());
  return s;
}

struct StageReport {
  std::map<ObjectClass, MetricStats> position_cm;
  std::map<ObjectClass, MetricStats> yaw_deg;  // only classes with orientation
  MetricStats position_cm_all;
  MetricStats height_cm;
  int matched = 0;
  int missed = 0;
  int spurious = 0;
};

struct RoomRow {
  std::string id;
  int matched = 0;
  int missed = 0;
  int spurious = 0;
  double mean_position_cm = 0.0;  // over matched objects; 0 when none matched
  double height_err_cm = 0.0;
};

struct ErrorReport {
  StageReport init;
  StageReport final_stage;
  std::vector<RoomRow> init_rooms;
  std::vector<RoomRow> final_rooms;
};

struct RoomEvalInput {
  std::string id;
  SceneParameters gt;
  SceneParameters init_scene;
  SceneParameters final_scene;
};

namespace detail {

inline void accumulate_stage(const std::string& id, const SceneParameters& gt,
                             const SceneParameters& est, double gate_m, double base_height,
                             std::map<ObjectClass, std::vector<double>>& pos,
                             std::map<ObjectClass, std::vector<double>>& yaw,
                             std::vector<double>& pos_all, std::vector<double>& height,
                             StageReport& rep, std::vector<RoomRow>& rows) {
  SceneComparison cmp = compare_scenes(gt, est, gate_m, base_height);
  RoomRow row;
  row.id = id;
  row.matched = static_cast<int>(cmp.matches.size());
  row.missed = static_cast<int>(cmp.missed_gt.size());
  row.spurious = static_cast<int>(cmp.spurious_est.size());
  double room_pos_sum = 0.0;
  for (const MatchedObject& m : cmp.matches) {
    double cm = m.position_err_m * 100.0;
    pos[m.cls].push_back(cm);
    pos_all.push_back(cm);
    room_pos_sum += cm;
    if (m.has_yaw) yaw[m.cls].push_back(m.yaw_err_deg);
  }
  if (!cmp.matches.empty()) row.mean_position_cm = room_pos_sum / cmp.matches.size();
  row.height_err_cm = cmp.height_err_m * 100.0;
  height.push_back(row.height_err_cm);
  rep.matched += row.matched;
  rep.missed += row.missed;
  rep.spurious += row.spurious;
  rows.push_back(row);
}

inline void finalize_stage(std::map<ObjectClass, std::vector<double>>& pos,
                           std::map<ObjectClass, std::vector<double>>& yaw,
                           std::vector<double>& pos_all, std::vector<double>& height,
                           StageReport& rep) {
  for (auto& [cls, xs] : pos) rep.position_cm[cls] = compute_stats(xs);
  for (auto& [cls, xs] : yaw) rep.yaw_deg[cls] = compute_stats(xs);
  rep.position_cm_all = compute_stats(pos_all);
  rep.height_cm = compute_stats(height);
}

inline std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace detail

inline ErrorReport evaluate_dataset(const std::vector<RoomEvalInput>& rooms, double gate_m = 1.0,
                                    double base_height = 2.5) {
  ErrorReport rep;
  std::map<ObjectClass, std::vector<double>> ipos, iyaw, fpos, fyaw;
  std::vector<double> ipos_all, iheight, fpos_all, fheight;
  for (const RoomEvalInput& r : rooms) {
    detail::accumulate_stage(r.id, r.gt, r.init_scene, gate_m, base_height, ipos, iyaw, ipos_all,
                             iheight, rep.init, rep.init_rooms);
    detail::accumulate_stage(r.id, r.gt, r.final_scene, gate_m, base_height, fpos, fyaw, fpos_all,
                             fheight, rep.final_stage, rep.final_rooms);
  }
  detail::finalize_stage(ipos, iyaw, ipos_all, iheight, rep.init);
  detail::finalize_stage(fpos, fyaw, fpos_all, fheight, rep.final_stage);
  return rep;
}

// Long-format CSV: one row per (stage, metric, class).
inline std::string report_csv(const ErrorReport& rep) {
  std::string out = "stage,metric,class,count,mean,std\n";
  auto emit_stage = [&](const char* stage, const StageReport& s) {
    for (ObjectClass cls : all_object_classes()) {
      auto it = s.position_cm.find(cls);
      MetricStats st = it == s.position_cm.end() ? MetricStats{} : it->second;
      out += std::string(stage) + ",position_cm," + to_string(cls) + "," +
             std::to_string(st.count) + "," + detail::fmt(st.mean) + "," +
             detail::fmt(st.stddev) + "\n";
    }
    for (ObjectClass cls : all_object_classes()) {
      if (!has_canonical_orientation(cls)) continue;
      auto it = s.yaw_deg.find(cls);
      MetricStats st = it == s.yaw_deg.end() ? MetricStats{} : it->second;
      out += std::string(stage) + ",orientation_deg," + to_string(cls) + "," +
             std::to_string(st.count) + "," + detail::fmt(st.mean) + "," +
             detail::fmt(st.stddev) + "\n";
    }
    out += std::string(stage) + ",position_cm,all," + std::to_string(s.position_cm_all.count) +
           "," + detail::fmt(s.position_cm_all.mean) + "," + detail::fmt(s.position_cm_all.stddev) +
           "\n";
    out += std::string(stage) + ",wall_height_cm,all," + std::to_string(s.height_cm.count) + "," +
           detail::fmt(s.height_cm.mean) + "," + detail::fmt(s.height_cm.stddev) + "\n";
    out += std::string(stage) + ",matched,all," + std::to_string(s.matched) + ",,\n";
    out += std::string(stage) + ",missed,all," + std::to_string(s.missed) + ",,\n";
    out += std::string(stage) + ",spurious,all," + std::to_string(s.spurious) + ",,\n";
  };
  emit_stage("init", rep.init);
  emit_stage("final", rep.final_stage);
  return out;
}

inline std::string rooms_csv(const ErrorReport& rep) {
  std::string out = "stage,room,matched,missed,spurious,mean_position_cm,height_err_cm\n";
  auto emit = [&](const char* stage, const std::vector<RoomRow>& rows) {
    for (const RoomRow& r : rows) {
      out += std::string(stage) + "," + r.id + "," + std::to_string(r.matched) + "," +
             std::to_string(r.missed) + "," + std::to_string(r.spurious) + "," +
             detail::fmt(r.mean_position_cm) + "," + detail::fmt(r.height_err_cm) + "\n";
    }
  };
  emit("init", rep.init_rooms);
  emit("final", rep.final_rooms);
  return out;
}

// Human-readable table; classes without an orientation metric show "-".
inline std::string report_text(const ErrorReport& rep) {
  std::string out;
  char buf[256];
  auto emit_stage = [&](const char* title, const StageReport& s) {
    out += std::string(title) + "\n";
    out += "  class   n    position (cm)        orientation (deg)\n";
    for (ObjectClass cls : all_object_classes()) {
      auto pit = s.position_cm.find(cls);
      MetricStats pst = pit == s.position_cm.end() ? MetricStats{} : pit->second;
      std::string ori = "-";
      if (has_canonical_orientation(cls)) {
        auto yit = s.yaw_deg.find(cls);
        MetricStats yst = yit == s.yaw_deg.end() ? MetricStats{} : yit->second;
        char ybuf[64];
        std::snprintf(ybuf, sizeof(ybuf), "%.2f +/- %.2f", yst.mean, yst.stddev);
        ori = ybuf;
      }
      std::snprintf(buf, sizeof(buf), "  %-7s %-4d %8.2f +/- %-8.2f %s\n", to_string(cls),
                    pst.count, pst.mean, pst.stddev, ori.c_str());
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), "  all     %-4d %8.2f +/- %-8.2f\n", s.position_cm_all.count,
                  s.position_cm_all.mean, s.position_cm_all.stddev);
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "  wall height error: %.2f +/- %.2f cm over %d rooms\n"
                  "  matched %d, missed %d, spurious %d\n",
                  s.height_cm.mean, s.height_cm.stddev, s.height_cm.count, s.matched, s.missed,
                  s.spurious);
    out += buf;
  };
  emit_stage("initialization", rep.init);
  out += "\n";
  emit_stage("final", rep.final_stage);
  return out;
}

inline nlohmann::json stage_report_to_json(const StageReport& s) {
  nlohmann::json j;
  auto stats_json = [](const MetricStats& st) {
    return nlohmann::json{{"count", st.count}, {"mean", st.mean}, {"std", st.stddev}};
  };
  for (const auto& [cls, st] : s.position_cm) j["position_cm"][to_string(cls)] = stats_json(st);
  for (const auto& [cls, st] : s.yaw_deg) j["orientation_deg"][to_string(cls)] = stats_json(st);
  j["position_cm_all"] = stats_json(s.position_cm_all);
  j["wall_height_cm"] = stats_json(s.height_cm);
  j["matched"] = s.matched;
  j["missed"] = s.missed;
  j["spurious"] = s.spurious;
  return j;
}

inline void write_report(const std::string& dir, const ErrorReport& rep) {
  std::filesystem::create_directories(dir);
  auto dump = [&](const std::string& name, const std::string& text) {
    std::ofstream f(dir + "/" + name, std::ios::binary);
    if (!f) throw IoError("cannot write " + dir + "/" + name);
    f << text;
  };
  dump("report.csv", report_csv(rep));
  dump("rooms.csv", rooms_csv(rep));
  dump("report.txt", report_text(rep));
  nlohmann::json j = {{"init", stage_report_to_json(rep.init)},
                      {"final", stage_report_to_json(rep.final_stage)}};
  dump("report.json", j.dump(2) + "\n");
}

}  // namespace panolayout
