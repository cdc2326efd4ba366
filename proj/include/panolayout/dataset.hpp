#pragma once

// Dataset generation and loading: ground-truth rooms, observed panoramas
// with label noise, oracle detections with box jitter, and appearance crops.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "panolayout/common.hpp"
#include "panolayout/detection.hpp"
#include "panolayout/hog.hpp"
#include "panolayout/model_library.hpp"
#include "panolayout/model_view.hpp"
#include "panolayout/png_io.hpp"
#include "panolayout/pose.hpp"
#include "panolayout/posterior.hpp"
#include "panolayout/random.hpp"
#include "panolayout/renderer.hpp"
#include "panolayout/room_generator.hpp"
#include "panolayout/scene.hpp"

namespace panolayout {

struct DatasetConfig {
  int rooms = 20;
  int pano_width = 512;
  int pano_height = 256;
  double label_flip_prob = 0.05;
  double box_jitter_px = 4.0;
  int crop_size = 96;
  std::uint64_t seed = 0;
  GeneratorConfig generator;
};

inline nlohmann::json dataset_config_to_json(const DatasetConfig& c) {
  return {{"rooms", c.rooms},
          {"pano_width", c.pano_width},
          {"pano_height", c.pano_height},
          {"label_flip_prob", c.label_flip_prob},
          {"box_jitter_px", c.box_jitter_px},
          {"crop_size", c.crop_size},
          {"seed", c.seed}};
}

inline void dataset_config_from_json(const nlohmann::json& j, DatasetConfig& c) {
  if (j.contains("rooms")) c.rooms = j.at("rooms").get<int>();
  if (j.contains("pano_width")) c.pano_width = j.at("pano_width").get<int>();
  if (j.contains("pano_height")) c.pano_height = j.at("pano_height").get<int>();
  if (j.contains("label_flip_prob")) c.label_flip_prob = j.at("label_flip_prob").get<double>();
  if (j.contains("box_jitter_px")) c.box_jitter_px = j.at("box_jitter_px").get<double>();
  if (j.contains("crop_size")) c.crop_size = j.at("crop_size").get<int>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
}

struct GeneratedRoom {
  std::string id;
  std::string template_name;
  std::uint64_t seed = 0;
  SceneParameters gt;
  LabelImage pano_clean;  // noise-free observed labels (objects as none)
  LabelImage pano;        // with label noise
  std::vector<Detection> detections;
  std::vector<int> detection_sources;  // ground-truth object index per detection
  std::vector<GrayImage> crops;        // appearance crop per detection
};

// Exact relative pose of a ground-truth object from the camera.
inline PoseLabel true_relative_pose(const SceneParameters& scene, const SceneObject& obj) {
  Vec2 rel = obj.position - scene.camera.position;
  double bearing = wrap_degrees(rad_to_deg(std::atan2(rel.y, rel.x)));
  return {relative_yaw(obj.yaw_deg, bearing),
          look_down_angle(scene.camera.height, 0.0, rel.norm())};
}

// Builds one room deterministically from (config seed, room index).
inline GeneratedRoom generate_room_data(const DatasetConfig& cfg, const ModelLibrary& lib,
                                        int room_index) {
  const auto& templates = standard_room_templates();
  const RoomTemplate& tmpl = templates[room_index % templates.size()];
  GeneratedRoom room;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "room_%03d", room_index);
  room.id = buf;
  room.template_name = tmpl.name;

  Rng seeder = Rng::stream(cfg.seed, {0xd5u, static_cast<std::uint64_t>(room_index)});
  room.seed = seeder.next_u64();
  std::uint64_t noise_seed = seeder.next_u64();
  std::uint64_t jitter_seed = seeder.next_u64();

  room.gt = generate_room(tmpl, lib, room.seed, cfg.generator);

  SceneRender render = render_scene(room.gt, lib, cfg.pano_width, cfg.pano_height);
  room.pano_clean = render.labels;
  Rng noise_rng(noise_seed);
  room.pano = apply_label_noise(room.pano_clean, cfg.label_flip_prob, noise_rng);

  SilhouetteBoxes exact = exact_detections(room.gt, lib, cfg.pano_width, cfg.pano_height);
  Rng jitter_rng(jitter_seed);
  room.detections = jitter_detections(exact.detections, cfg.box_jitter_px, cfg.pano_width,
                                      cfg.pano_height, jitter_rng);
  room.detection_sources = exact.source_object;

  for (int src : room.detection_sources) {
    const SceneObject& obj = room.gt.objects[src];
    room.crops.push_back(render_model_view(lib.get(obj.model_id),
                                           true_relative_pose(room.gt, obj), cfg.crop_size));
  }
  return room;
}

inline void write_room(const std::string& dir, const GeneratedRoom& room) {
  namespace fs = std::filesystem;
  fs::create_directories(dir + "/crops");
  save_scene(dir + "/scene_gt.json", room.gt);
  write_gray_png(dir + "/pano.png", room.pano);
  write_gray_png(dir + "/pano_clean.png", room.pano_clean);
  save_detections(dir + "/detections.json", room.detections);
  nlohmann::json crops = nlohmann::json::array();
  for (std::size_t i = 0; i < room.crops.size(); ++i) {
    char name[48];
    std::snprintf(name, sizeof(name), "crops/det_%03d.png", static_cast<int>(i));
    write_gray_png(dir + "/" + name, to_gray8(room.crops[i]));
    crops.push_back({{"index", static_cast<int>(i)}, {"path", name}});
  }
  {
    std::ofstream f(dir + "/crops.json");
    if (!f) throw IoError("cannot write crops.json in " + dir);
    f << crops.dump(2) << "\n";
  }
  nlohmann::json meta = {{"id", room.id},
                         {"template", room.template_name},
                         {"seed", room.seed},
                         {"detection_source_objects", room.detection_sources},
                         {"wall_height", room.gt.wall_height()}};
  std::ofstream f(dir + "/meta.json");
  if (!f) throw IoError("cannot write meta.json in " + dir);
  f << meta.dump(2) << "\n";
}

// Writes the full dataset: manifest plus one directory per room.
inline void generate_dataset(const DatasetConfig& cfg, const ModelLibrary& lib,
                             const std::string& out_dir, int jobs = 1) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir + "/rooms");
  std::vector<GeneratedRoom> rooms(cfg.rooms);
  parallel_for(static_cast<std::size_t>(cfg.rooms), jobs, [&](std::size_t i) {
    rooms[i] = generate_room_data(cfg, lib, static_cast<int>(i));
    write_room(out_dir + "/rooms/" + rooms[i].id, rooms[i]);
  });
  nlohmann::json manifest;
  manifest["config"] = dataset_config_to_json(cfg);
  manifest["rooms"] = nlohmann::json::array();
  for (const GeneratedRoom& r : rooms) {
    manifest["rooms"].push_back({{"id", r.id},
                                 {"template", r.template_name},
                                 {"seed", r.seed},
                                 {"objects", r.gt.objects.size()},
                                 {"detections", r.detections.size()}});
  }
  std::ofstream f(out_dir + "/manifest.json");
  if (!f) throw IoError("cannot write dataset manifest in " + out_dir);
  f << manifest.dump(2) << "\n";
}

struct LoadedRoom {
  std::string id;
  SceneParameters gt;
  ObservedRoom observed;
  std::vector<int> detection_sources;
};

inline LoadedRoom load_room(const std::string& dir) {
  LoadedRoom room;
  room.gt = load_scene(dir + "/scene_gt.json");
  LabelImage pano = read_gray_png(dir + "/pano.png");
  std::vector<Detection> dets = load_detections(dir + "/detections.json");

  std::vector<HogDescriptor> crop_hogs(dets.size());
  std::ifstream cf(dir + "/crops.json");
  if (cf) {
    nlohmann::json crops;
    try {
      cf >> crops;
    } catch (const nlohmann::json::exception& e) {
      throw IoError(std::string("crops json: ") + e.what());
    }
    for (const auto& row : crops) {
      int idx = row.at("index").get<int>();
      std::string path = row.at("path").get<std::string>();
      if (idx < 0 || idx >= static_cast<int>(crop_hogs.size()))
        throw IoError("crops json: index out of range");
      crop_hogs[idx] = hog_descriptor(to_gray_float(read_gray_png(dir + "/" + path)));
    }
  }
  room.observed = make_observed_room(std::move(pano), std::move(dets), std::move(crop_hogs));

  std::ifstream mf(dir + "/meta.json");
  if (mf) {
    nlohmann::json meta;
    try {
      mf >> meta;
      room.id = meta.value("id", std::string());
      if (meta.contains("detection_source_objects"))
        room.detection_sources = meta.at("detection_source_objects").get<std::vector<int>>();
    } catch (const nlohmann::json::exception&) {
    }
  }
  return room;
}

inline std::vector<std::string> list_room_dirs(const std::string& dataset_dir) {
  namespace fs = std::filesystem;
  std::vector<std::string> dirs;
  fs::path rooms = fs::path(dataset_dir) / "rooms";
  if (!fs::exists(rooms)) throw IoError("no rooms/ directory under " + dataset_dir);
  for (const auto& entry : fs::directory_iterator(rooms)) {
    if (entry.is_directory()) dirs.push_back(entry.path().string());
  }
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

}  // namespace panolayout
