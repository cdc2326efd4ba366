// Command-line front end: dataset generation, full-pipeline estimation,
// error reports, floor maps, and panorama renders.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "panolayout/panolayout.hpp"

namespace fs = std::filesystem;
using namespace panolayout;

namespace {

RunConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return RunConfig{};
  return load_run_config(path);
}

int cmd_generate(const std::string& config_path, const std::string& out_dir, int rooms,
                 std::int64_t seed, int jobs) {
  RunConfig rc = load_config_or_default(config_path);
  if (rooms > 0) rc.dataset.rooms = rooms;
  if (seed >= 0) rc.dataset.seed = static_cast<std::uint64_t>(seed);
  fs::create_directories(out_dir);
  save_run_config(out_dir + "/config.json", rc);
  generate_dataset(rc.dataset, ModelLibrary::standard(), out_dir, jobs);
  std::printf("wrote %d rooms to %s\n", rc.dataset.rooms, out_dir.c_str());
  return 0;
}

int cmd_estimate(const std::string& dataset_dir, const std::string& config_path,
                 const std::string& out_dir, int rooms, int jobs) {
  RunConfig rc = load_config_or_default(config_path);
  {
    // Prefer the configuration stored with the dataset for anything unset.
    std::ifstream f(dataset_dir + "/config.json");
    if (config_path.empty() && f) rc = load_run_config(dataset_dir + "/config.json");
  }
  const ModelLibrary& lib = ModelLibrary::standard();
  std::fprintf(stderr, "building pose library...\n");
  PoseLibrary poses = PoseLibrary::build(lib, rc.dataset.crop_size, jobs);

  std::vector<std::string> dirs = list_room_dirs(dataset_dir);
  if (rooms > 0 && static_cast<int>(dirs.size()) > rooms) dirs.resize(rooms);
  fs::create_directories(out_dir + "/rooms");

  std::vector<nlohmann::json> entries(dirs.size());
  EstimatorConfig ecfg = rc.estimator;
  ecfg.sampler.jobs = 1;  // parallelism lives at the room level
  parallel_for(dirs.size(), jobs, [&](std::size_t i) {
    std::string id = fs::path(dirs[i]).filename().string();
    std::string room_out = out_dir + "/rooms/" + id;
    fs::create_directories(room_out);
    try {
      LoadedRoom room = load_room(dirs[i]);
      RoomEstimate est = estimate_room(room.observed, lib, poses, ecfg);
      save_scene(room_out + "/init.json", est.init);
      save_scene(room_out + "/final.json", est.final_scene);
      write_trace_csv(room_out + "/trace.csv", est.map.trace);
      entries[i] = {{"id", id},
                    {"status", "ok"},
                    {"log_posterior", est.map.best_breakdown.log_posterior},
                    {"lambda", est.final_scene.lambda}};
      std::fprintf(stderr, "%s: ok (lambda %.3f)\n", id.c_str(), est.final_scene.lambda);
    } catch (const Error& e) {
      std::ofstream f(room_out + "/error.txt");
      f << e.what() << "\n";
      entries[i] = {{"id", id}, {"status", "failed"}, {"error", e.what()}};
      std::fprintf(stderr, "%s: failed: %s\n", id.c_str(), e.what());
    }
  });

  nlohmann::json manifest;
  manifest["dataset"] = dataset_dir;
  manifest["rooms"] = entries;
  std::ofstream f(out_dir + "/manifest.json");
  if (!f) throw IoError("cannot write results manifest in " + out_dir);
  f << manifest.dump(2) << "\n";
  int failures = 0;
  for (const auto& e : entries)
    if (e.value("status", "") != "ok") ++failures;
  std::printf("estimated %zu rooms, %d failed\n", dirs.size(), failures);
  return 0;
}

int cmd_eval(const std::string& dataset_dir, const std::string& results_dir,
             std::string out_dir) {
  if (out_dir.empty()) out_dir = results_dir + "/report";
  std::vector<RoomEvalInput> inputs;
  int skipped = 0;
  for (const std::string& room_dir : list_room_dirs(dataset_dir)) {
    std::string id = fs::path(room_dir).filename().string();
    std::string res = results_dir + "/rooms/" + id;
    if (!fs::exists(res + "/final.json")) {
      ++skipped;
      continue;
    }
    RoomEvalInput in;
    in.id = id;
    in.gt = load_scene(room_dir + "/scene_gt.json");
    in.init_scene = load_scene(res + "/init.json");
    in.final_scene = load_scene(res + "/final.json");
    inputs.push_back(std::move(in));
  }
  if (inputs.empty()) throw IoError("no evaluable rooms between " + dataset_dir + " and " +
                                    results_dir);
  ErrorReport rep = evaluate_dataset(inputs);
  write_report(out_dir, rep);
  std::string text = report_text(rep);
  std::fputs(text.c_str(), stdout);
  if (skipped) std::printf("(%d rooms skipped: no result)\n", skipped);
  std::printf("report written to %s\n", out_dir.c_str());
  return 0;
}

int cmd_floormap(const std::string& scene_path, const std::string& out_path,
                 const std::string& ref_path) {
  SceneParameters scene = load_scene(scene_path);
  SceneParameters ref;
  FloorMapOptions opt;
  if (!ref_path.empty()) {
    ref = load_scene(ref_path);
    opt.reference = &ref;
  }
  write_floor_map(out_path, scene, ModelLibrary::standard(), opt);
  std::printf("wrote %s\n", out_path.c_str());
  return 0;
}

int cmd_render(const std::string& scene_path, const std::string& out_dir, int width, int height) {
  SceneParameters scene = load_scene(scene_path);
  SceneRender render = render_scene(scene, ModelLibrary::standard(), width, height);
  fs::create_directories(out_dir);
  write_gray_png(out_dir + "/pano.png", render.labels);

  LabelImage view(render.labels.width, render.labels.height);
  for (std::size_t i = 0; i < view.data.size(); ++i)
    view.data[i] = static_cast<std::uint8_t>(render.labels.data[i] * 85);
  write_gray_png(out_dir + "/pano_view.png", view);

  double max_d = 0.0;
  for (double d : render.depth.data)
    if (d < kDepthInfinity) max_d = std::max(max_d, d);
  GrayImage depth(render.depth.width, render.depth.height);
  for (std::size_t i = 0; i < depth.data.size(); ++i) {
    double d = render.depth.data[i];
    depth.data[i] = d >= kDepthInfinity ? 0.0f
                                        : static_cast<float>(1.0 - d / (max_d > 0 ? max_d : 1.0));
  }
  write_gray_png(out_dir + "/depth.png", to_gray8(depth));
  std::printf("wrote pano.png, pano_view.png, depth.png to %s\n", out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-panorama room layout and object pose estimation"};
  app.require_subcommand(1);

  std::string config_path, out_dir, dataset_dir, results_dir, scene_path, ref_path;
  int rooms = 0, jobs = 1, width = 512, height = 256;
  std::int64_t seed = -1;

  CLI::App* gen = app.add_subcommand("generate", "Generate a synthetic room dataset");
  gen->add_option("--config", config_path, "Run configuration JSON");
  gen->add_option("--out", out_dir, "Output dataset directory")->required();
  gen->add_option("--rooms", rooms, "Override room count");
  gen->add_option("--seed", seed, "Override master seed");
  gen->add_option("--jobs", jobs, "Worker threads");

  CLI::App* est = app.add_subcommand("estimate", "Estimate layouts and poses for a dataset");
  est->add_option("--dataset", dataset_dir, "Dataset directory")->required();
  est->add_option("--config", config_path, "Run configuration JSON");
  est->add_option("--out", out_dir, "Results directory")->required();
  est->add_option("--rooms", rooms, "Limit number of rooms");
  est->add_option("--jobs", jobs, "Worker threads");

  CLI::App* ev = app.add_subcommand("eval", "Compare results against ground truth");
  ev->add_option("--dataset", dataset_dir, "Dataset directory")->required();
  ev->add_option("--results", results_dir, "Results directory")->required();
  ev->add_option("--out", out_dir, "Report directory (default results/report)");

  CLI::App* fm = app.add_subcommand("floormap", "Write a top-view SVG floor map");
  fm->add_option("--scene", scene_path, "Scene JSON")->required();
  fm->add_option("--out", out_dir, "Output SVG path")->required();
  fm->add_option("--ref", ref_path, "Reference scene drawn dashed");

  CLI::App* rd = app.add_subcommand("render", "Render a scene to a label panorama");
  rd->add_option("--scene", scene_path, "Scene JSON")->required();
  rd->add_option("--out", out_dir, "Output directory")->required();
  rd->add_option("--width", width, "Panorama width");
  rd->add_option("--height", height, "Panorama height");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_generate(config_path, out_dir, rooms, seed, jobs);
    if (est->parsed()) return cmd_estimate(dataset_dir, config_path, out_dir, rooms, jobs);
    if (ev->parsed()) return cmd_eval(dataset_dir, results_dir, out_dir);
    if (fm->parsed()) return cmd_floormap(scene_path, out_dir, ref_path);
    if (rd->parsed()) return cmd_render(scene_path, out_dir, width, height);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 2;
  }
  return 0;
}
