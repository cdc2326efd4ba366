#pragma once

// Run configuration: one JSON file with sections {dataset, noise, crf,
// sampler, posterior}.  Every tunable constant appears as a named default;
// absent keys keep their defaults, unknown keys are rejected.

#include <fstream>
#include <string>

#include <json.hpp>

#include "panolayout/common.hpp"
#include "panolayout/dataset.hpp"
#include "panolayout/estimator.hpp"

namespace panolayout {

struct RunConfig {
  DatasetConfig dataset;
  EstimatorConfig estimator;

  RunConfig() {
    // The sampler draws wall heights from the same range the generator uses.
    estimator.sampler.scale_min = 2.0;
    estimator.sampler.scale_max = 3.5;
  }
};

inline nlohmann::json run_config_to_json(const RunConfig& rc) {
  const DatasetConfig& d = rc.dataset;
  const EstimatorConfig& e = rc.estimator;
  nlohmann::json j;
  j["dataset"] = {{"rooms", d.rooms},
                  {"pano_width", d.pano_width},
                  {"pano_height", d.pano_height},
                  {"crop_size", d.crop_size},
                  {"seed", d.seed},
                  {"camera_height", d.generator.camera_height},
                  {"base_height", d.generator.base_height},
                  {"height_mean", d.generator.height_mean},
                  {"height_sigma", d.generator.height_sigma}};
  j["noise"] = {{"label_flip_prob", d.label_flip_prob}, {"box_jitter_px", d.box_jitter_px}};
  j["crf"] = {{"knn_votes", e.crf.knn_votes},
              {"gamma_deg", e.crf.gamma_deg},
              {"graph_neighbors", e.crf.graph_neighbors},
              {"aux_views", e.crf.aux_views},
              {"iterations", e.crf.iterations},
              {"pairwise_weight", e.crf.pairwise_weight}};
  j["sampler"] = {{"epochs", e.sampler.epochs},
                  {"samples_per_epoch", e.sampler.samples_per_epoch},
                  {"total_samples", e.sampler.epochs * e.sampler.samples_per_epoch},
                  {"location_var_along", e.sampler.location_var_along},
                  {"location_var_perp", e.sampler.location_var_perp},
                  {"orientation_sigma_rad", e.sampler.orientation_sigma_rad},
                  {"scale_min", e.sampler.scale_min},
                  {"scale_max", e.sampler.scale_max}};
  j["posterior"] = {{"surface_weight", e.posterior.surface_weight},
                    {"orientation_weight", e.posterior.orientation_weight},
                    {"prior_weight", e.posterior.prior_weight},
                    {"mu", e.posterior.prior.mu},
                    {"nu_n", e.posterior.prior.nu_n},
                    {"literal_alignment", e.posterior.prior.literal_alignment},
                    {"containment_weight", e.posterior.prior.containment_weight}};
  return j;
}

namespace detail {

template <typename T>
inline void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline void check_known_keys(const nlohmann::json& j, const char* section,
                             std::initializer_list<const char*> known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known)
      if (it.key() == k) ok = true;
    if (!ok) throw ConfigError(std::string("unknown key '") + it.key() + "' in section " + section);
  }
}

}  // namespace detail

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  using detail::read_key;
  RunConfig rc;
  detail::check_known_keys(j, "(top level)", {"dataset", "noise", "crf", "sampler", "posterior"});
  if (j.contains("dataset")) {
    const auto& d = j.at("dataset");
    detail::check_known_keys(d, "dataset",
                             {"rooms", "pano_width", "pano_height", "crop_size", "seed",
                              "camera_height", "base_height", "height_mean", "height_sigma"});
    read_key(d, "rooms", rc.dataset.rooms);
    read_key(d, "pano_width", rc.dataset.pano_width);
    read_key(d, "pano_height", rc.dataset.pano_height);
    read_key(d, "crop_size", rc.dataset.crop_size);
    read_key(d, "seed", rc.dataset.seed);
    read_key(d, "camera_height", rc.dataset.generator.camera_height);
    read_key(d, "base_height", rc.dataset.generator.base_height);
    read_key(d, "height_mean", rc.dataset.generator.height_mean);
    read_key(d, "height_sigma", rc.dataset.generator.height_sigma);
    rc.estimator.camera_height = rc.dataset.generator.camera_height;
    rc.estimator.base_height = rc.dataset.generator.base_height;
  }
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    detail::check_known_keys(n, "noise", {"label_flip_prob", "box_jitter_px"});
    read_key(n, "label_flip_prob", rc.dataset.label_flip_prob);
    read_key(n, "box_jitter_px", rc.dataset.box_jitter_px);
  }
  if (j.contains("crf")) {
    const auto& c = j.at("crf");
    detail::check_known_keys(c, "crf",
                             {"knn_votes", "gamma_deg", "graph_neighbors", "aux_views",
                              "iterations", "pairwise_weight"});
    read_key(c, "knn_votes", rc.estimator.crf.knn_votes);
    read_key(c, "gamma_deg", rc.estimator.crf.gamma_deg);
    read_key(c, "graph_neighbors", rc.estimator.crf.graph_neighbors);
    read_key(c, "aux_views", rc.estimator.crf.aux_views);
    read_key(c, "iterations", rc.estimator.crf.iterations);
    read_key(c, "pairwise_weight", rc.estimator.crf.pairwise_weight);
  }
  if (j.contains("sampler")) {
    const auto& s = j.at("sampler");
    detail::check_known_keys(
        s, "sampler",
        {"epochs", "samples_per_epoch", "total_samples", "location_var_along", "location_var_perp",
         "orientation_sigma_rad", "scale_min", "scale_max"});
    read_key(s, "epochs", rc.estimator.sampler.epochs);
    read_key(s, "samples_per_epoch", rc.estimator.sampler.samples_per_epoch);
    if (s.contains("total_samples") && !s.contains("samples_per_epoch"))
      rc.estimator.sampler.set_total_samples(s.at("total_samples").get<int>());
    read_key(s, "location_var_along", rc.estimator.sampler.location_var_along);
    read_key(s, "location_var_perp", rc.estimator.sampler.location_var_perp);
    read_key(s, "orientation_sigma_rad", rc.estimator.sampler.orientation_sigma_rad);
    read_key(s, "scale_min", rc.estimator.sampler.scale_min);
    read_key(s, "scale_max", rc.estimator.sampler.scale_max);
  }
  if (j.contains("posterior")) {
    const auto& p = j.at("posterior");
    detail::check_known_keys(p, "posterior",
                             {"surface_weight", "orientation_weight", "prior_weight", "mu", "nu_n",
                              "literal_alignment", "containment_weight"});
    read_key(p, "surface_weight", rc.estimator.posterior.surface_weight);
    read_key(p, "orientation_weight", rc.estimator.posterior.orientation_weight);
    read_key(p, "prior_weight", rc.estimator.posterior.prior_weight);
    read_key(p, "mu", rc.estimator.posterior.prior.mu);
    read_key(p, "nu_n", rc.estimator.posterior.prior.nu_n);
    read_key(p, "literal_alignment", rc.estimator.posterior.prior.literal_alignment);
    read_key(p, "containment_weight", rc.estimator.posterior.prior.containment_weight);
  }
  rc.dataset.generator.prior = rc.estimator.posterior.prior;
  rc.estimator.sampler.base_height = rc.estimator.base_height;
  return rc;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file " + path);
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error in ") + path + ": " + e.what());
  }
  try {
    return run_config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config error in ") + path + ": " + e.what());
  }
}

inline void save_run_config(const std::string& path, const RunConfig& rc) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write config file " + path);
  f << run_config_to_json(rc).dump(2) << "\n";
}

}  // namespace panolayout
