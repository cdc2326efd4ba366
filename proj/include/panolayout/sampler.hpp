#pragma once

// Sampling-based MAP search over scene hypotheses: epochs of independent
// proposals around a current scene, re-seeded each epoch at the sample with
// the best context prior, while tracking the best log posterior globally.

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "panolayout/common.hpp"
#include "panolayout/context_prior.hpp"
#include "panolayout/posterior.hpp"
#include "panolayout/random.hpp"
#include "panolayout/scene.hpp"

namespace panolayout {

struct SamplerConfig {
  int epochs = 8;
  int samples_per_epoch = 25;
  // Location proposal variances as fractions of the camera-object distance,
  // along the viewing ray and perpendicular to it.
  double location_var_along = 0.1;
  double location_var_perp = 0.005;
  double orientation_sigma_rad = 0.1;
  // Scale proposals: wall height uniform in [scale_min, scale_max] meters.
  double scale_min = 2.0;
  double scale_max = 3.5;
  double base_height = 2.5;
  std::uint64_t seed = 0;
  int jobs = 1;

  // Reconfigures the per-epoch sample count for a total budget, keeping the
  // epoch (re-seeding) cadence fixed.  Re-seeding is greedy on the context
  // prior, so the epoch count bounds how far the chain can drift from the
  // initialization toward prior-optimal arrangements.
  void set_total_samples(int total) {
    samples_per_epoch = std::max(1, (total + epochs - 1) / epochs);
  }
};

// One independent proposal around `current`: fresh global scale applied to
// the whole scene (walls and object positions rescale together about the
// camera, keeping relative placement intact), then anisotropic location plus
// orientation perturbations for every object.
inline SceneParameters propose_scene(const SceneParameters& current, const SamplerConfig& cfg,
                                     Rng& rng) {
  double new_height = rng.uniform(cfg.scale_min, cfg.scale_max);
  SceneParameters next = rescale_scene(current, new_height / cfg.base_height);
  const Vec2 cam = current.camera.position;
  for (SceneObject& obj : next.objects) {
    Vec2 rel = obj.position - cam;
    double dist = rel.norm();
    if (dist < 1e-6) {
      obj.position.x += rng.normal(0.0, 0.05);
      obj.position.y += rng.normal(0.0, 0.05);
    } else {
      Vec2 along = rel / dist;
      Vec2 perp = along.perp();
      double sigma_along = std::sqrt(cfg.location_var_along * dist);
      double sigma_perp = std::sqrt(cfg.location_var_perp * dist);
      obj.position += along * rng.normal(0.0, sigma_along) + perp * rng.normal(0.0, sigma_perp);
    }
    obj.yaw_deg = wrap_degrees(obj.yaw_deg + rad_to_deg(rng.normal(0.0, cfg.orientation_sigma_rad)));
  }
  return next;
}

struct TraceRow {
  int epoch = 0;   // -1 for the initialization row
  int index = 0;   // sample index within the epoch; -1 for initialization
  std::uint64_t seed = 0;
  double lambda = 0.0;
  PosteriorBreakdown breakdown;
};

struct MapResult {
  SceneParameters best;
  PosteriorBreakdown best_breakdown;
  std::vector<TraceRow> trace;
};

inline MapResult run_map_search(const ObservedRoom& room, const SceneParameters& init,
                                const ModelLibrary& lib, const PoseLibrary& poses,
                                const PosteriorConfig& post_cfg, const SamplerConfig& cfg) {
  MapResult result;
  result.best = init;
  result.best_breakdown = log_posterior(room, init, lib, poses, post_cfg);
  result.trace.push_back({-1, -1, cfg.seed, init.lambda, result.best_breakdown});

  SceneParameters current = init;
  std::vector<SceneParameters> proposals(cfg.samples_per_epoch);
  std::vector<PosteriorBreakdown> breakdowns(cfg.samples_per_epoch);
  std::vector<std::uint64_t> seeds(cfg.samples_per_epoch);

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    parallel_for(static_cast<std::size_t>(cfg.samples_per_epoch), cfg.jobs, [&](std::size_t k) {
      Rng rng = Rng::stream(cfg.seed, {0x5a3fu, static_cast<std::uint64_t>(epoch), k});
      seeds[k] = (static_cast<std::uint64_t>(epoch) << 32) | k;
      proposals[k] = propose_scene(current, cfg, rng);
      breakdowns[k] = log_posterior(room, proposals[k], lib, poses, post_cfg);
    });
    int best_prior = 0;
    double best_prior_energy = std::numeric_limits<double>::infinity();
    for (int k = 0; k < cfg.samples_per_epoch; ++k) {
      result.trace.push_back({epoch, k, seeds[k], proposals[k].lambda, breakdowns[k]});
      double prior_energy = breakdowns[k].e_ow + post_cfg.prior.mu * breakdowns[k].e_oo;
      if (prior_energy < best_prior_energy) {
        best_prior_energy = prior_energy;
        best_prior = k;
      }
      if (breakdowns[k].log_posterior > result.best_breakdown.log_posterior) {
        result.best_breakdown = breakdowns[k];
        result.best = proposals[k];
      }
    }
    // Next epoch explores around this epoch's best-prior sample.
    current = proposals[best_prior];
  }
  return result;
}

inline void write_trace_csv(const std::string& path, const std::vector<TraceRow>& trace) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << "epoch,index,seed,lambda,e_s,e_o,e_ow,e_oo,log_posterior\n";
  char line[256];
  for (const TraceRow& r : trace) {
    std::snprintf(line, sizeof(line), "%d,%d,%llu,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", r.epoch,
                  r.index, static_cast<unsigned long long>(r.seed), r.lambda, r.breakdown.e_s,
                  r.breakdown.e_o, r.breakdown.e_ow, r.breakdown.e_oo,
                  r.breakdown.log_posterior);
    f << line;
  }
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace panolayout
