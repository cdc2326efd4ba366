#pragma once

// Object pose estimation: a CRF over the relative-pose grid whose nodes are
// the observed appearance crops of one class plus a set of synthetic
// auxiliary views.  Unaries come from nearest-neighbor votes against the
// pose library; pairwise terms couple nodes with similar appearance through
// a truncated pose distance scaled by their descriptor distance.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "panolayout/common.hpp"
#include "panolayout/hog.hpp"
#include "panolayout/model_library.hpp"
#include "panolayout/model_view.hpp"
#include "panolayout/pose.hpp"
#include "panolayout/pose_library.hpp"
#include "panolayout/random.hpp"
#include "panolayout/trws.hpp"

namespace panolayout {

struct PoseCrfConfig {
  int knn_votes = 6;        // library neighbors contributing unary votes
  double gamma_deg = 20.0;  // pose distance truncation
  int graph_neighbors = 4;  // appearance kNN edges per node
  int aux_views = 60;       // synthetic auxiliary nodes per class
  int iterations = 100;     // message passing iterations
  double pairwise_weight = 1.0;
  int render_size = 96;
  std::uint64_t seed = 0;
};

// Indices of the k smallest entries of dists (ties by index).
inline std::vector<int> k_smallest_indices(const std::vector<double>& dists, int k) {
  std::vector<int> order(dists.size());
  std::iota(order.begin(), order.end(), 0);
  k = std::min<int>(k, static_cast<int>(order.size()));
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
    if (dists[a] != dists[b]) return dists[a] < dists[b];
    return a < b;
  });
  order.resize(k);
  return order;
}

// Unary energy over pose labels from k-NN votes in the class library:
// exp(-votes), so labels supported by many similar library views get
// energies near exp(-k) and unsupported labels get 1.
inline std::vector<double> pose_unary_energy(const HogDescriptor& query,
                                             const PoseLibrary& library, ObjectClass cls,
                                             int knn_votes) {
  const std::vector<int>& candidates = library.entries_for_class(cls);
  if (candidates.empty()) throw ValidationError("pose_unary_energy: empty class library");
  std::vector<double> dists(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    dists[i] = hog_distance(query, library.entries()[candidates[i]].hog);
  std::vector<int> nn = k_smallest_indices(dists, knn_votes);
  std::vector<int> votes(PoseGrid::kLabelCount, 0);
  for (int idx : nn) ++votes[library.entries()[candidates[idx]].pose_index];
  std::vector<double> unary(PoseGrid::kLabelCount);
  for (int l = 0; l < PoseGrid::kLabelCount; ++l) unary[l] = std::exp(-votes[l]);
  return unary;
}

// Nearest library entry of the class; used for model retrieval.
inline const PoseLibraryEntry& nearest_library_entry(const HogDescriptor& query,
                                                     const PoseLibrary& library,
                                                     ObjectClass cls) {
  const std::vector<int>& candidates = library.entries_for_class(cls);
  if (candidates.empty()) throw ValidationError("nearest_library_entry: empty class library");
  int best = candidates[0];
  double best_d = std::numeric_limits<double>::infinity();
  for (int idx : candidates) {
    double d = hog_distance(query, library.entries()[idx].hog);
    if (d < best_d) {
      best_d = d;
      best = idx;
    }
  }
  return library.entries()[best];
}

struct PoseEstimate {
  int pose_index = 0;
  PoseLabel pose;
  std::string model_id;  // retrieved nearest model
};

struct PoseCrfResult {
  std::vector<PoseEstimate> targets;   // one per query, in input order
  double energy = 0.0;                 // final graph energy
  std::vector<double> lower_bounds;    // per message-passing iteration
  int node_count = 0;
  int edge_count = 0;
};

// Builds the appearance graph (queries + auxiliary views), runs message
// passing, and reports per-query pose labels and retrieved models.
inline PoseCrfResult estimate_class_poses(const std::vector<HogDescriptor>& queries,
                                          ObjectClass cls, const ModelLibrary& models,
                                          const PoseLibrary& library,
                                          const PoseCrfConfig& cfg = {}) {
  if (queries.empty()) return {};
  if (!has_canonical_orientation(cls))
    throw ValidationError("estimate_class_poses: class has no canonical orientation");

  // Nodes: queries first, then auxiliary synthetic views with perturbed
  // framing and pixel noise.
  std::vector<HogDescriptor> descriptors = queries;
  std::vector<const ModelSpec*> class_models = models.models_for_class(cls);
  if (class_models.empty()) throw ValidationError("estimate_class_poses: no models for class");
  for (int i = 0; i < cfg.aux_views; ++i) {
    Rng rng = Rng::stream(cfg.seed, {0xa0du, static_cast<std::uint64_t>(cls),
                                     static_cast<std::uint64_t>(i)});
    const ModelSpec& model = *class_models[rng.uniform_int(0, static_cast<int>(class_models.size()) - 1)];
    PoseLabel pose{rng.uniform(0.0, 360.0), rng.uniform(0.0, 40.0)};
    ModelViewOptions opts;
    opts.fill = 0.8 * rng.uniform(0.85, 1.15);
    opts.offset_x = rng.uniform(-0.08, 0.08);
    opts.offset_y = rng.uniform(-0.08, 0.08);
    opts.noise_sigma = 5.0 / 255.0;
    opts.noise_seed = rng.next_u64();
    descriptors.push_back(hog_descriptor(render_model_view(model, pose, cfg.render_size, opts)));
  }
  const int n = static_cast<int>(descriptors.size());

  EnergyGraph graph;
  graph.label_count = PoseGrid::kLabelCount;
  graph.metric = EnergyGraph::GridMetric{PoseGrid::kYawSteps, PoseGrid::kPitchSteps,
                                         PoseGrid::kYawStepDeg, PoseGrid::kPitchStepDeg,
                                         cfg.gamma_deg};
  graph.unary.resize(n);
  for (int i = 0; i < n; ++i)
    graph.unary[i] = pose_unary_energy(descriptors[i], library, cls, cfg.knn_votes);

  // Symmetric kNN edges in descriptor space.
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      dist[i][j] = dist[j][i] = hog_distance(descriptors[i], descriptors[j]);
    }
  }
  std::vector<std::vector<bool>> linked(n, std::vector<bool>(n, false));
  auto add_edge = [&](int i, int j) {
    int a = std::min(i, j), b = std::max(i, j);
    if (a == b || linked[a][b]) return;
    linked[a][b] = true;
    graph.edges.push_back({a, b, cfg.pairwise_weight * dist[a][b], {}});
  };
  for (int i = 0; i < n; ++i) {
    std::vector<double> row = dist[i];
    row[i] = std::numeric_limits<double>::infinity();
    for (int j : k_smallest_indices(row, cfg.graph_neighbors)) add_edge(i, j);
  }
  // Patch connectivity: repeatedly join the closest pair across components.
  std::vector<int> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (const auto& e : graph.edges) comp[find(e.a)] = find(e.b);
  for (;;) {
    int best_i = -1, best_j = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (find(i) != find(j) && dist[i][j] < best_d) {
          best_d = dist[i][j];
          best_i = i;
          best_j = j;
        }
      }
    }
    if (best_i < 0) break;
    add_edge(best_i, best_j);
    comp[find(best_i)] = find(best_j);
  }

  TrwsResult inf = trws_minimize(graph, cfg.iterations);

  // Count-based unaries tie whenever two labels collect equal votes, and the
  // message-passing argmin then falls back to label order.  Resolve ties at
  // the query nodes with one coordinate-descent sweep that prefers, among
  // labels of equal local energy, the one supported by the closest library
  // vote — so an exact library match always keeps its own pose.
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const std::vector<int>& candidates = library.entries_for_class(cls);
    std::vector<double> voter_dist(PoseGrid::kLabelCount,
                                   std::numeric_limits<double>::infinity());
    std::vector<double> dists(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i)
      dists[i] = hog_distance(queries[q], library.entries()[candidates[i]].hog);
    for (int idx : k_smallest_indices(dists, cfg.knn_votes)) {
      int label = library.entries()[candidates[idx]].pose_index;
      voter_dist[label] = std::min(voter_dist[label], dists[idx]);
    }
    std::vector<double> local = graph.unary[q];
    for (const auto& e : graph.edges) {
      if (e.a != static_cast<int>(q) && e.b != static_cast<int>(q)) continue;
      int other = e.a == static_cast<int>(q) ? e.b : e.a;
      for (int l = 0; l < PoseGrid::kLabelCount; ++l) {
        local[l] += e.a == static_cast<int>(q) ? graph.pairwise(e, l, inf.labels[other])
                                               : graph.pairwise(e, inf.labels[other], l);
      }
    }
    int best = inf.labels[q];
    for (int l = 0; l < PoseGrid::kLabelCount; ++l) {
      if (local[l] < local[best] ||
          (local[l] == local[best] && voter_dist[l] < voter_dist[best])) {
        best = l;
      }
    }
    inf.labels[q] = best;
  }
  inf.energy = graph_energy(graph, inf.labels);

  PoseCrfResult result;
  result.energy = inf.energy;
  result.lower_bounds = inf.lower_bounds;
  result.node_count = n;
  result.edge_count = static_cast<int>(graph.edges.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    PoseEstimate est;
    est.pose_index = inf.labels[q];
    est.pose = PoseGrid::label_of(est.pose_index);
    est.model_id = nearest_library_entry(queries[q], library, cls).model_id;
    result.targets.push_back(est);
  }
  return result;
}

}  // namespace panolayout
