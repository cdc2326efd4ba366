#pragma once

// Sequential tree-reweighted message passing (TRW-S) for pairwise energy
// minimization over a general graph, with a per-iteration lower bound from a
// monotonic-chain decomposition.
//
// Pairwise terms are either explicit per-edge tables or a shared truncated-L1
// metric on a 2D label grid whose first coordinate is cyclic; metric message
// updates use linear-time distance transforms.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "panolayout/common.hpp"

namespace panolayout {

struct EnergyGraph {
  int label_count = 0;
  std::vector<std::vector<double>> unary;  // [node][label]

  struct Edge {
    int a = 0;
    int b = 0;
    double weight = 1.0;        // scales the metric term
    std::vector<double> table;  // explicit pairwise (row: label of a); empty when metric
  };
  std::vector<Edge> edges;

  // Truncated-L1 metric on an x_steps * y_steps grid (label = y * x_steps + x)
  // with cyclic x: cost = weight * min(x_step_cost * dx_circ + y_step_cost * dy,
  // truncation).
  struct GridMetric {
    int x_steps = 0;
    int y_steps = 0;
    double x_step_cost = 1.0;
    double y_step_cost = 1.0;
    double truncation = std::numeric_limits<double>::infinity();
  };
  std::optional<GridMetric> metric;

  double pairwise(const Edge& e, int la, int lb) const {
    if (!e.table.empty()) return e.table[static_cast<std::size_t>(la) * label_count + lb];
    const GridMetric& m = *metric;
    int xa = la % m.x_steps, ya = la / m.x_steps;
    int xb = lb % m.x_steps, yb = lb / m.x_steps;
    int dx = std::abs(xa - xb);
    dx = std::min(dx, m.x_steps - dx);
    double d = m.x_step_cost * dx + m.y_step_cost * std::abs(ya - yb);
    return e.weight * std::min(d, m.truncation);
  }
};

inline double graph_energy(const EnergyGraph& g, const std::vector<int>& labels) {
  double e = 0.0;
  for (std::size_t i = 0; i < g.unary.size(); ++i) e += g.unary[i][labels[i]];
  for (const auto& edge : g.edges) e += g.pairwise(edge, labels[edge.a], labels[edge.b]);
  return e;
}

namespace detail {

// In-place truncated-L1 distance transform over the label grid:
// out[l] = min_k (f[k] + metric cost between k and l), for a unit edge
// weight scaled by `weight`.
inline void grid_distance_transform(std::vector<double>& f, const EnergyGraph::GridMetric& m,
                                    double weight) {
  const int nx = m.x_steps, ny = m.y_steps;
  const double cx = weight * m.x_step_cost;
  const double cy = weight * m.y_step_cost;
  double base = std::numeric_limits<double>::infinity();
  for (double v : f) base = std::min(base, v);
  const double cap = base + weight * m.truncation;

  // Columns (linear axis y): forward then backward.
  for (int x = 0; x < nx; ++x) {
    for (int y = 1; y < ny; ++y)
      f[y * nx + x] = std::min(f[y * nx + x], f[(y - 1) * nx + x] + cy);
    for (int y = ny - 2; y >= 0; --y)
      f[y * nx + x] = std::min(f[y * nx + x], f[(y + 1) * nx + x] + cy);
  }
  // Rows (cyclic axis x): two wrapped sweeps each way.
  for (int y = 0; y < ny; ++y) {
    double* row = f.data() + static_cast<std::size_t>(y) * nx;
    for (int rep = 0; rep < 2; ++rep) {
      for (int x = 0; x < nx; ++x) {
        int prev = (x + nx - 1) % nx;
        row[x] = std::min(row[x], row[prev] + cx);
      }
    }
    for (int rep = 0; rep < 2; ++rep) {
      for (int x = nx - 1; x >= 0; --x) {
        int nxt = (x + 1) % nx;
        row[x] = std::min(row[x], row[nxt] + cx);
      }
    }
  }
  for (double& v : f) v = std::min(v, cap);
}

}  // namespace detail

// msg[lb] = min_la (acc[la] + pairwise(e, la, lb)), normalized to min 0.
// `from_a` selects the direction (true: from edge endpoint a toward b).
inline std::vector<double> min_convolve_message(const EnergyGraph& g, const EnergyGraph::Edge& e,
                                                const std::vector<double>& acc, bool from_a) {
  const int L = g.label_count;
  std::vector<double> msg;
  if (!e.table.empty()) {
    msg.assign(L, std::numeric_limits<double>::infinity());
    for (int la = 0; la < L; ++la) {
      for (int lb = 0; lb < L; ++lb) {
        double cost = from_a ? e.table[static_cast<std::size_t>(la) * L + lb]
                             : e.table[static_cast<std::size_t>(lb) * L + la];
        msg[lb] = std::min(msg[lb], acc[la] + cost);
      }
    }
  } else {
    msg = acc;  // metric is symmetric; direction does not matter
    detail::grid_distance_transform(msg, *g.metric, e.weight);
  }
  double mn = *std::min_element(msg.begin(), msg.end());
  for (double& v : msg) v -= mn;
  return msg;
}

struct TrwsResult {
  std::vector<int> labels;           // best labeling encountered (true energy)
  double energy = 0.0;               // energy of `labels`
  std::vector<double> lower_bounds;  // one value per iteration
};

namespace detail {

struct TrwsWorkspace {
  // Per node: incident edges split against the processing order.
  std::vector<std::vector<int>> lower_edges;  // edges to smaller-index neighbors
  std::vector<std::vector<int>> higher_edges;
  std::vector<int> chain_count;  // chains through each node
  // Monotonic chains as node sequences (with the edge used at each step).
  struct Chain {
    std::vector<int> nodes;
    std::vector<int> edges;  // edges[k] joins nodes[k] and nodes[k+1]
  };
  std::vector<Chain> chains;
};

inline TrwsWorkspace build_workspace(const EnergyGraph& g) {
  const int n = static_cast<int>(g.unary.size());
  TrwsWorkspace w;
  w.lower_edges.resize(n);
  w.higher_edges.resize(n);
  for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
    int a = g.edges[ei].a, b = g.edges[ei].b;
    int lo = std::min(a, b), hi = std::max(a, b);
    w.higher_edges[lo].push_back(static_cast<int>(ei));
    w.lower_edges[hi].push_back(static_cast<int>(ei));
  }
  auto other_end = [&](int ei, int node) {
    return g.edges[ei].a == node ? g.edges[ei].b : g.edges[ei].a;
  };
  // Deterministic ordering by neighbor index.
  for (int i = 0; i < n; ++i) {
    auto by_neighbor = [&](int e1, int e2) { return other_end(e1, i) < other_end(e2, i); };
    std::sort(w.lower_edges[i].begin(), w.lower_edges[i].end(), by_neighbor);
    std::sort(w.higher_edges[i].begin(), w.higher_edges[i].end(), by_neighbor);
  }
  w.chain_count.resize(n);
  for (int i = 0; i < n; ++i) {
    w.chain_count[i] = std::max<std::size_t>(
        1, std::max(w.lower_edges[i].size(), w.higher_edges[i].size()));
  }
  // Chain decomposition: at each node, pair incoming (lower) with outgoing
  // (higher) edges; unpaired outgoing edges start new chains, unpaired
  // incoming edges terminate theirs.
  std::vector<int> chain_of_edge(g.edges.size(), -1);
  for (int i = 0; i < n; ++i) {
    std::size_t in_count = w.lower_edges[i].size();
    std::size_t out_count = w.higher_edges[i].size();
    for (std::size_t t = 0; t < std::max(in_count, out_count); ++t) {
      if (t < in_count && t < out_count) {
        int cin = chain_of_edge[w.lower_edges[i][t]];
        int eo = w.higher_edges[i][t];
        w.chains[cin].nodes.push_back(other_end(eo, i));
        w.chains[cin].edges.push_back(eo);
        chain_of_edge[eo] = cin;
      } else if (t < out_count) {
        int eo = w.higher_edges[i][t];
        TrwsWorkspace::Chain c;
        c.nodes = {i, other_end(eo, i)};
        c.edges = {eo};
        chain_of_edge[eo] = static_cast<int>(w.chains.size());
        w.chains.push_back(std::move(c));
      }
      // t < in_count only: the chain ends here; nothing to do.
    }
    if (in_count == 0 && out_count == 0) {
      w.chains.push_back({{i}, {}});
    }
  }
  return w;
}

}  // namespace detail

// Minimizes the graph energy.  Returns the best labeling found across all
// iterations together with the per-iteration lower bound on the optimum.
inline TrwsResult trws_minimize(const EnergyGraph& g, int iterations) {
  const int n = static_cast<int>(g.unary.size());
  const int L = g.label_count;
  if (n == 0) return {{}, 0.0, std::vector<double>(std::max(iterations, 0), 0.0)};
  for (const auto& u : g.unary) {
    if (static_cast<int>(u.size()) != L) throw ValidationError("trws: unary size mismatch");
  }
  detail::TrwsWorkspace w = detail::build_workspace(g);

  // messages[2*ei]: from edge.a to edge.b; messages[2*ei+1]: the reverse.
  std::vector<std::vector<double>> messages(2 * g.edges.size(), std::vector<double>(L, 0.0));
  auto msg_into = [&](int node, int ei) -> std::vector<double>& {
    return g.edges[ei].b == node ? messages[2 * ei] : messages[2 * ei + 1];
  };
  auto msg_from = [&](int node, int ei) -> std::vector<double>& {
    return g.edges[ei].a == node ? messages[2 * ei] : messages[2 * ei + 1];
  };

  auto accumulate = [&](int i) {
    std::vector<double> acc = g.unary[i];
    for (int ei : w.lower_edges[i]) {
      const auto& m = msg_into(i, ei);
      for (int l = 0; l < L; ++l) acc[l] += m[l];
    }
    for (int ei : w.higher_edges[i]) {
      const auto& m = msg_into(i, ei);
      for (int l = 0; l < L; ++l) acc[l] += m[l];
    }
    return acc;
  };

  auto pass = [&](bool forward) {
    for (int step = 0; step < n; ++step) {
      int i = forward ? step : n - 1 - step;
      std::vector<double> acc = accumulate(i);
      double gamma = 1.0 / w.chain_count[i];
      const auto& targets = forward ? w.higher_edges[i] : w.lower_edges[i];
      for (int ei : targets) {
        std::vector<double> tmp(L);
        const auto& incoming = msg_into(i, ei);
        for (int l = 0; l < L; ++l) tmp[l] = gamma * acc[l] - incoming[l];
        msg_from(i, ei) = min_convolve_message(g, g.edges[ei], tmp, g.edges[ei].a == i);
      }
    }
  };

  auto extract_labels = [&]() {
    std::vector<int> labels(n, 0);
    for (int i = 0; i < n; ++i) {
      std::vector<double> score = g.unary[i];
      for (int ei : w.lower_edges[i]) {
        int j = g.edges[ei].a == i ? g.edges[ei].b : g.edges[ei].a;
        bool i_is_a = g.edges[ei].a == i;
        for (int l = 0; l < L; ++l)
          score[l] += i_is_a ? g.pairwise(g.edges[ei], l, labels[j])
                             : g.pairwise(g.edges[ei], labels[j], l);
      }
      for (int ei : w.higher_edges[i]) {
        const auto& m = msg_into(i, ei);
        for (int l = 0; l < L; ++l) score[l] += m[l];
      }
      int best = 0;
      for (int l = 1; l < L; ++l) {
        if (score[l] < score[best]) best = l;
      }
      labels[i] = best;
    }
    return labels;
  };

  auto lower_bound = [&]() {
    // Reparameterized node potentials, shared across the chains through each
    // node; edge potentials absorb the messages in both directions.
    std::vector<std::vector<double>> theta(n);
    for (int i = 0; i < n; ++i) {
      theta[i] = accumulate(i);
      double inv = 1.0 / w.chain_count[i];
      for (double& v : theta[i]) v *= inv;
    }
    double bound = 0.0;
    for (const auto& chain : w.chains) {
      std::vector<double> d = theta[chain.nodes[0]];
      for (std::size_t k = 0; k < chain.edges.size(); ++k) {
        int ei = chain.edges[k];
        int from = chain.nodes[k];
        int to = chain.nodes[k + 1];
        const auto& m_rev = msg_into(from, ei);
        std::vector<double> acc(L);
        for (int l = 0; l < L; ++l) acc[l] = d[l] - m_rev[l];
        // Raw min-convolution without normalization.
        std::vector<double> conv;
        const auto& e = g.edges[ei];
        if (!e.table.empty()) {
          conv.assign(L, std::numeric_limits<double>::infinity());
          bool from_a = e.a == from;
          for (int la = 0; la < L; ++la) {
            for (int lb = 0; lb < L; ++lb) {
              double cost = from_a ? e.table[static_cast<std::size_t>(la) * L + lb]
                                   : e.table[static_cast<std::size_t>(lb) * L + la];
              conv[lb] = std::min(conv[lb], acc[la] + cost);
            }
          }
        } else {
          conv = acc;
          detail::grid_distance_transform(conv, *g.metric, e.weight);
        }
        const auto& m_fwd = msg_into(to, ei);
        const auto& node_term = theta[to];
        for (int l = 0; l < L; ++l) d[l] = conv[l] - m_fwd[l] + node_term[l];
      }
      bound += *std::min_element(d.begin(), d.end());
    }
    return bound;
  };

  TrwsResult result;
  result.energy = std::numeric_limits<double>::infinity();
  for (int it = 0; it < iterations; ++it) {
    pass(true);
    pass(false);
    std::vector<int> labels = extract_labels();
    double e = graph_energy(g, labels);
    if (e < result.energy) {
      result.energy = e;
      result.labels = labels;
    }
    result.lower_bounds.push_back(lower_bound());
  }
  if (result.labels.empty()) result.labels.assign(n, 0);
  return result;
}

// Exhaustive minimization for tiny instances (test oracle).
inline TrwsResult brute_force_minimize(const EnergyGraph& g) {
  const int n = static_cast<int>(g.unary.size());
  const int L = g.label_count;
  double combos = std::pow(static_cast<double>(L), n);
  if (combos > 1e6)
    throw ValidationError("brute_force_minimize: instance too large (labels^nodes > 1e6)");
  std::vector<int> labels(n, 0), best(n, 0);
  double best_e = std::numeric_limits<double>::infinity();
  for (;;) {
    double e = graph_energy(g, labels);
    if (e < best_e) {
      best_e = e;
      best = labels;
    }
    int k = 0;
    while (k < n) {
      if (++labels[k] < L) break;
      labels[k] = 0;
      ++k;
    }
    if (k == n) break;
  }
  TrwsResult r;
  r.labels = best;
  r.energy = best_e;
  return r;
}

}  // namespace panolayout
