#pragma once

// Shared test helpers: small fixtures, random graphs and reference
// implementations written directly from the definitions.

#include <algorithm>
#include <cmath>
#include <span>
#include <random>
#include <vector>

#include "mxl/graph.hpp"
#include "mxl/quality.hpp"

namespace mxl::test {

inline Layer layer(std::size_t n, std::vector<Edge> edges) { return Layer::from_edges(n, edges); }

inline MultiplexGraph two_triangles() {
  return MultiplexGraph({layer(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}})});
}

inline Partition triangles() { return Partition::from_labels(std::vector<CommunityId>{0, 0, 0, 1, 1, 1}); }

/// Dense symmetric adjacency with self-loop weight on the diagonal.
inline std::vector<double> dense(const Layer& l) {
  const std::size_t n = l.node_count();
  std::vector<double> a(n * n, 0.0);
  for (const Edge& e : l.edges()) {
    a[e.u * n + e.v] = e.w;
    a[e.v * n + e.u] = e.w;
  }
  return a;
}

/// Modularity summed over ordered pairs; a self-loop counts twice on the diagonal.
inline double modularity_oracle(const Layer& l, std::span<const CommunityId> labels) {
  const std::size_t n = l.node_count();
  const auto a = dense(l);
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i] += (i == j ? 2.0 : 1.0) * a[i * n + j];
  double two_m = 0.0;
  for (double x : d) two_m += x;
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (labels[i] != labels[j]) continue;
      const double aij = (i == j ? 2.0 : 1.0) * a[i * n + j];
      q += aij - d[i] * d[j] / two_m;
    }
  return q / two_m;
}

inline std::vector<double> modularity_vector_oracle(const MultiplexGraph& g,
                                                    std::span<const CommunityId> labels) {
  std::vector<double> q;
  for (const Layer& l : g.layers()) q.push_back(modularity_oracle(l, labels));
  return q;
}

inline double quality_oracle(const std::vector<double>& q, Variant v, double gamma) {
  const double k = static_cast<double>(q.size());
  double mean = 0.0;
  for (double x : q) mean += x;
  mean /= k;
  double var = 0.0;
  if (q.size() > 1) {
    for (double x : q) var += (x - mean) * (x - mean);
    var /= k - 1.0;
  }
  switch (v) {
    case Variant::Mean: return mean;
    case Variant::VarMinus: return (1.0 - gamma) * mean - gamma * var;
    case Variant::VarPlus: return (1.0 - gamma) * mean + gamma * var;
  }
  return 0.0;
}

/// Random layer over n nodes: each pair with probability p, weight in [0.5, 2)
/// (or 1 when unit), optional self-loops. Guaranteed non-empty.
inline Layer random_layer(std::size_t n, double p, std::mt19937_64& rng, bool unit = false,
                          double p_loop = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0), w(0.5, 2.0);
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    if (p_loop > 0.0 && u(rng) < p_loop) edges.push_back({i, i, unit ? 1.0 : w(rng)});
    for (NodeId j = i + 1; j < n; ++j)
      if (u(rng) < p) edges.push_back({i, j, unit ? 1.0 : w(rng)});
  }
  if (edges.empty()) edges.push_back({0, static_cast<NodeId>(n - 1), 1.0});
  return Layer::from_edges(n, edges);
}

inline MultiplexGraph random_multiplex(std::size_t n, std::size_t k, double p, std::mt19937_64& rng,
                                       bool unit = false, double p_loop = 0.0) {
  std::vector<Layer> layers;
  for (std::size_t s = 0; s < k; ++s) layers.push_back(random_layer(n, p, rng, unit, p_loop));
  return MultiplexGraph(std::move(layers));
}

inline Partition random_partition(std::size_t n, std::size_t c, std::mt19937_64& rng) {
  std::uniform_int_distribution<CommunityId> d(0, static_cast<CommunityId>(c - 1));
  std::vector<CommunityId> labels(n);
  for (auto& x : labels) x = d(rng);
  return Partition::from_labels(labels);
}

/// Calls f(labels) for every set partition of n nodes (restricted growth strings).
template <class F>
void for_each_partition(std::size_t n, F&& f) {
  std::vector<CommunityId> a(n, 0);
  auto rec = [&](auto&& self, std::size_t i, CommunityId top) -> void {
    if (i == n) {
      f(std::span<const CommunityId>(a));
      return;
    }
    for (CommunityId c = 0; c <= top + 1; ++c) {
      a[i] = c;
      self(self, i + 1, std::max(top, c));
    }
  };
  if (n == 0) return;
  a[0] = 0;
  rec(rec, 1, 0);
}

}  // namespace mxl::test
