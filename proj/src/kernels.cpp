#include "mxl/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mxl::kernels {

namespace {

constexpr std::size_t kBlock = 1024;

std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

std::vector<std::vector<double>> standardized_rows(const FeatureMatrix& f) {
  std::vector<std::vector<double>> z(f.rows, std::vector<double>(f.cols));
  for (std::size_t r = 0; r < f.rows; ++r) {
    auto row = f.row(r);
    double mean = 0.0;
    for (double x : row) mean += x;
    mean /= static_cast<double>(f.cols);
    double ss = 0.0;
    for (double x : row) ss += (x - mean) * (x - mean);
    if (!(ss > 0.0)) throw GraphError("feature row " + std::to_string(r) + " has zero variance");
    const double inv = 1.0 / std::sqrt(ss);
    for (std::size_t c = 0; c < f.cols; ++c) z[r][c] = (row[c] - mean) * inv;
  }
  return z;
}

}  // namespace

CommunitySums community_sums(const Layer& layer, std::span<const CommunityId> labels,
                             std::size_t communities) {
  CommunitySums sums{std::vector<double>(communities, 0.0), std::vector<double>(communities, 0.0)};
  for (NodeId i = 0; i < layer.node_count(); ++i) {
    const CommunityId c = labels[i];
    sums.tot[c] += layer.degree(i);
    double internal = 0.0;
    auto nb = layer.neighbors(i);
    auto ws = layer.weights(i);
    for (std::size_t e = 0; e < nb.size(); ++e)
      if (nb[e] > i && labels[nb[e]] == c) internal += ws[e];
    sums.in[c] += internal + layer.self_loop(i);
  }
  return sums;
}

double layer_modularity_serial(const Layer& layer, std::span<const CommunityId> labels,
                               std::size_t communities) {
  const CommunitySums sums = community_sums(layer, labels, communities);
  const double m = layer.total_weight();
  double q = 0.0;
  for (std::size_t c = 0; c < communities; ++c) {
    const double frac = sums.tot[c] / (2.0 * m);
    q += sums.in[c] / m - frac * frac;
  }
  return q;
}

double layer_modularity(const Layer& layer, std::span<const CommunityId> labels,
                        std::size_t communities) {
  const std::size_t n = layer.node_count();
  std::vector<double> tot(communities, 0.0);
  for (NodeId i = 0; i < n; ++i) tot[labels[i]] += layer.degree(i);

  const std::size_t blocks = block_count(n);
  std::vector<double> in_part(blocks, 0.0), null_part(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::size_t b = 0; b < blocks; ++b) {
    double in2 = 0.0, dt = 0.0;
    const std::size_t hi = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < hi; ++i) {
      const CommunityId c = labels[i];
      auto nb = layer.neighbors(static_cast<NodeId>(i));
      auto ws = layer.weights(static_cast<NodeId>(i));
      double k_in = 0.0;
      for (std::size_t e = 0; e < nb.size(); ++e)
        if (labels[nb[e]] == c) k_in += ws[e];
      in2 += k_in + 2.0 * layer.self_loop(static_cast<NodeId>(i));
      dt += layer.degree(static_cast<NodeId>(i)) * tot[c];
    }
    in_part[b] = in2;
    null_part[b] = dt;
  }
  double in2 = 0.0, dt = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    in2 += in_part[b];
    dt += null_part[b];
  }
  const double two_m = 2.0 * layer.total_weight();
  return in2 / two_m - dt / (two_m * two_m);
}

std::vector<double> modularity_vector(const MultiplexGraph& g, const Partition& p) {
  std::vector<double> q(g.layer_count());
  for (std::size_t s = 0; s < g.layer_count(); ++s)
    q[s] = layer_modularity(g.layer(s), p.labels(), p.community_count());
  return q;
}

std::vector<double> modularity_vector_serial(const MultiplexGraph& g, const Partition& p) {
  std::vector<double> q(g.layer_count());
  for (std::size_t s = 0; s < g.layer_count(); ++s)
    q[s] = layer_modularity_serial(g.layer(s), p.labels(), p.community_count());
  return q;
}

std::vector<double> correlation_matrix(const FeatureMatrix& f) {
  const auto z = standardized_rows(f);
  const std::size_t n = f.rows;
  std::vector<double> corr(n * n, 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v) {
        corr[u * n + v] = 1.0;
        continue;
      }
      double dot = 0.0;
      for (std::size_t c = 0; c < f.cols; ++c) dot += z[u][c] * z[v][c];
      corr[u * n + v] = dot;
    }
  }
  return corr;
}

std::vector<double> correlation_matrix_serial(const FeatureMatrix& f) {
  const std::size_t n = f.rows;
  const std::size_t d = f.cols;
  std::vector<double> mean(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (double x : f.row(r)) mean[r] += x;
    mean[r] /= static_cast<double>(d);
  }
  std::vector<double> corr(n * n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      double sxy = 0.0, sxx = 0.0, syy = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double x = f.row(u)[c] - mean[u], y = f.row(v)[c] - mean[v];
        sxy += x * y;
        sxx += x * x;
        syy += y * y;
      }
      if (!(sxx > 0.0))
        throw GraphError("feature row " + std::to_string(u) + " has zero variance");
      if (!(syy > 0.0))
        throw GraphError("feature row " + std::to_string(v) + " has zero variance");
      corr[u * n + v] = u == v ? 1.0 : sxy / std::sqrt(sxx * syy);
    }
  }
  return corr;
}

}  // namespace mxl::kernels
