#include "mxl/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace mxl {

namespace {

void check_sizes(const Partition& pred, const Partition& truth) {
  if (pred.node_count() != truth.node_count())
    throw MetricError("partitions have different node counts (" +
                      std::to_string(pred.node_count()) + " vs " +
                      std::to_string(truth.node_count()) + ")");
  if (pred.node_count() == 0) throw MetricError("empty partitions");
}

double entropy(const std::vector<std::size_t>& counts, double n) {
  double h = 0.0;
  for (std::size_t c : counts)
    if (c) {
      const double p = static_cast<double>(c) / n;
      h -= p * std::log(p);
    }
  return h;
}

}  // namespace

ConfusionMatrix confusion_matrix(const Partition& pred, const Partition& truth) {
  check_sizes(pred, truth);
  ConfusionMatrix cm;
  cm.size = std::max(pred.community_count(), truth.community_count());
  cm.counts.assign(cm.size * cm.size, 0);
  for (NodeId i = 0; i < pred.node_count(); ++i) ++cm.counts[pred[i] * cm.size + truth[i]];
  return cm;
}

std::vector<std::size_t> max_weight_assignment(const std::vector<double>& weights, std::size_t n) {
  if (weights.size() != n * n) throw MetricError("assignment matrix must be square");
  if (n == 0) return {};
  double top = 0.0;
  for (double w : weights) top = std::max(top, w);
  // Minimise cost = top - weight with the potential-based Hungarian method.
  auto cost = [&](std::size_t r, std::size_t c) { return top - weights[r * n + c]; };
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);  // match[col] = row, 1-based
  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const std::size_t r0 = match[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= n; ++col) {
        if (used[col]) continue;
        const double cur = cost(r0 - 1, col - 1) - u[r0] - v[col];
        if (cur < minv[col]) {
          minv[col] = cur;
          way[col] = col0;
        }
        if (minv[col] < delta) {
          delta = minv[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= n; ++col) {
        if (used[col]) {
          u[match[col]] += delta;
          v[col] -= delta;
        } else {
          minv[col] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t col = 1; col <= n; ++col) assignment[match[col] - 1] = col - 1;
  return assignment;
}

double accuracy(const Partition& pred, const Partition& truth) {
  const ConfusionMatrix cm = confusion_matrix(pred, truth);
  std::vector<double> w(cm.counts.begin(), cm.counts.end());
  const auto assignment = max_weight_assignment(w, cm.size);
  std::size_t correct = 0;
  for (std::size_t a = 0; a < cm.size; ++a) correct += cm.at(a, assignment[a]);
  return static_cast<double>(correct) / static_cast<double>(pred.node_count());
}

double nmi(const Partition& pred, const Partition& truth, NmiNorm norm) {
  check_sizes(pred, truth);
  if (pred.community_count() < 2 || truth.community_count() < 2) return 0.0;
  const double n = static_cast<double>(pred.node_count());
  const ConfusionMatrix cm = confusion_matrix(pred, truth);
  std::vector<std::size_t> rows(cm.size, 0), cols(cm.size, 0);
  for (std::size_t a = 0; a < cm.size; ++a)
    for (std::size_t b = 0; b < cm.size; ++b) {
      rows[a] += cm.at(a, b);
      cols[b] += cm.at(a, b);
    }
  double mi = 0.0;
  for (std::size_t a = 0; a < cm.size; ++a)
    for (std::size_t b = 0; b < cm.size; ++b) {
      const std::size_t c = cm.at(a, b);
      if (!c) continue;
      const double pab = static_cast<double>(c) / n;
      mi += pab * std::log(static_cast<double>(c) * n /
                           (static_cast<double>(rows[a]) * static_cast<double>(cols[b])));
    }
  const double hp = entropy(rows, n), ht = entropy(cols, n);
  const double denom = norm == NmiNorm::Geometric ? std::sqrt(hp * ht) : 0.5 * (hp + ht);
  if (!(denom > 0.0)) return 0.0;
  return std::clamp(mi / denom, 0.0, 1.0);
}

std::map<std::string, PerformanceRatio> performance_ratios(const ScoreTable& table) {
  if (table.empty()) throw MetricError("empty score table");
  std::set<std::string> datasets;
  for (const auto& [method, row] : table)
    for (const auto& [dataset, s] : row) datasets.insert(dataset);

  std::map<std::string, Scores> best;
  for (const std::string& d : datasets) {
    Scores top;
    for (const auto& [method, row] : table) {
      auto it = row.find(d);
      if (it == row.end())
        throw MetricError("missing score for method '" + method + "' on dataset '" + d + "'");
      top.accuracy = std::max(top.accuracy, it->second.accuracy);
      top.nmi = std::max(top.nmi, it->second.nmi);
    }
    if (!(top.accuracy > 0.0) || !(top.nmi > 0.0))
      throw MetricError("dataset '" + d + "' has a zero column maximum");
    best[d] = top;
  }

  std::map<std::string, PerformanceRatio> out;
  for (const auto& [method, row] : table) {
    PerformanceRatio r;
    for (const std::string& d : datasets) {
      r.accuracy += row.at(d).accuracy / best[d].accuracy;
      r.nmi += row.at(d).nmi / best[d].nmi;
    }
    r.accuracy /= static_cast<double>(datasets.size());
    r.nmi /= static_cast<double>(datasets.size());
    out[method] = r;
  }
  return out;
}

}  // namespace mxl
