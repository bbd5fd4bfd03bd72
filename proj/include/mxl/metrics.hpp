#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mxl/graph.hpp"

namespace mxl {

class MetricError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// counts[a][b] = nodes with predicted label a and true label b, zero-padded
/// to a square matrix.
struct ConfusionMatrix {
  std::size_t size = 0;
  std::vector<std::size_t> counts;  // row-major size x size

  std::size_t at(std::size_t a, std::size_t b) const { return counts[a * size + b]; }
};

ConfusionMatrix confusion_matrix(const Partition& pred, const Partition& truth);

/// Maximum-weight perfect matching on a square matrix (Hungarian method).
/// Returns assignment[row] = column.
std::vector<std::size_t> max_weight_assignment(const std::vector<double>& weights, std::size_t size);

/// Fraction of nodes in matched communities, under the best one-to-one label matching.
double accuracy(const Partition& pred, const Partition& truth);

enum class NmiNorm { Geometric, Arithmetic };

/// Normalized mutual information with natural-log entropies; 0 when either
/// side is a single community. Clamped to [0,1].
double nmi(const Partition& pred, const Partition& truth, NmiNorm norm = NmiNorm::Geometric);

struct Scores {
  double accuracy = 0.0;
  double nmi = 0.0;
};

/// Scores indexed by method, then dataset.
using ScoreTable = std::map<std::string, std::map<std::string, Scores>>;

struct PerformanceRatio {
  double accuracy = 0.0;
  double nmi = 0.0;
};

/// Score divided by the best score on that dataset, averaged over datasets.
/// Every method must have every dataset and every column maximum must be positive.
std::map<std::string, PerformanceRatio> performance_ratios(const ScoreTable& table);

}  // namespace mxl
