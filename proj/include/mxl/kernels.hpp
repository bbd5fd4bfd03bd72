#pragma once

// Data-parallel kernels. Every parallel kernel has a serial twin with the same
// contract; the serial versions are the reference used by the test-suite and
// the benchmark target.
//
// Parallel reductions are blocked with a fixed block size and combined in
// block order, so results do not depend on the number of OpenMP threads.

#include <cstddef>
#include <span>
#include <vector>

#include "mxl/graph.hpp"

namespace mxl::kernels {

/// Per-community sums for one layer: tot[c] = sum of member degrees,
/// in[c] = intra-community weight (each undirected edge once, self-loops once).
struct CommunitySums {
  std::vector<double> tot;
  std::vector<double> in;
};

CommunitySums community_sums(const Layer& layer, std::span<const CommunityId> labels,
                             std::size_t communities);

double layer_modularity(const Layer& layer, std::span<const CommunityId> labels,
                        std::size_t communities);
double layer_modularity_serial(const Layer& layer, std::span<const CommunityId> labels,
                               std::size_t communities);

std::vector<double> modularity_vector(const MultiplexGraph& g, const Partition& p);
std::vector<double> modularity_vector_serial(const MultiplexGraph& g, const Partition& p);

/// Full n x n Pearson correlation matrix (row-major). Throws GraphError on a
/// constant row.
std::vector<double> correlation_matrix(const FeatureMatrix& f);
std::vector<double> correlation_matrix_serial(const FeatureMatrix& f);

}  // namespace mxl::kernels
