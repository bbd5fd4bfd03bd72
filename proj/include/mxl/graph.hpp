#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mxl {

using NodeId = std::uint32_t;
using CommunityId = std::uint32_t;

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed input files; carries the 1-based line number (0 if not line-specific).
class ParseError : public GraphError {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Edge {
  NodeId u;
  NodeId v;
  double w = 1.0;
};

/// One undirected weighted layer in CSR form.
///
/// Off-diagonal neighbours are stored in both directions, sorted by id.
/// Self-loops are kept apart: a self-loop of weight w adds 2w to the degree
/// and w to the total weight, so 2 * total_weight() == sum of degrees.
class Layer {
 public:
  enum class Duplicates { Reject, Merge };

  Layer() = default;

  /// Builds a layer over `n` nodes. Each undirected edge is given once in
  /// either orientation; with Duplicates::Reject a repeated pair is an error,
  /// with Duplicates::Merge repeated pairs are summed.
  static Layer from_edges(std::size_t n, std::span<const Edge> edges,
                          Duplicates dup = Duplicates::Reject);

  std::size_t node_count() const noexcept { return degrees_.size(); }
  double total_weight() const noexcept { return total_weight_; }
  double degree(NodeId i) const { return degrees_[i]; }
  double self_loop(NodeId i) const { return self_loops_[i]; }
  std::span<const double> degrees() const noexcept { return degrees_; }
  std::span<const double> self_loops() const noexcept { return self_loops_; }

  std::span<const NodeId> neighbors(NodeId i) const {
    return {targets_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::span<const double> weights(NodeId i) const {
    return {weights_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }

  /// Weight of (i, j); for i == j the self-loop weight. Binary search.
  double weight(NodeId i, NodeId j) const;

  /// Undirected edges with u <= v, sorted by (u, v); self-loops included.
  std::vector<Edge> edges() const;

  std::size_t edge_count() const noexcept;

  bool operator==(const Layer&) const = default;

 private:
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> targets_;
  std::vector<double> weights_;
  std::vector<double> self_loops_;
  std::vector<double> degrees_;
  double total_weight_ = 0.0;
};

/// k weighted undirected layers over one shared node set.
class MultiplexGraph {
 public:
  MultiplexGraph() = default;
  /// Validates equal node counts and m_s > 0 on every layer.
  explicit MultiplexGraph(std::vector<Layer> layers,
                          std::vector<std::size_t> node_size = {});

  std::size_t node_count() const noexcept { return n_; }
  std::size_t layer_count() const noexcept { return layers_.size(); }
  const Layer& layer(std::size_t s) const { return layers_[s]; }
  std::span<const Layer> layers() const noexcept { return layers_; }
  double total_weight(std::size_t s) const { return layers_[s].total_weight(); }
  double degree(std::size_t s, NodeId i) const { return layers_[s].degree(i); }
  std::size_t node_size(NodeId i) const { return node_size_[i]; }
  std::span<const std::size_t> node_sizes() const noexcept { return node_size_; }

  bool operator==(const MultiplexGraph&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<Layer> layers_;
  std::vector<std::size_t> node_size_;
};

/// Pillar community assignment with contiguous ids 0..c-1.
class Partition {
 public:
  Partition() = default;

  /// Relabels arbitrary labels to 0..c-1 in order of first appearance.
  static Partition from_labels(std::span<const CommunityId> labels);
  /// Accepts labels that must already be contiguous (every id in 0..c-1 used).
  static Partition from_contiguous(std::vector<CommunityId> labels);
  static Partition singletons(std::size_t n);
  static Partition all_in_one(std::size_t n);

  std::size_t node_count() const noexcept { return label_.size(); }
  std::size_t community_count() const noexcept { return count_; }
  CommunityId operator[](NodeId i) const { return label_[i]; }
  std::span<const CommunityId> labels() const noexcept { return label_; }
  std::vector<std::size_t> community_sizes() const;

  bool operator==(const Partition&) const = default;

 private:
  std::vector<CommunityId> label_;
  std::size_t count_ = 0;
};

/// Dense row-major real matrix, one row per node.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * cols, cols};
  }
};

// ---- file formats ----------------------------------------------------------

/// Reads `layer src dst [weight]` lines (`#` starts a comment). The node count
/// is max id + 1, or `min_nodes` if larger.
MultiplexGraph load_multiplex(const std::filesystem::path& path,
                              std::size_t min_nodes = 0);
MultiplexGraph parse_multiplex(const std::string& text, const std::string& origin = "<string>",
                               std::size_t min_nodes = 0);
/// Canonical form: layer-major, u <= v, sorted, weights printed round-trip exact.
void save_multiplex(const MultiplexGraph& g, const std::filesystem::path& path);
std::string format_multiplex(const MultiplexGraph& g);

/// One integer label per line; line index is the node id.
Partition load_partition(const std::filesystem::path& path);
void save_partition(const Partition& p, const std::filesystem::path& path);

FeatureMatrix load_features_csv(const std::filesystem::path& path);

// ---- transformations -------------------------------------------------------

/// Symmetrized kNN graph under Pearson correlation (higher correlation means
/// closer). Ties broken by lowest node id; a node is never its own neighbour.
Layer build_knn_layer(const FeatureMatrix& features, std::size_t knn);

/// Collapses each community to a node, keeping m_s and degree sums intact.
MultiplexGraph contract(const MultiplexGraph& g, const Partition& p);

/// Sums all layers into a single weighted layer.
Layer flatten(const MultiplexGraph& g);

/// label(i) = coarse.label(mapping(i)).
Partition expand_partition(const Partition& coarse, std::span<const CommunityId> mapping);

MultiplexGraph stack_layers(std::vector<Layer> layers);

}  // namespace mxl
