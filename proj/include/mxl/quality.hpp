#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "mxl/graph.hpp"

namespace mxl {

/// Per-layer modularities (Q_1, ..., Q_k).
using ModularityVector = std::vector<double>;

enum class Variant {
  Mean,      ///< F = M_Q
  VarMinus,  ///< F = (1 - gamma) M_Q - gamma V_Q
  VarPlus,   ///< F = (1 - gamma) M_Q + gamma V_Q
};

const char* to_string(Variant v) noexcept;

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct QualityConfig {
  Variant variant = Variant::Mean;
  double gamma = 0.5;  // ignored by Variant::Mean
  std::size_t h = 1;   // Pareto list capacity

  /// Throws ConfigError unless gamma lies in (0,1) (non-Mean variants) and h >= 1.
  void validate() const;
};

// ---- scalar quality functions ---------------------------------------------

double modularity_layer(const MultiplexGraph& g, std::size_t s, const Partition& p);
ModularityVector modularity_vector(const MultiplexGraph& g, const Partition& p);

double mean_modularity(std::span<const double> q);
/// Sample variance with divisor k-1; zero when k == 1.
double variance_modularity(std::span<const double> q);
double quality(std::span<const double> q, const QualityConfig& cfg);

/// Change of the sample variance when q moves to q + dq, computed from the
/// variance of dq and the centred cross term only.
double variance_increment(std::span<const double> q, std::span<const double> dq);

// ---- incremental Louvain bookkeeping --------------------------------------

struct MoveGain {
  std::vector<double> dq;  // per-layer modularity change
  double dM = 0.0;         // mean of dq
  double vdq = 0.0;        // sample variance of dq
  double rq = 0.0;         // variance increment of Q
  double dF = 0.0;         // change of the configured quality
};

class LouvainState;

/// Scratch space for evaluating every move of one node. Holds, per layer,
/// the weight from the node to each neighbouring community, and the removal
/// gain, which is shared by all candidate targets.
class NeighborScan {
 public:
  NeighborScan() = default;

  void gather(const LouvainState& state, const MultiplexGraph& g, NodeId i);

  NodeId node() const noexcept { return node_; }
  /// Neighbouring communities other than the node's own, in order of first
  /// appearance (layer by layer, neighbours by id).
  std::span<const CommunityId> candidates() const noexcept { return candidates_; }
  double weight_to(std::size_t s, CommunityId c) const { return weight_[c * k_ + s]; }

  /// Gain of moving the gathered node into `target`.
  MoveGain gain(const LouvainState& state, const MultiplexGraph& g, CommunityId target) const;
  /// Same as gain() but writes into `out`, reusing its storage.
  void gain_into(const LouvainState& state, const MultiplexGraph& g, CommunityId target,
                 MoveGain& out) const;

 private:
  NodeId node_ = 0;
  std::size_t k_ = 0;
  std::vector<double> weight_;  // [community * k + layer]
  std::vector<CommunityId> touched_;
  std::vector<CommunityId> candidates_;
  std::vector<double> remove_gain_;
};

/// Running per-layer, per-community sums for one partition of a graph.
/// Community ids are slots 0..slots-1; a slot may become empty during a
/// sweep, and partition() compacts them.
class LouvainState {
 public:
  LouvainState(const MultiplexGraph& g, const Partition& p, const QualityConfig& cfg);
  static LouvainState singletons(const MultiplexGraph& g, const QualityConfig& cfg);
  /// A state over zero nodes that only carries scores, for exercising
  /// ParetoList directly.
  static LouvainState from_scores(ModularityVector q, const QualityConfig& cfg);

  std::size_t node_count() const noexcept { return label_.size(); }
  std::size_t layer_count() const noexcept { return k_; }
  std::size_t slot_count() const noexcept { return members_.size(); }

  CommunityId community(NodeId i) const { return label_[i]; }
  std::span<const CommunityId> labels() const noexcept { return label_; }
  std::size_t members(CommunityId c) const { return members_[c]; }
  double sigma_tot(std::size_t s, CommunityId c) const { return sigma_tot_[c * k_ + s]; }
  double sigma_in(std::size_t s, CommunityId c) const { return sigma_in_[c * k_ + s]; }

  const ModularityVector& q() const noexcept { return q_; }
  double f() const noexcept { return f_; }
  const QualityConfig& config() const noexcept { return cfg_; }

  /// Compacted partition (ids by first appearance).
  Partition partition() const;

  /// Throws GraphError if `c` is out of range or empty.
  void check_community(CommunityId c) const;

  /// Moves the node gathered in `scan` into `target`; `gain` must come from
  /// the same scan.
  void apply(const MultiplexGraph& g, const NeighborScan& scan, CommunityId target,
             const MoveGain& gain);

 private:
  friend class NeighborScan;
  LouvainState() = default;

  std::size_t k_ = 0;
  QualityConfig cfg_;
  std::vector<CommunityId> label_;
  std::vector<std::size_t> members_;
  std::vector<double> sigma_tot_;  // [community * k + layer]
  std::vector<double> sigma_in_;
  ModularityVector q_;
  double f_ = 0.0;
};

/// Gain of moving node i into community `target` (zero if target is i's own).
MoveGain move_gain(const LouvainState& state, const MultiplexGraph& g, NodeId i,
                   CommunityId target);
/// Applies the move and returns its gain.
MoveGain apply_move(LouvainState& state, const MultiplexGraph& g, NodeId i, CommunityId target);

}  // namespace mxl
