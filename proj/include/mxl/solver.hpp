#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mxl/graph.hpp"
#include "mxl/pareto.hpp"
#include "mxl/quality.hpp"

namespace mxl {

enum class Ordering { CommunitySize, Random, Natural };

const char* to_string(Ordering o) noexcept;
Ordering parse_ordering(std::string_view name);

struct SolverConfig {
  QualityConfig quality;
  Ordering ordering = Ordering::CommunitySize;
  std::uint64_t seed = 0;
  std::size_t max_outer_iters = 100;
  std::size_t max_inner_sweeps = 1000;

  void validate() const;
};

struct IterationRecord {
  double f = 0.0;                   // best F after phase one
  std::size_t list_size = 0;
  std::size_t communities = 0;      // of the best entry
  std::size_t sweeps = 0;
  std::size_t list_violations = 0;  // ParetoList::count_violations() after phase one
};

struct SolverResult {
  Partition partition;  // on the original nodes
  ModularityVector q;
  double f = 0.0;
  std::size_t outer_iterations = 0;
  std::vector<IterationRecord> history;
};

/// Hooks for tests and diagnostics. Default implementations do nothing.
class SolverObserver {
 public:
  virtual ~SolverObserver() = default;
  /// The best entry changed while processing `node`; `target` is the node's
  /// community in the new best entry.
  virtual void on_incumbent_move(std::size_t /*level*/, NodeId /*node*/, CommunityId /*target*/) {}
  virtual void on_phase_one(std::size_t /*level*/, const ParetoList& /*list*/) {}
};

/// Node visiting order for one level.
std::vector<NodeId> node_order(const MultiplexGraph& g, Ordering ordering, std::mt19937_64& rng);

struct PhaseOneResult {
  bool changed = false;
  std::size_t sweeps = 0;
};

/// Local moving over every entry of `list` until a full sweep inserts nothing.
PhaseOneResult phase_one(const MultiplexGraph& g, ParetoList& list, const SolverConfig& cfg,
                         std::span<const NodeId> order, SolverObserver* observer = nullptr,
                         std::size_t level = 0);

struct Coarsening {
  MultiplexGraph graph;
  std::vector<CommunityId> mapping;  // fine node -> coarse node
};

/// Contracts the communities of `best`.
Coarsening phase_two(const MultiplexGraph& g, const ListEntry& best);

SolverResult run(const MultiplexGraph& g, const SolverConfig& cfg,
                 SolverObserver* observer = nullptr);

// ---- method presets --------------------------------------------------------

enum class Method { MA, MVM, MVP, EVM, EVP, GL };

const char* to_string(Method m) noexcept;
Method parse_method(std::string_view name);

/// Builds the solver configuration for a named method. MA needs h; MVM/MVP
/// need h >= 2 and gamma; EVM/EVP force h = 1 and need gamma; GL is MA with
/// h = 1. Throws ConfigError on inconsistent arguments.
SolverConfig preset(Method m, std::optional<std::size_t> h = {},
                    std::optional<double> gamma = {});

/// Display name, e.g. "MVM2", "EVP", "GL".
std::string method_label(Method m, std::size_t h);

}  // namespace mxl
