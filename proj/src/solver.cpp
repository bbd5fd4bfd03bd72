#include "mxl/solver.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace mxl {

const char* to_string(Ordering o) noexcept {
  switch (o) {
    case Ordering::CommunitySize: return "community-size";
    case Ordering::Random: return "random";
    case Ordering::Natural: return "natural";
  }
  return "?";
}

Ordering parse_ordering(std::string_view name) {
  if (name == "community-size" || name == "size") return Ordering::CommunitySize;
  if (name == "random") return Ordering::Random;
  if (name == "natural") return Ordering::Natural;
  throw ConfigError("unknown ordering '" + std::string(name) + "'");
}

void SolverConfig::validate() const {
  quality.validate();
  if (max_outer_iters < 1 || max_inner_sweeps < 1)
    throw ConfigError("iteration bounds must be >= 1");
}

std::vector<NodeId> node_order(const MultiplexGraph& g, Ordering ordering, std::mt19937_64& rng) {
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  switch (ordering) {
    case Ordering::Natural: break;
    case Ordering::Random: std::shuffle(order.begin(), order.end(), rng); break;
    case Ordering::CommunitySize:
      std::stable_sort(order.begin(), order.end(),
                       [&](NodeId a, NodeId b) { return g.node_size(a) > g.node_size(b); });
      break;
  }
  return order;
}

PhaseOneResult phase_one(const MultiplexGraph& g, ParetoList& list, const SolverConfig& cfg,
                         std::span<const NodeId> order, SolverObserver* observer,
                         std::size_t level) {
  PhaseOneResult result;
  NeighborScan scan;
  MoveGain gain;
  std::vector<std::uint64_t> snapshot;
  struct Positive {
    CommunityId target;
    MoveGain gain;
  };
  std::vector<Positive> positives;
  ModularityVector q_new;

  for (std::size_t sweep = 0; sweep < cfg.max_inner_sweeps; ++sweep) {
    ++result.sweeps;
    bool inserted_any = false;
    for (NodeId i : order) {
      const std::uint64_t best_before = list.best().seq;
      snapshot.clear();
      for (const ListEntry& e : list.entries()) snapshot.push_back(e.seq);

      for (std::uint64_t seq : snapshot) {
        const ListEntry* entry = list.find(seq);
        if (!entry) continue;
        const LouvainState& source = entry->state;
        scan.gather(source, g, i);
        positives.clear();
        for (CommunityId t : scan.candidates()) {
          scan.gain_into(source, g, t, gain);
          if (gain.dF > 0.0) positives.push_back({t, gain});
        }
        if (positives.empty()) continue;

        // Insertions may evict the source entry, so work from a copy.
        const LouvainState base = source;
        for (const Positive& p : positives) {
          q_new = base.q();
          for (std::size_t s = 0; s < q_new.size(); ++s) q_new[s] += p.gain.dq[s];
          if (list.admissible(q_new, quality(q_new, base.config())) != InsertOutcome::Inserted)
            continue;
          LouvainState candidate = base;
          candidate.apply(g, scan, p.target, p.gain);
          if (list.try_insert(std::move(candidate)) == InsertOutcome::Inserted) inserted_any = true;
        }
      }

      if (observer && list.best().seq != best_before)
        observer->on_incumbent_move(level, i, list.best().state.community(i));
    }
    if (!inserted_any) break;
    result.changed = true;
  }
  return result;
}

Coarsening phase_two(const MultiplexGraph& g, const ListEntry& best) {
  const Partition p = best.state.partition();
  return Coarsening{contract(g, p), std::vector<CommunityId>(p.labels().begin(), p.labels().end())};
}

SolverResult run(const MultiplexGraph& g, const SolverConfig& cfg, SolverObserver* observer) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  SolverResult result;

  std::optional<MultiplexGraph> coarse;  // empty while working on g itself
  auto current = [&]() -> const MultiplexGraph& { return coarse ? *coarse : g; };

  std::vector<CommunityId> to_current(g.node_count());
  std::iota(to_current.begin(), to_current.end(), CommunityId{0});

  auto fresh_list = [&](const MultiplexGraph& graph) {
    ParetoList list(cfg.quality.h);
    list.try_insert(LouvainState::singletons(graph, cfg.quality));
    return list;
  };
  ParetoList list = fresh_list(g);

  for (std::size_t level = 0; level < cfg.max_outer_iters; ++level) {
    const auto order = node_order(current(), cfg.ordering, rng);
    const PhaseOneResult phase = phase_one(current(), list, cfg, order, observer, level);
    if (observer) observer->on_phase_one(level, list);

    const ListEntry& best = list.best();
    result.history.push_back({best.f(), list.size(), best.state.partition().community_count(),
                              phase.sweeps, list.count_violations()});
    ++result.outer_iterations;
    if (!phase.changed) break;

    Coarsening next = phase_two(current(), best);
    for (CommunityId& c : to_current) c = next.mapping[c];
    coarse = std::move(next.graph);
    list = fresh_list(*coarse);
  }

  const Partition on_current = list.best().state.partition();
  result.partition = expand_partition(on_current, to_current);
  result.partition = Partition::from_labels(result.partition.labels());
  result.q = modularity_vector(g, result.partition);
  result.f = quality(result.q, cfg.quality);
  return result;
}

// ---- presets ---------------------------------------------------------------

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::MA: return "MA";
    case Method::MVM: return "MVM";
    case Method::MVP: return "MVP";
    case Method::EVM: return "EVM";
    case Method::EVP: return "EVP";
    case Method::GL: return "GL";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::MA, Method::MVM, Method::MVP, Method::EVM, Method::EVP, Method::GL})
    if (name == to_string(m)) return m;
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

SolverConfig preset(Method m, std::optional<std::size_t> h, std::optional<double> gamma) {
  SolverConfig cfg;
  const std::string name = to_string(m);
  auto need_gamma = [&] {
    if (!gamma) throw ConfigError(name + " requires gamma");
    cfg.quality.gamma = *gamma;
  };
  switch (m) {
    case Method::GL:
      if (h && *h != 1) throw ConfigError("GL fixes h = 1");
      cfg.quality.variant = Variant::Mean;
      cfg.quality.h = 1;
      break;
    case Method::MA:
      if (!h) throw ConfigError("MA requires h");
      cfg.quality.variant = Variant::Mean;
      cfg.quality.h = *h;
      break;
    case Method::MVM:
    case Method::MVP:
      if (!h || *h < 2) throw ConfigError(name + " requires h >= 2");
      need_gamma();
      cfg.quality.variant = m == Method::MVM ? Variant::VarMinus : Variant::VarPlus;
      cfg.quality.h = *h;
      break;
    case Method::EVM:
    case Method::EVP:
      if (h && *h != 1) throw ConfigError(name + " fixes h = 1");
      need_gamma();
      cfg.quality.variant = m == Method::EVM ? Variant::VarMinus : Variant::VarPlus;
      cfg.quality.h = 1;
      break;
  }
  cfg.validate();
  return cfg;
}

std::string method_label(Method m, std::size_t h) {
  switch (m) {
    case Method::MA:
    case Method::MVM:
    case Method::MVP: return std::string(to_string(m)) + std::to_string(h);
    default: return to_string(m);
  }
}

}  // namespace mxl
