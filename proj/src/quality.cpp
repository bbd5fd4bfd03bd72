#include "mxl/quality.hpp"

#include <algorithm>
#include <string>

#include "mxl/kernels.hpp"

namespace mxl {

const char* to_string(Variant v) noexcept {
  switch (v) {
    case Variant::Mean: return "mean";
    case Variant::VarMinus: return "var-minus";
    case Variant::VarPlus: return "var-plus";
  }
  return "?";
}

void QualityConfig::validate() const {
  if (h < 1) throw ConfigError("list length h must be >= 1");
  if (variant != Variant::Mean && !(gamma > 0.0 && gamma < 1.0))
    throw ConfigError("gamma must lie strictly inside (0,1), got " + std::to_string(gamma));
}

double modularity_layer(const MultiplexGraph& g, std::size_t s, const Partition& p) {
  if (p.node_count() != g.node_count())
    throw GraphError("partition size does not match graph node count");
  return kernels::layer_modularity(g.layer(s), p.labels(), p.community_count());
}

ModularityVector modularity_vector(const MultiplexGraph& g, const Partition& p) {
  if (p.node_count() != g.node_count())
    throw GraphError("partition size does not match graph node count");
  return kernels::modularity_vector(g, p);
}

double mean_modularity(std::span<const double> q) {
  double sum = 0.0;
  for (double x : q) sum += x;
  return sum / static_cast<double>(q.size());
}

double variance_modularity(std::span<const double> q) {
  if (q.size() < 2) return 0.0;
  const double mean = mean_modularity(q);
  double ss = 0.0;
  for (double x : q) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(q.size() - 1);
}

double quality(std::span<const double> q, const QualityConfig& cfg) {
  const double mean = mean_modularity(q);
  switch (cfg.variant) {
    case Variant::Mean: return mean;
    case Variant::VarMinus: return (1.0 - cfg.gamma) * mean - cfg.gamma * variance_modularity(q);
    case Variant::VarPlus: return (1.0 - cfg.gamma) * mean + cfg.gamma * variance_modularity(q);
  }
  return mean;
}

double variance_increment(std::span<const double> q, std::span<const double> dq) {
  const std::size_t k = q.size();
  if (k < 2) return 0.0;
  const double mq = mean_modularity(q);
  const double mdq = mean_modularity(dq);
  double cross = 0.0;
  for (std::size_t s = 0; s < k; ++s) cross += (q[s] - mq) * (dq[s] - mdq);
  return variance_modularity(dq) + 2.0 / static_cast<double>(k - 1) * cross;
}

// ---- NeighborScan ----------------------------------------------------------

void NeighborScan::gather(const LouvainState& state, const MultiplexGraph& g, NodeId i) {
  k_ = state.k_;
  const std::size_t slots = state.slot_count();
  if (weight_.size() < slots * k_) weight_.resize(slots * k_, 0.0);
  for (CommunityId c : touched_)
    std::fill_n(weight_.begin() + static_cast<std::ptrdiff_t>(c * k_), k_, 0.0);
  touched_.clear();
  candidates_.clear();
  node_ = i;

  const CommunityId own = state.label_[i];
  // The own community is always touched so its row is reset next time.
  touched_.push_back(own);
  for (std::size_t s = 0; s < k_; ++s) {
    const Layer& layer = g.layer(s);
    auto nb = layer.neighbors(i);
    auto ws = layer.weights(i);
    for (std::size_t e = 0; e < nb.size(); ++e) {
      const CommunityId c = state.label_[nb[e]];
      double* row = weight_.data() + c * k_;
      if (c != own && std::all_of(row, row + k_, [](double w) { return w == 0.0; })) {
        touched_.push_back(c);
        candidates_.push_back(c);
      }
      row[s] += ws[e];
    }
  }

  remove_gain_.resize(k_);
  for (std::size_t s = 0; s < k_; ++s) {
    const double m = g.total_weight(s);
    const double d = g.degree(s, i);
    const double tot_rest = state.sigma_tot(s, own) - d;
    remove_gain_[s] = -weight_to(s, own) / m + d * tot_rest / (2.0 * m * m);
  }
}

void NeighborScan::gain_into(const LouvainState& state, const MultiplexGraph& g,
                             CommunityId target, MoveGain& out) const {
  state.check_community(target);
  out.dq.assign(k_, 0.0);
  out.dM = out.vdq = out.rq = out.dF = 0.0;
  if (target == state.label_[node_]) return;
  for (std::size_t s = 0; s < k_; ++s) {
    const double m = g.total_weight(s);
    const double d = g.degree(s, node_);
    const double insert = weight_to(s, target) / m - state.sigma_tot(s, target) * d / (2.0 * m * m);
    out.dq[s] = remove_gain_[s] + insert;
  }
  out.dM = mean_modularity(out.dq);
  out.vdq = variance_modularity(out.dq);
  out.rq = variance_increment(state.q(), out.dq);
  const QualityConfig& cfg = state.config();
  switch (cfg.variant) {
    case Variant::Mean: out.dF = out.dM; break;
    case Variant::VarMinus: out.dF = (1.0 - cfg.gamma) * out.dM - cfg.gamma * out.rq; break;
    case Variant::VarPlus: out.dF = (1.0 - cfg.gamma) * out.dM + cfg.gamma * out.rq; break;
  }
}

MoveGain NeighborScan::gain(const LouvainState& state, const MultiplexGraph& g,
                            CommunityId target) const {
  MoveGain out;
  gain_into(state, g, target, out);
  return out;
}

// ---- LouvainState ----------------------------------------------------------

LouvainState::LouvainState(const MultiplexGraph& g, const Partition& p, const QualityConfig& cfg)
    : k_(g.layer_count()), cfg_(cfg), label_(p.labels().begin(), p.labels().end()) {
  cfg_.validate();
  if (p.node_count() != g.node_count())
    throw GraphError("partition size does not match graph node count");
  const std::size_t c = p.community_count();
  members_.assign(c, 0);
  for (CommunityId l : label_) ++members_[l];
  sigma_tot_.assign(c * k_, 0.0);
  sigma_in_.assign(c * k_, 0.0);
  q_.assign(k_, 0.0);
  for (std::size_t s = 0; s < k_; ++s) {
    const auto sums = kernels::community_sums(g.layer(s), label_, c);
    const double m = g.total_weight(s);
    double q = 0.0;
    for (std::size_t a = 0; a < c; ++a) {
      sigma_tot_[a * k_ + s] = sums.tot[a];
      sigma_in_[a * k_ + s] = sums.in[a];
      const double frac = sums.tot[a] / (2.0 * m);
      q += sums.in[a] / m - frac * frac;
    }
    q_[s] = q;
  }
  f_ = quality(q_, cfg_);
}

LouvainState LouvainState::singletons(const MultiplexGraph& g, const QualityConfig& cfg) {
  return LouvainState(g, Partition::singletons(g.node_count()), cfg);
}

LouvainState LouvainState::from_scores(ModularityVector q, const QualityConfig& cfg) {
  cfg.validate();
  LouvainState st;
  st.k_ = q.size();
  st.cfg_ = cfg;
  st.q_ = std::move(q);
  st.f_ = quality(st.q_, st.cfg_);
  return st;
}

Partition LouvainState::partition() const { return Partition::from_labels(label_); }

void LouvainState::check_community(CommunityId c) const {
  if (c >= members_.size() || members_[c] == 0)
    throw GraphError("unknown community id " + std::to_string(c));
}

void LouvainState::apply(const MultiplexGraph& g, const NeighborScan& scan, CommunityId target,
                         const MoveGain& gain) {
  const NodeId i = scan.node();
  const CommunityId own = label_[i];
  check_community(target);
  if (target == own) return;
  for (std::size_t s = 0; s < k_; ++s) {
    const double d = g.degree(s, i);
    const double loop = g.layer(s).self_loop(i);
    sigma_tot_[own * k_ + s] -= d;
    sigma_tot_[target * k_ + s] += d;
    sigma_in_[own * k_ + s] -= scan.weight_to(s, own) + loop;
    sigma_in_[target * k_ + s] += scan.weight_to(s, target) + loop;
    q_[s] += gain.dq[s];
  }
  --members_[own];
  ++members_[target];
  label_[i] = target;
  f_ = quality(q_, cfg_);
}

MoveGain move_gain(const LouvainState& state, const MultiplexGraph& g, NodeId i,
                   CommunityId target) {
  if (i >= state.node_count()) throw GraphError("unknown node id " + std::to_string(i));
  NeighborScan scan;
  scan.gather(state, g, i);
  return scan.gain(state, g, target);
}

MoveGain apply_move(LouvainState& state, const MultiplexGraph& g, NodeId i, CommunityId target) {
  if (i >= state.node_count()) throw GraphError("unknown node id " + std::to_string(i));
  NeighborScan scan;
  scan.gather(state, g, i);
  MoveGain gain = scan.gain(state, g, target);
  state.apply(g, scan, target, gain);
  return gain;
}

}  // namespace mxl
