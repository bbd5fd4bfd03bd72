#include "mxl/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <unordered_set>
#include <utility>

namespace mxl {

namespace {

using Rng = std::mt19937_64;

constexpr std::size_t kEmptyLayerAttempts = 100;
constexpr std::size_t kLfrRestarts = 10;

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw GraphError(std::string(what) + " must lie in [0,1], got " + std::to_string(p));
}

Partition random_membership(const std::vector<std::size_t>& sizes, std::uint64_t seed) {
  std::vector<CommunityId> labels;
  for (std::size_t c = 0; c < sizes.size(); ++c)
    labels.insert(labels.end(), sizes[c], static_cast<CommunityId>(c));
  Rng rng(seed);
  std::shuffle(labels.begin(), labels.end(), rng);
  return Partition::from_contiguous(std::move(labels));
}

// Bernoulli sampling of every unordered pair; prob(u, v) gives the edge probability.
template <class Prob>
Layer sample_pairs(std::size_t n, Prob&& prob, std::uint64_t seed) {
  for (std::size_t attempt = 0; attempt < kEmptyLayerAttempts; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (uniform01(rng) < prob(u, v)) edges.push_back({u, v, 1.0});
    if (!edges.empty()) return Layer::from_edges(n, edges);
  }
  throw GraphError("could not sample a non-empty layer in " +
                   std::to_string(kEmptyLayerAttempts) + " attempts");
}

std::uint64_t pair_key(NodeId u, NodeId v) {
  if (u > v) std::swap(u, v);
  return (std::uint64_t{u} << 32) | v;
}

// Mean of the continuous power law x^-tau truncated to [a, b].
double power_law_mean(double a, double b, double tau) {
  if (std::abs(tau - 1.0) < 1e-12) return (b - a) / std::log(b / a);
  if (std::abs(tau - 2.0) < 1e-12) return std::log(b / a) / (1.0 / a - 1.0 / b);
  const double num = (std::pow(b, 2.0 - tau) - std::pow(a, 2.0 - tau)) / (2.0 - tau);
  const double den = (std::pow(b, 1.0 - tau) - std::pow(a, 1.0 - tau)) / (1.0 - tau);
  return num / den;
}

double sample_power_law(Rng& rng, double a, double b, double tau) {
  const double u = uniform01(rng);
  if (std::abs(tau - 1.0) < 1e-12) return a * std::pow(b / a, u);
  const double e = 1.0 - tau;
  return std::pow(std::pow(a, e) + u * (std::pow(b, e) - std::pow(a, e)), 1.0 / e);
}

// Lower cut-off that gives the requested mean, found by bisection.
double power_law_lower_bound(double mean, double b, double tau) {
  double lo = 1.0, hi = b;
  if (power_law_mean(lo, b, tau) >= mean) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (power_law_mean(mid, b, tau) < mean ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Random stub pairing that rejects self-loops, multi-edges and pairs failing
// `valid`; bad pairs are repaired by swapping endpoints with accepted edges.
template <class Valid>
bool match_stubs(std::vector<NodeId> stubs, Valid&& valid, std::unordered_set<std::uint64_t>& present,
                 std::vector<Edge>& out, Rng& rng) {
  std::shuffle(stubs.begin(), stubs.end(), rng);
  std::vector<std::pair<NodeId, NodeId>> good, bad;
  auto acceptable = [&](NodeId u, NodeId v) {
    return u != v && valid(u, v) && !present.contains(pair_key(u, v));
  };
  for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
    const NodeId u = stubs[k], v = stubs[k + 1];
    if (acceptable(u, v)) {
      present.insert(pair_key(u, v));
      good.emplace_back(u, v);
    } else {
      bad.emplace_back(u, v);
    }
  }
  const std::size_t max_attempts = 100 * std::max<std::size_t>(1, good.size() + bad.size());
  std::size_t attempts = 0;
  while (!bad.empty()) {
    if (good.empty() || ++attempts > max_attempts) return false;
    auto [u, v] = bad.back();
    const std::size_t idx = uniform_index(rng, good.size());
    auto [x, y] = good[idx];
    if (uniform01(rng) < 0.5) std::swap(x, y);
    if (acceptable(u, x) && acceptable(v, y) && pair_key(u, x) != pair_key(v, y)) {
      present.erase(pair_key(x, y));
      present.insert(pair_key(u, x));
      present.insert(pair_key(v, y));
      good[idx] = {u, x};
      good.emplace_back(v, y);
      bad.pop_back();
    }
  }
  for (auto [u, v] : good) out.push_back({u, v, 1.0});
  return true;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) noexcept {
  std::uint64_t x = splitmix64(base);
  x = splitmix64(x ^ a);
  x = splitmix64(x ^ b);
  return splitmix64(x ^ c);
}

// ---- SBM -------------------------------------------------------------------

void SbmSpec::validate() const {
  check_probability(p_in, "p_in");
  check_probability(p_out, "p_out");
  check_probability(p_noise, "p_noise");
  if (informative_layers > 0 && p_in < p_out)
    throw GraphError("informative layers need p_in >= p_out");
  if (informative_layers + noisy_layers == 0) throw GraphError("SBM needs at least one layer");
  if (std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) < 2)
    throw GraphError("SBM needs at least two nodes");
  for (std::size_t s : sizes)
    if (s == 0) throw GraphError("SBM community sizes must be positive");
}

GeneratedGraph gen_sbm(const SbmSpec& spec) {
  spec.validate();
  Partition truth = random_membership(spec.sizes, derive_seed(spec.seed, 0));
  const std::size_t n = truth.node_count();
  std::vector<Layer> layers;
  for (std::size_t s = 0; s < spec.informative_layers; ++s)
    layers.push_back(sample_pairs(
        n, [&](NodeId u, NodeId v) { return truth[u] == truth[v] ? spec.p_in : spec.p_out; },
        derive_seed(spec.seed, 1, s)));
  for (std::size_t s = 0; s < spec.noisy_layers; ++s)
    layers.push_back(sample_pairs(n, [&](NodeId, NodeId) { return spec.p_noise; },
                                  derive_seed(spec.seed, 2, s)));
  return {MultiplexGraph(std::move(layers)), std::move(truth)};
}

// ---- ER --------------------------------------------------------------------

Layer gen_er(std::size_t n, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0))
    throw GraphError("ER edge probability must lie in (0,1], got " + std::to_string(p));
  if (n < 2) throw GraphError("ER layer needs at least two nodes");
  return sample_pairs(n, [p](NodeId, NodeId) { return p; }, seed);
}

// ---- LFR -------------------------------------------------------------------

void LfrSpec::validate() const {
  if (n < 2) throw GraphError("LFR needs at least two nodes");
  if (!(avg_degree >= 1.0) || avg_degree > static_cast<double>(max_degree))
    throw GraphError("LFR needs 1 <= avg_degree <= max_degree");
  if (max_degree >= n) throw GraphError("LFR needs max_degree < n");
  if (!(mu >= 0.0 && mu < 1.0)) throw GraphError("LFR mixing mu must lie in [0,1)");
  if (!(degree_exponent > 0.0)) throw GraphError("LFR degree exponent must be positive");
  if (!noisy) {
    if (std::accumulate(community_sizes.begin(), community_sizes.end(), std::size_t{0}) != n)
      throw GraphError("LFR community sizes must sum to n");
    for (std::size_t s : community_sizes)
      if (s < 2) throw GraphError("LFR communities need at least two nodes");
  }
}

Partition lfr_membership(const LfrSpec& spec) {
  spec.validate();
  if (spec.noisy) return Partition::all_in_one(spec.n);
  return random_membership(spec.community_sizes, derive_seed(spec.seed, 0));
}

Layer gen_lfr_layer(const LfrSpec& spec, const Partition& membership) {
  spec.validate();
  const std::size_t n = spec.n;
  if (membership.node_count() != n) throw GraphError("LFR membership size differs from n");
  const double mu = spec.noisy ? 0.0 : spec.mu;
  const auto comm_sizes = membership.community_sizes();
  const double b = static_cast<double>(spec.max_degree);
  const double a = power_law_lower_bound(spec.avg_degree, b, spec.degree_exponent);

  for (std::size_t restart = 0; restart < kLfrRestarts; ++restart) {
    Rng rng(derive_seed(spec.seed, 1, restart));

    std::vector<std::size_t> intra(n), inter(n);
    for (NodeId i = 0; i < n; ++i) {
      auto d = static_cast<std::size_t>(std::lround(sample_power_law(rng, a, b, spec.degree_exponent)));
      d = std::clamp<std::size_t>(d, 1, spec.max_degree);
      const std::size_t cap = comm_sizes[membership[i]] - 1;
      auto intra_of = [mu](std::size_t deg) {
        return static_cast<std::size_t>(std::ceil((1.0 - mu) * static_cast<double>(deg) - 1e-9));
      };
      // Degrees whose intra share cannot fit in the community are lowered.
      while (d > 1 && intra_of(d) > cap) --d;
      if (intra_of(d) > cap)
        throw GraphError("LFR community of size " + std::to_string(cap + 1) +
                         " cannot host the requested intra-community degree");
      intra[i] = intra_of(d);
      inter[i] = d - intra[i];
    }

    // Parity: each community's intra stubs and the global inter stubs must be even.
    std::vector<std::vector<NodeId>> members(membership.community_count());
    for (NodeId i = 0; i < n; ++i) members[membership[i]].push_back(i);
    for (const auto& mem : members) {
      std::size_t sum = 0;
      for (NodeId i : mem) sum += intra[i];
      if (sum % 2 == 0) continue;
      const std::size_t start = uniform_index(rng, mem.size());
      for (std::size_t off = 0; off < mem.size(); ++off) {
        const NodeId i = mem[(start + off) % mem.size()];
        if (intra[i] + 1 <= mem.size() - 1 && intra[i] + inter[i] + 1 <= spec.max_degree) {
          ++intra[i];
          break;
        }
        if (intra[i] > 1) {
          --intra[i];
          break;
        }
      }
    }
    std::size_t inter_sum = std::accumulate(inter.begin(), inter.end(), std::size_t{0});
    if (inter_sum % 2 == 1) {
      const std::size_t start = uniform_index(rng, n);
      for (std::size_t off = 0; off < n; ++off) {
        const NodeId i = static_cast<NodeId>((start + off) % n);
        if (intra[i] + inter[i] + 1 <= spec.max_degree) {
          ++inter[i];
          break;
        }
        if (inter[i] > 0 && intra[i] + inter[i] > 1) {
          --inter[i];
          break;
        }
      }
    }

    std::unordered_set<std::uint64_t> present;
    std::vector<Edge> edges;
    bool ok = true;
    for (const auto& mem : members) {
      std::vector<NodeId> stubs;
      for (NodeId i : mem) stubs.insert(stubs.end(), intra[i], i);
      if (!match_stubs(std::move(stubs), [](NodeId, NodeId) { return true; }, present, edges, rng)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      std::vector<NodeId> stubs;
      for (NodeId i = 0; i < n; ++i) stubs.insert(stubs.end(), inter[i], i);
      ok = match_stubs(
          std::move(stubs), [&](NodeId u, NodeId v) { return membership[u] != membership[v]; },
          present, edges, rng);
    }
    if (ok && !edges.empty()) return Layer::from_edges(n, edges);
  }
  throw GraphError("LFR stub matching failed after " + std::to_string(kLfrRestarts) + " restarts");
}

GeneratedGraph gen_lfr(const LfrSpec& spec) {
  Partition truth = lfr_membership(spec);
  Layer layer = gen_lfr_layer(spec, truth);
  std::vector<Layer> layers;
  layers.push_back(std::move(layer));
  return {MultiplexGraph(std::move(layers)), std::move(truth)};
}

}  // namespace mxl
