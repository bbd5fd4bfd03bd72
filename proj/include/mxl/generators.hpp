#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mxl/graph.hpp"

namespace mxl {

/// Deterministic seed derivation: mixes a base seed with stream indices
/// (splitmix64), so every (instance, layer, run) gets its own stream.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0) noexcept;

struct SbmSpec {
  std::vector<std::size_t> sizes{125, 125, 125, 125};
  double p_in = 0.1;
  double p_out = 0.1 / 3.0;
  std::size_t informative_layers = 2;
  std::size_t noisy_layers = 0;
  double p_noise = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct LfrSpec {
  std::size_t n = 128;
  std::vector<std::size_t> community_sizes{32, 32, 32, 32};
  double avg_degree = 16.0;
  std::size_t max_degree = 32;
  double mu = 0.1;
  double degree_exponent = 2.0;
  bool noisy = false;  // one community, mu = 0
  std::uint64_t seed = 0;

  void validate() const;
};

struct GeneratedGraph {
  MultiplexGraph graph;
  Partition truth;
};

/// Multilayer SBM: every layer sampled independently over the same planted
/// communities (random node-to-community assignment).
GeneratedGraph gen_sbm(const SbmSpec& spec);

/// Single-layer LFR-style graph. Planted membership is a seeded random
/// assignment with the given community sizes.
GeneratedGraph gen_lfr(const LfrSpec& spec);

/// LFR layer for a fixed planted membership; used to stack independent
/// layers over one set of communities.
Layer gen_lfr_layer(const LfrSpec& spec, const Partition& membership);

/// Planted membership used by gen_lfr for this spec.
Partition lfr_membership(const LfrSpec& spec);

/// Erdos-Renyi layer. Throws GraphError unless p is in (0,1].
Layer gen_er(std::size_t n, double p, std::uint64_t seed);

}  // namespace mxl
