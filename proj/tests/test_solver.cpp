#include <gtest/gtest.h>

#include <numeric>

#include "louvain_oracle.hpp"
#include "mxl/solver.hpp"
#include "support.hpp"

using namespace mxl;

namespace {

struct Trace : SolverObserver {
  std::vector<test::OracleMove> moves;
  std::size_t violations = 0;
  void on_incumbent_move(std::size_t level, NodeId node, CommunityId target) override {
    moves.push_back({level, node, target});
  }
  void on_phase_one(std::size_t, const ParetoList& list) override {
    violations += list.count_violations();
  }
};

SolverConfig natural(Method m, std::optional<std::size_t> h = {}, std::optional<double> g = {}) {
  SolverConfig cfg = preset(m, h, g);
  cfg.ordering = Ordering::Natural;
  return cfg;
}

double brute_force_best(const MultiplexGraph& g, std::size_t* count = nullptr) {
  double best = -1.0;
  std::size_t seen = 0;
  test::for_each_partition(g.node_count(), [&](std::span<const CommunityId> labels) {
    ++seen;
    best = std::max(best, test::modularity_oracle(g.layer(0), labels));
  });
  if (count) *count = seen;
  return best;
}

}  // namespace

TEST(Presets, Taxonomy) {
  const SolverConfig gl = preset(Method::GL);
  EXPECT_EQ(gl.quality.variant, Variant::Mean);
  EXPECT_EQ(gl.quality.h, 1u);
  const SolverConfig mvm = preset(Method::MVM, 2, 0.5);
  EXPECT_EQ(mvm.quality.variant, Variant::VarMinus);
  EXPECT_EQ(mvm.quality.h, 2u);
  EXPECT_EQ(preset(Method::EVP, std::nullopt, 0.3).quality.variant, Variant::VarPlus);
  EXPECT_EQ(preset(Method::MA, 3).quality.variant, Variant::Mean);
  EXPECT_THROW(preset(Method::EVP, 2, 0.5), ConfigError);
  EXPECT_THROW(preset(Method::EVM, 3, 0.5), ConfigError);
  EXPECT_THROW(preset(Method::MVM, 1, 0.5), ConfigError);
  EXPECT_THROW(preset(Method::MVP, 2), ConfigError);
  EXPECT_THROW(preset(Method::MA), ConfigError);
  EXPECT_THROW(parse_method("XYZ"), ConfigError);
  EXPECT_EQ(method_label(Method::MVM, 2), "MVM2");
  EXPECT_EQ(method_label(Method::EVM, 1), "EVM");
}

TEST(NodeOrder, CommunitySizeIsStableDescending) {
  const MultiplexGraph g({test::layer(4, {{0, 1}, {2, 3}})}, {1, 3, 1, 3});
  std::mt19937_64 rng(0);
  EXPECT_EQ(node_order(g, Ordering::CommunitySize, rng), (std::vector<NodeId>{1, 3, 0, 2}));
  const MultiplexGraph unit({test::layer(3, {{0, 1}})});
  EXPECT_EQ(node_order(unit, Ordering::CommunitySize, rng), (std::vector<NodeId>{0, 1, 2}));
}

TEST(PhaseOne, FixedPointLeavesListUnchanged) {
  const MultiplexGraph g = test::two_triangles();
  SolverConfig cfg = natural(Method::GL);
  ParetoList list(1);
  list.try_insert(LouvainState(g, test::triangles(), cfg.quality));
  const auto seq = list.best().seq;
  const std::vector<NodeId> order{0, 1, 2, 3, 4, 5};
  const PhaseOneResult r = phase_one(g, list, cfg, order);
  EXPECT_FALSE(r.changed);
  EXPECT_EQ(list.best().seq, seq);
}

TEST(PhaseOne, SingleEdgeMerges) {
  const MultiplexGraph g({test::layer(2, {{0, 1}})});
  SolverConfig cfg = natural(Method::GL);
  ParetoList list(1);
  list.try_insert(LouvainState::singletons(g, cfg.quality));
  const std::vector<NodeId> order{0, 1};
  EXPECT_TRUE(phase_one(g, list, cfg, order).changed);
  EXPECT_EQ(list.best().state.partition().community_count(), 1u);
  EXPECT_NEAR(list.best().q()[0], 0.0, 1e-15);
}

TEST(PhaseOne, DuplicateLayersMatchSingleLayer) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    const Layer l = test::random_layer(25, 0.2, rng);
    const MultiplexGraph one({l}), two({l, l});
    for (std::size_t h : {1u, 2u, 3u}) {
      SolverConfig cfg = natural(h == 1 ? Method::GL : Method::MA, h);
      std::vector<NodeId> order(25);
      std::iota(order.begin(), order.end(), NodeId{0});
      ParetoList a(h), b(h);
      a.try_insert(LouvainState::singletons(one, cfg.quality));
      b.try_insert(LouvainState::singletons(two, cfg.quality));
      phase_one(one, a, cfg, order);
      phase_one(two, b, cfg, order);
      ASSERT_EQ(a.size(), b.size());
      for (std::size_t e = 0; e < a.size(); ++e) {
        EXPECT_EQ(a.entries()[e].q()[0], b.entries()[e].q()[0]);
        EXPECT_EQ(b.entries()[e].q()[0], b.entries()[e].q()[1]);
      }
    }
  }
}

TEST(PhaseTwo, TrianglesContract) {
  const MultiplexGraph g = test::two_triangles();
  const ListEntry best{LouvainState(g, test::triangles(), QualityConfig{}), 0};
  const Coarsening c = phase_two(g, best);
  EXPECT_EQ(c.graph.node_count(), 2u);
  EXPECT_DOUBLE_EQ(c.graph.layer(0).self_loop(0), 3.0);
  EXPECT_EQ(c.mapping, (std::vector<CommunityId>{0, 0, 0, 1, 1, 1}));
  const ListEntry single{LouvainState::singletons(g, QualityConfig{}), 0};
  EXPECT_EQ(phase_two(g, single).graph, g);
}

TEST(Run, TwoTrianglesReachesBruteForceOptimum) {
  const MultiplexGraph g = test::two_triangles();
  std::size_t count = 0;
  const double optimum = brute_force_best(g, &count);
  EXPECT_EQ(count, 203u);
  EXPECT_NEAR(optimum, 10.0 / 28.0, 1e-15);
  for (const SolverConfig& cfg : {natural(Method::GL), natural(Method::MVM, 2, 0.1),
                                  natural(Method::MVM, 2, 0.5), natural(Method::MVM, 2, 0.9)}) {
    const SolverResult r = run(g, cfg);
    EXPECT_NEAR(r.q[0], 10.0 / 28.0, 1e-15);
    EXPECT_EQ(r.partition, test::triangles());
  }
}

TEST(Run, PerfectMatchingMergesPairs) {
  const MultiplexGraph g({test::layer(8, {{0, 1}, {2, 3}, {4, 5}, {6, 7}})});
  const SolverResult r = run(g, natural(Method::GL));
  EXPECT_EQ(r.partition.community_count(), 4u);
  EXPECT_NEAR(r.q[0], brute_force_best(g), 1e-12);
}

TEST(Run, IdenticalLayersHaveZeroVariance) {
  std::mt19937_64 rng(5);
  const Layer l = test::random_layer(30, 0.15, rng);
  const MultiplexGraph g({l, l});
  for (const SolverConfig& cfg :
       {natural(Method::EVM, {}, 0.5), natural(Method::EVP, {}, 0.5), natural(Method::MVP, 3, 0.7)}) {
    const SolverResult r = run(g, cfg);
    EXPECT_EQ(r.q[0], r.q[1]);
  }
}

TEST(Run, ReductionToClassicalLouvain) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 10 + static_cast<std::size_t>(t) * 2;
    const MultiplexGraph g({test::random_layer(n, 0.2, rng)});
    Trace trace;
    const SolverResult r = run(g, natural(Method::GL), &trace);
    const auto oracle = test::classical_louvain(test::dense(g.layer(0)), n);
    EXPECT_EQ(trace.moves, oracle.moves) << "graph " << t;
    std::vector<CommunityId> ol(oracle.labels.begin(), oracle.labels.end());
    EXPECT_EQ(r.partition, Partition::from_labels(ol));
  }
}

TEST(Run, ResultConsistencyAndInvariants) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const MultiplexGraph g = test::random_multiplex(40, 3, 0.12, rng);
    for (const SolverConfig& cfg : {preset(Method::MVM, 3, 0.5), preset(Method::MVP, 2, 0.3),
                                    preset(Method::MA, 2), preset(Method::EVM, {}, 0.7)}) {
      Trace trace;
      const SolverResult r = run(g, cfg, &trace);
      EXPECT_EQ(trace.violations, 0u);
      const auto fresh = test::modularity_vector_oracle(g, r.partition.labels());
      for (std::size_t s = 0; s < 3; ++s) EXPECT_NEAR(r.q[s], fresh[s], 1e-10);
      EXPECT_NEAR(r.f, quality(r.q, cfg.quality), 1e-15);
      for (std::size_t i = 1; i < r.history.size(); ++i)
        EXPECT_GE(r.history[i].f, r.history[i - 1].f - 1e-12);
      const SolverResult again = run(g, cfg);
      EXPECT_EQ(again.partition, r.partition);
      EXPECT_EQ(again.q, r.q);
    }
  }
}

TEST(Run, RandomOrderDependsOnSeedOnly) {
  std::mt19937_64 rng(10);
  const MultiplexGraph g = test::random_multiplex(60, 2, 0.08, rng);
  SolverConfig cfg = preset(Method::MVM, 2, 0.5);
  cfg.ordering = Ordering::Random;
  cfg.seed = 42;
  EXPECT_EQ(run(g, cfg).partition, run(g, cfg).partition);
}
