#include <gtest/gtest.h>

#include "mxl/quality.hpp"
#include "support.hpp"

using namespace mxl;

namespace {

constexpr Variant kVariants[] = {Variant::Mean, Variant::VarMinus, Variant::VarPlus};

QualityConfig config(Variant v, double gamma = 0.3) { return {v, gamma, 1}; }

}  // namespace

TEST(Modularity, AllInOneIsZero) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const MultiplexGraph g = test::random_multiplex(20, 3, 0.3, rng, false, 0.1);
    for (double q : modularity_vector(g, Partition::all_in_one(20))) EXPECT_NEAR(q, 0.0, 1e-12);
  }
}

TEST(Modularity, SingleEdgeSingletons) {
  const MultiplexGraph g({test::layer(2, {{0, 1}})});
  EXPECT_DOUBLE_EQ(modularity_layer(g, 0, Partition::singletons(2)), -0.5);
}

TEST(Modularity, TwoTriangles) {
  const MultiplexGraph g = test::two_triangles();
  const double oracle = test::modularity_oracle(g.layer(0), test::triangles().labels());
  EXPECT_NEAR(oracle, 10.0 / 28.0, 1e-15);
  EXPECT_NEAR(modularity_layer(g, 0, test::triangles()), 10.0 / 28.0, 1e-15);
}

TEST(Modularity, MatchesOrderedPairOracle) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    const MultiplexGraph g = test::random_multiplex(18, 2, 0.3, rng, false, 0.15);
    const Partition p = test::random_partition(18, 4, rng);
    const auto q = modularity_vector(g, p);
    const auto o = test::modularity_vector_oracle(g, p.labels());
    for (std::size_t s = 0; s < 2; ++s) {
      EXPECT_NEAR(q[s], o[s], 1e-12);
      EXPECT_GE(q[s], -1.0);
      EXPECT_LE(q[s], 1.0);
    }
  }
}

TEST(ModularityVector, LoadExampleMatchesPerLayer) {
  const MultiplexGraph g = parse_multiplex("0 0 1\n0 1 2\n1 0 2\n");
  const auto q = modularity_vector(g, Partition::singletons(3));
  // Layer 0: path 0-1-2, m=2: -(1+4+1)/16. Layer 1: edge 0-2, m=1: -(1+1)/4.
  EXPECT_DOUBLE_EQ(q[0], -6.0 / 16.0);
  EXPECT_DOUBLE_EQ(q[1], -0.5);
  const MultiplexGraph twin({test::layer(4, {{0, 1}, {2, 3}, {1, 2}}), test::layer(4, {{0, 1}, {2, 3}, {1, 2}})});
  const auto qt = modularity_vector(twin, Partition::from_labels(std::vector<CommunityId>{0, 0, 1, 1}));
  EXPECT_EQ(qt[0], qt[1]);
}

TEST(Scalars, MeanVarianceQuality) {
  EXPECT_DOUBLE_EQ(mean_modularity(std::vector<double>{0.5, 0.5}), 0.5);
  EXPECT_DOUBLE_EQ(mean_modularity(std::vector<double>{0.6, 0.4}), 0.5);
  EXPECT_NEAR(mean_modularity(std::vector<double>{0.1, 0.2, 0.3}), 0.2, 1e-15);
  EXPECT_DOUBLE_EQ(variance_modularity(std::vector<double>{0.5, 0.5}), 0.0);
  EXPECT_NEAR(variance_modularity(std::vector<double>{0.6, 0.4}), 0.02, 1e-15);
  EXPECT_DOUBLE_EQ(variance_modularity(std::vector<double>{0.3}), 0.0);

  const std::vector<double> flat{0.5, 0.5}, split{0.6, 0.4};
  EXPECT_DOUBLE_EQ(quality(flat, config(Variant::VarMinus, 0.5)), 0.25);
  EXPECT_NEAR(quality(split, config(Variant::VarMinus, 0.5)), 0.24, 1e-15);
  EXPECT_NEAR(quality(split, config(Variant::VarPlus, 0.5)), 0.26, 1e-15);
  EXPECT_DOUBLE_EQ(quality(split, config(Variant::Mean)), mean_modularity(split));
}

TEST(QualityConfig, Validation) {
  EXPECT_THROW((QualityConfig{Variant::VarMinus, 0.0, 1}.validate()), ConfigError);
  EXPECT_THROW((QualityConfig{Variant::VarPlus, 1.0, 1}.validate()), ConfigError);
  EXPECT_THROW((QualityConfig{Variant::Mean, 0.5, 0}.validate()), ConfigError);
  EXPECT_NO_THROW((QualityConfig{Variant::Mean, 7.0, 2}.validate()));
}

TEST(VarianceIncrement, MatchesDifferenceOfVariances) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> kd(2, 6);
  for (int t = 0; t < 10000; ++t) {
    const int k = kd(rng);
    std::vector<double> q(k), dq(k), sum(k);
    for (int s = 0; s < k; ++s) {
      q[s] = u(rng);
      dq[s] = 0.2 * u(rng);
      sum[s] = q[s] + dq[s];
    }
    EXPECT_NEAR(variance_modularity(sum) - variance_modularity(q), variance_increment(q, dq), 1e-12);
  }
}

TEST(MoveGain, OwnCommunityIsZero) {
  std::mt19937_64 rng(5);
  const MultiplexGraph g = test::random_multiplex(10, 2, 0.4, rng);
  const LouvainState st(g, test::random_partition(10, 3, rng), config(Variant::VarMinus));
  const MoveGain mg = move_gain(st, g, 4, st.community(4));
  EXPECT_EQ(mg.dF, 0.0);
  EXPECT_EQ(mg.rq, 0.0);
  for (double x : mg.dq) EXPECT_EQ(x, 0.0);
}

TEST(MoveGain, SingleEdgeMerge) {
  const MultiplexGraph g({test::layer(2, {{0, 1}})});
  const LouvainState st = LouvainState::singletons(g, config(Variant::Mean));
  const MoveGain mg = move_gain(st, g, 0, st.community(1));
  EXPECT_DOUBLE_EQ(mg.dq[0], 0.5);
  EXPECT_DOUBLE_EQ(mg.dF, 0.5);
}

TEST(MoveGain, UnknownTargetThrows) {
  const MultiplexGraph g({test::layer(3, {{0, 1}, {1, 2}})});
  LouvainState st = LouvainState::singletons(g, config(Variant::Mean));
  EXPECT_THROW(move_gain(st, g, 0, 17), GraphError);
  apply_move(st, g, 0, st.community(1));
  EXPECT_THROW(move_gain(st, g, 2, 0), GraphError);  // slot 0 is now empty
  EXPECT_THROW(move_gain(st, g, 9, 1), GraphError);
}

TEST(MoveGain, MatchesFromScratchForAllVariants) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 20; ++t) {
    const MultiplexGraph g = test::random_multiplex(20, 3, 0.25, rng, false, 0.1);
    const Partition start = test::random_partition(20, 5, rng);
    for (Variant v : kVariants) {
      const QualityConfig cfg = config(v, 0.4);
      const LouvainState st(g, start, cfg);
      for (NodeId i = 0; i < 20; ++i) {
        for (CommunityId c = 0; c < st.slot_count(); ++c) {
          if (!st.members(c)) continue;
          std::vector<CommunityId> labels(st.labels().begin(), st.labels().end());
          labels[i] = c;
          const auto q_after = test::modularity_vector_oracle(g, labels);
          const auto q_before = test::modularity_vector_oracle(g, st.labels());
          const MoveGain mg = move_gain(st, g, i, c);
          for (std::size_t s = 0; s < 3; ++s) EXPECT_NEAR(mg.dq[s], q_after[s] - q_before[s], 1e-10);
          EXPECT_NEAR(mg.dF,
                      test::quality_oracle(q_after, v, 0.4) - test::quality_oracle(q_before, v, 0.4),
                      1e-10);
        }
      }
    }
  }
}

TEST(ApplyMove, InverseRestoresState) {
  std::mt19937_64 rng(7);
  const MultiplexGraph g = test::random_multiplex(15, 2, 0.3, rng);
  const LouvainState st0(g, test::random_partition(15, 4, rng), config(Variant::VarPlus));
  LouvainState st = st0;
  NodeId i = 0;
  while (st.members(st.community(i)) < 2) ++i;
  const CommunityId from = st.community(i);
  CommunityId to = 0;
  while (to == from || !st.members(to)) ++to;
  const MoveGain mg = apply_move(st, g, i, to);
  for (std::size_t s = 0; s < 2; ++s) EXPECT_NEAR(st.q()[s], st0.q()[s] + mg.dq[s], 1e-15);
  apply_move(st, g, i, from);
  EXPECT_EQ(st.partition(), st0.partition());
  for (std::size_t s = 0; s < 2; ++s) EXPECT_NEAR(st.q()[s], st0.q()[s], 1e-12);
}

TEST(ApplyMove, RandomWalkKeepsCacheExact) {
  std::mt19937_64 rng(8);
  const MultiplexGraph g = test::random_multiplex(30, 3, 0.2, rng, false, 0.05);
  LouvainState st = LouvainState::singletons(g, config(Variant::VarMinus));
  std::uniform_int_distribution<NodeId> node(0, 29);
  for (int step = 0; step < 100; ++step) {
    const NodeId i = node(rng);
    std::vector<CommunityId> live;
    for (CommunityId c = 0; c < st.slot_count(); ++c)
      if (st.members(c)) live.push_back(c);
    apply_move(st, g, i, live[std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng)]);
  }
  const auto fresh = test::modularity_vector_oracle(g, st.labels());
  for (std::size_t s = 0; s < 3; ++s) EXPECT_NEAR(st.q()[s], fresh[s], 1e-10);
  EXPECT_NEAR(st.f(), test::quality_oracle(fresh, Variant::VarMinus, 0.3), 1e-10);
  for (std::size_t s = 0; s < 3; ++s) {
    double tot = 0.0;
    for (CommunityId c = 0; c < st.slot_count(); ++c) tot += st.sigma_tot(s, c);
    EXPECT_NEAR(tot, 2.0 * g.total_weight(s), 1e-9);
  }
}

TEST(NeighborScan, CandidatesInFirstAppearanceOrder) {
  // Node 0 sees community of 3 first in layer 0, then of 1 in layer 1.
  const MultiplexGraph g({test::layer(4, {{0, 3}, {1, 2}}), test::layer(4, {{0, 1}, {0, 3}, {2, 3}})});
  const LouvainState st = LouvainState::singletons(g, config(Variant::Mean));
  NeighborScan scan;
  scan.gather(st, g, 0);
  const std::vector<CommunityId> got(scan.candidates().begin(), scan.candidates().end());
  EXPECT_EQ(got, (std::vector<CommunityId>{st.community(3), st.community(1)}));
  EXPECT_DOUBLE_EQ(scan.weight_to(1, st.community(3)), 1.0);
  EXPECT_DOUBLE_EQ(scan.weight_to(0, st.community(1)), 0.0);
}
