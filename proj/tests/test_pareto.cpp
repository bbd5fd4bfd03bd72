#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mxl/pareto.hpp"

using namespace mxl;

namespace {

const QualityConfig kMean{Variant::Mean, 0.5, 1};

LouvainState scores(std::vector<double> q) { return LouvainState::from_scores(std::move(q), kMean); }

}  // namespace

TEST(Dominates, Definition) {
  using V = std::vector<double>;
  EXPECT_TRUE(dominates(V{1, 2}, V{1, 1}));
  EXPECT_FALSE(dominates(V{1, 2}, V{2, 1}));
  EXPECT_FALSE(dominates(V{2, 1}, V{1, 2}));
  EXPECT_FALSE(dominates(V{1, 1}, V{1, 1}));
  EXPECT_THROW(dominates(V{1, 2}, V{1}), std::invalid_argument);
}

TEST(ParetoList, EmptyListAcceptsAnything) {
  ParetoList list(2);
  EXPECT_EQ(list.try_insert(scores({0.1, 0.2})), InsertOutcome::Inserted);
  EXPECT_EQ(list.size(), 1u);
}

TEST(ParetoList, DominatedEntriesAreRemoved) {
  ParetoList list(2);
  list.try_insert(scores({0.3, 0.3}));
  EXPECT_EQ(list.try_insert(scores({0.4, 0.4})), InsertOutcome::Inserted);
  ASSERT_EQ(list.size(), 1u);
  EXPECT_DOUBLE_EQ(list.best().f(), 0.4);
}

TEST(ParetoList, WeakCandidateIsCutAndListUnchanged) {
  ParetoList list(2);
  list.try_insert(scores({0.6, 0.4}));   // f = 0.5
  list.try_insert(scores({0.25, 0.55}));  // f = 0.4
  ASSERT_EQ(list.size(), 2u);
  const auto before0 = list.entries()[0].seq, before1 = list.entries()[1].seq;
  EXPECT_EQ(list.try_insert(scores({0.7, -0.1})), InsertOutcome::RejectedCut);  // f = 0.3
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list.entries()[0].seq, before0);
  EXPECT_EQ(list.entries()[1].seq, before1);
}

TEST(ParetoList, DominatedOrEqualCandidateRejected) {
  ParetoList list(3);
  list.try_insert(scores({0.5, 0.5}));
  EXPECT_EQ(list.try_insert(scores({0.5, 0.4})), InsertOutcome::RejectedDominated);
  EXPECT_EQ(list.try_insert(scores({0.5, 0.5})), InsertOutcome::RejectedDominated);
  EXPECT_EQ(list.size(), 1u);
}

TEST(ParetoList, BestAndTieOrder) {
  ParetoList empty(1);
  EXPECT_THROW(empty.best(), std::logic_error);

  ParetoList list(3);
  list.try_insert(scores({0.4, 0.4}));
  EXPECT_DOUBLE_EQ(list.best().f(), 0.4);
  list.try_insert(scores({0.8, 0.2}));  // f = 0.5
  EXPECT_DOUBLE_EQ(list.best().f(), 0.5);
  list.try_insert(scores({0.1, 0.9}));  // f = 0.5, later
  EXPECT_EQ(list.best().q()[0], 0.8);
  EXPECT_EQ(list.count_violations(), 0u);
}

TEST(ParetoList, EqualFCutKeepsEarlier) {
  ParetoList list(1);
  list.try_insert(scores({0.8, 0.2}));
  EXPECT_EQ(list.try_insert(scores({0.2, 0.8})), InsertOutcome::RejectedCut);
  EXPECT_EQ(list.best().q()[0], 0.8);
}

TEST(ParetoList, SingleSlotIsGreedyIncumbent) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.5, 1.0);
  ParetoList list(1);
  list.try_insert(scores({u(rng), u(rng)}));
  for (int t = 0; t < 500; ++t) {
    const double before = list.best().f();
    auto cand = scores({u(rng), u(rng)});
    const double f = cand.f();
    const auto outcome = list.try_insert(std::move(cand));
    if (outcome == InsertOutcome::Inserted) EXPECT_GT(list.best().f(), before);
    else EXPECT_EQ(list.best().f(), before);
    if (f > before && outcome != InsertOutcome::Inserted) ADD_FAILURE() << "improvement rejected";
  }
}

TEST(ParetoList, RandomSequencesKeepInvariants) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t h = 1; h <= 5; ++h) {
    ParetoList list(h);
    for (int t = 0; t < 2000; ++t) {
      std::vector<double> q(3);
      for (double& x : q) x = std::round(u(rng) * 20.0) / 20.0;  // force equal coordinates
      auto cand = scores(q);
      const auto predicted = list.admissible(cand.q(), cand.f());
      EXPECT_EQ(list.try_insert(std::move(cand)), predicted);
      ASSERT_LE(list.size(), h);
      ASSERT_EQ(list.count_violations(), 0u);
      double top = -1e300;
      for (const auto& e : list.entries()) top = std::max(top, e.f());
      EXPECT_EQ(list.best().f(), top);
      for (std::size_t a = 0; a < list.size(); ++a)
        for (std::size_t b = 0; b < list.size(); ++b)
          if (a != b) ASSERT_FALSE(dominates(list.entries()[a].q(), list.entries()[b].q()));
    }
  }
}

TEST(ParetoList, FindTracksMembership) {
  ParetoList list(2);
  list.try_insert(scores({0.3, 0.3}));
  const auto seq = list.best().seq;
  ASSERT_NE(list.find(seq), nullptr);
  list.try_insert(scores({0.4, 0.4}));
  EXPECT_EQ(list.find(seq), nullptr);
}
