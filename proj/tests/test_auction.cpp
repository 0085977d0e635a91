#include <gtest/gtest.h>

#include <array>
#include <vector>

#include "bbm/auction.hpp"
#include "bbm/certify.hpp"
#include "bbm/generate.hpp"
#include "support.hpp"

namespace bbm {
namespace {

std::vector<QueueEntry> queue_of(const AuctionState& st, VertexId i) { return st.queue(i); }

TEST(Initialize, SingleEdgeQueue) {
  const BipartiteGraph g = build_graph(1, 1, {{0, 0, 1.0}});
  const std::vector<std::int32_t> r{3};
  const ScaledInstance s = make_rounded_instance(g, 0.5, r);
  const AuctionState st = initialize(s, g);
  EXPECT_EQ(queue_of(st, 0), (std::vector<QueueEntry>{{3, 0}, {2, 0}, {1, 0}}));
  EXPECT_EQ(st.bidders[0].last_index, 3);
  EXPECT_EQ(st.active, std::vector<VertexId>{0});
}

TEST(Initialize, TiesOrderedByEdgeId) {
  const BipartiteGraph g = build_graph(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}});
  const std::vector<std::int32_t> r{3, 2};
  ScaledInstance s = make_rounded_instance(g, 0.5, r);
  s.s_min = 1;  // synthetic window of two entries per edge
  const AuctionState st = initialize(s, g);
  EXPECT_EQ(queue_of(st, 0), (std::vector<QueueEntry>{{3, 0}, {2, 0}, {2, 1}, {1, 1}}));
}

TEST(Initialize, AllBiddersActiveFirstOnTop) {
  const BipartiteGraph g = build_graph(3, 1, {{0, 0, 1.0}, {2, 0, 1.0}});
  const ScaledInstance s = preprocess(g, 0.5);
  const AuctionState st = initialize(s, g);
  EXPECT_EQ(st.active, (std::vector<VertexId>{2, 1, 0}));
  EXPECT_TRUE(st.queue(1).empty());
}

TEST(AssignAndBid, PrunedBidderIsNoOp) {
  // Bidder 1 only has a weight-0.001 edge, which preprocessing drops.
  const BipartiteGraph g = build_graph(2, 2, {{0, 0, 10.0}, {1, 1, 0.001}});
  const ScaledInstance s = preprocess(g, 0.5);
  ASSERT_FALSE(s.is_kept(1));
  AuctionState st = initialize(s, g);
  EXPECT_TRUE(st.queue(1).empty());
  assign_and_bid(1, st, s, g);
  EXPECT_EQ(st.counters.pops, 0u);
  EXPECT_EQ(st.counters.bids, 0u);
  EXPECT_EQ(st.bidders[1].matched, 0u);
}

TEST(AssignAndBid, SingleEdgeHandTrace) {
  const BipartiteGraph g = build_graph(1, 1, {{0, 0, 1.0}});
  const std::vector<std::int32_t> r{3};
  const ScaledInstance s = make_rounded_instance(g, 0.5, r);
  AuctionState st = initialize(s, g);
  st.active.clear();
  assign_and_bid(0, st, s, g);
  EXPECT_EQ(st.counters.pops, 1u);
  EXPECT_EQ(st.copy_of(0), CopyId{0});
  // 3.375 - 0 - 0.5 * 1.5^4
  EXPECT_DOUBLE_EQ(st.copies.price(0), 0.84375);
}

TEST(AssignAndBid, TwoBidderOutbidTrace) {
  const std::vector<std::int64_t> ba{1, 1}, bb{1};
  const BipartiteGraph g = build_graph(2, 1, {{0, 0, 1.0}, {1, 0, 1.0}}, ba, bb);
  const std::vector<std::int32_t> r{3, 3};
  const ScaledInstance s = make_rounded_instance(g, 0.5, r);
  AuctionState st = initialize(s, g);
  auto serve = [&] {
    const VertexId i = st.active.back();
    st.active.pop_back();
    st.bidders[i].in_active = 0;
    assign_and_bid(i, st, s, g);
    return i;
  };

  EXPECT_EQ(serve(), 0u);
  EXPECT_DOUBLE_EQ(st.copies.price(0), 0.84375);
  EXPECT_EQ(st.owner_edge(0), EdgeId{0});

  // a2 fails at r=3 (2.53125 < 3.375), wins at r=2 (2.53125 >= 2.25).
  EXPECT_EQ(serve(), 1u);
  EXPECT_DOUBLE_EQ(st.copies.price(0), 1.6875);
  EXPECT_EQ(st.owner_edge(0), EdgeId{1});
  EXPECT_EQ(st.counters.outbids, 1u);
  EXPECT_EQ(st.active, std::vector<VertexId>{0});

  // a1 fails at r=2, re-wins at r=1.
  EXPECT_EQ(serve(), 0u);
  EXPECT_DOUBLE_EQ(st.copies.price(0), 2.25);
  EXPECT_EQ(st.owner_edge(0), EdgeId{0});

  // a2 pops its last entry and fails.
  EXPECT_EQ(serve(), 1u);
  EXPECT_TRUE(st.active.empty());
  EXPECT_TRUE(st.exhausted(1));
  EXPECT_EQ(st.counters.pops, 6u);
  EXPECT_EQ(st.counters.bids, 3u);
  EXPECT_EQ(st.counters.nonpositive_bids, 0u);
}

TEST(Match, UnownedCopy) {
  const BipartiteGraph g = build_graph(1, 1, {{0, 0, 5.0}});
  const ScaledInstance s = preprocess(g, 0.5);
  AuctionState st = initialize(s, g);
  match(0, 0, 0, st, g);
  EXPECT_EQ(st.copy_of(0), CopyId{0});
  EXPECT_EQ(st.bidders[0].matched, 1u);
  EXPECT_EQ(st.counters.outbids, 0u);
}

TEST(Match, EvicteeReentersOnce) {
  const std::vector<std::int64_t> ba{1, 1, 1}, bb{1};
  const BipartiteGraph g = build_graph(3, 1, {{0, 0, 5.0}, {1, 0, 5.0}, {2, 0, 5.0}}, ba, bb);
  const ScaledInstance s = preprocess(g, 0.5);
  AuctionState st = initialize(s, g);
  st.active.clear();
  for (BidderState& b : st.bidders) b.in_active = 0;
  match(0, 0, 0, st, g);
  match(1, 1, 0, st, g);  // evicts bidder 0
  EXPECT_EQ(st.active, std::vector<VertexId>{0});
  EXPECT_EQ(st.copy_of(0), kNoCopy);
  match(0, 0, 0, st, g);  // evicts bidder 1
  match(2, 2, 0, st, g);  // evicts bidder 0 again while it is already queued
  EXPECT_EQ(st.active, (std::vector<VertexId>{0, 1}));
  EXPECT_EQ(st.counters.outbids, 3u);
}

TEST(Match, ExhaustedEvicteeStaysOut) {
  const std::vector<std::int64_t> ba{1, 1}, bb{1};
  const BipartiteGraph g = build_graph(2, 1, {{0, 0, 5.0}, {1, 0, 5.0}}, ba, bb);
  const ScaledInstance s = preprocess(g, 0.5);
  AuctionState st = initialize(s, g);
  st.active.clear();
  for (BidderState& b : st.bidders) b.in_active = 0;
  st.drain(0);
  match(0, 0, 0, st, g);
  match(1, 1, 0, st, g);
  EXPECT_TRUE(st.active.empty());
  EXPECT_EQ(st.bidders[0].matched, 0u);
}

TEST(Run, TwoByTwoFindsOptimum) {
  const BipartiteGraph g = testing::two_by_two();
  const AuctionResult r = run(preprocess(g, 0.1), g);
  EXPECT_EQ(matching_weight(g, r.matching()), 5.0);
}

TEST(Run, BidderWithCapacityTwo) {
  const std::vector<std::int64_t> ba{2}, bb{1, 1};
  const BipartiteGraph g = build_graph(1, 2, {{0, 0, 3.0}, {0, 1, 2.0}}, ba, bb);
  const AuctionResult r = run(preprocess(g, 0.1), g);
  EXPECT_EQ(r.matching(), (std::vector<EdgeId>{0, 1}));
  EXPECT_EQ(matching_weight(g, r.matching()), 5.0);
}

TEST(Run, EmptyInstance) {
  const BipartiteGraph g = build_graph(0, 0, {});
  const AuctionResult r = run(preprocess(g, 0.1), g);
  EXPECT_TRUE(r.matching().empty());
  EXPECT_EQ(r.counters, AuctionCounters{});
}

TEST(Run, ZeroWeightsGiveEmptyMatching) {
  const BipartiteGraph g = build_graph(2, 2, {{0, 0, 0.0}, {1, 1, 0.0}});
  const AuctionResult r = run(preprocess(g, 0.1), g);
  EXPECT_TRUE(r.matching().empty());
  EXPECT_EQ(r.counters.pops, 0u);
}

// Invariants 1-3 asserted at every step, plus feasibility, the pop budget
// and determinism at termination.
TEST(Run, PropertyInvariantsHold) {
  SplitMix64 rng(2024);
  const AuctionOptions checked{true, 1e-9};
  for (int trial = 0; trial < 600; ++trial) {
    const BipartiteGraph g = testing::small_instance(rng);
    const double eps_prime = std::array{0.05, 0.1, 0.3, 0.5, 0.9}[trial % 5];
    const ScaledInstance s = preprocess(g, eps_prime);
    AuctionResult r;
    ASSERT_NO_THROW(r = run(s, g, checked)) << "trial " << trial;
    EXPECT_EQ(r.counters.nonpositive_bids, 0u);
    EXPECT_LE(r.counters.pops, r.pop_budget);
    EXPECT_TRUE(check_feasible(r.matching(), g).feasible);
    for (VertexId i = 0; i < g.num_bidders(); ++i) {
      EXPECT_LE(r.matched_count[i], g.bidder_capacity(i));
    }
    const AuctionResult again = run(s, g);
    EXPECT_EQ(again.matching(), r.matching());
    EXPECT_EQ(again.counters, r.counters);
    EXPECT_EQ(again.copies.prices(), r.copies.prices());
  }
}

TEST(Run, PropertyLargerInstancesWithCheckedInvariants) {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GenConfig gc;
    gc.num_bidders = 40;
    gc.num_objects = 30;
    gc.num_edges = 400;
    gc.b_max = static_cast<std::uint32_t>(seed + 1);
    gc.seed = seed;
    const BipartiteGraph g = generate(gc);
    const ScaledInstance s = preprocess(g, 0.2);
    ASSERT_NO_THROW(run(s, g, AuctionOptions{true, 1e-9})) << "seed " << seed;
  }
}

}  // namespace
}  // namespace bbm
