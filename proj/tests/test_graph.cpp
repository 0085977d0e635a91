#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "bbm/generate.hpp"
#include "bbm/graph.hpp"
#include "support.hpp"

namespace bbm {
namespace {

TEST(BuildGraph, SingleEdge) {
  const BipartiteGraph g = build_graph(1, 1, {{0, 0, 1.0}});
  EXPECT_EQ(g.stats(), (GraphStats{1, 1, 1, 2}));
  ASSERT_EQ(g.bidder_adjacency(0).size(), 1u);
  EXPECT_EQ(g.bidder_adjacency(0)[0].neighbor, 0u);
  EXPECT_EQ(g.bidder_adjacency(0)[0].edge, 0u);
}

TEST(BuildGraph, RejectsDuplicateEdge) {
  try {
    build_graph(1, 1, {{0, 0, 1.0}, {0, 0, 2.0}});
    FAIL() << "duplicate accepted";
  } catch (const GraphError& e) {
    EXPECT_EQ(e.edge(), EdgeId{1});
    EXPECT_NE(std::string(e.what()).find("duplicate"), std::string::npos);
  }
}

TEST(BuildGraph, RejectsBadInput) {
  EXPECT_THROW(build_graph(1, 1, {{1, 0, 1.0}}), GraphError);
  EXPECT_THROW(build_graph(1, 1, {{0, 3, 1.0}}), GraphError);
  EXPECT_THROW(build_graph(1, 1, {{0, 0, -0.5}}), GraphError);
  const std::vector<std::int64_t> ok{1}, zero{0};
  try {
    build_graph(1, 1, {{0, 0, 1.0}}, ok, zero);
    FAIL();
  } catch (const GraphError& e) {
    EXPECT_EQ(e.vertex(), std::size_t{1});
  }
}

TEST(BuildGraph, ClampsCapacityToDegree) {
  const std::vector<std::int64_t> ba{5}, bb{1, 1};
  const BipartiteGraph g = build_graph(1, 2, {{0, 0, 1.0}, {0, 1, 1.0}}, ba, bb);
  EXPECT_EQ(g.bidder_capacity(0), 2u);
  EXPECT_EQ(g.clamped_count(), 1u);
}

TEST(BuildGraph, IsolatedVerticesGetZeroCapacity) {
  const BipartiteGraph g = build_graph(3, 2, {{1, 1, 4.0}}, 2);
  EXPECT_EQ(g.bidder_capacity(0), 0u);
  EXPECT_EQ(g.bidder_capacity(1), 1u);
  EXPECT_EQ(g.object_capacity(0), 0u);
  EXPECT_EQ(g.stats().b_total, 2u);
}

TEST(Stats, EmptyGraph) {
  EXPECT_EQ(stats(build_graph(0, 0, {})), (GraphStats{0, 0, 0, 0}));
}

TEST(Stats, SharedObject) {
  const std::vector<std::int64_t> ba{1, 1}, bb{2};
  const BipartiteGraph g = build_graph(2, 1, {{0, 0, 1.0}, {1, 0, 1.0}}, ba, bb);
  EXPECT_EQ(stats(g), (GraphStats{2, 2, 2, 4}));
}

// Adjacency rebuilt from the edge list, capacity sums, determinism.
TEST(BuildGraph, PropertyConsistency) {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const BipartiteGraph g = testing::small_instance(rng);
    std::vector<std::vector<Incidence>> by_a(g.num_bidders()), by_b(g.num_objects());
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      by_a[g.edge(e).bidder].push_back({g.edge(e).object, e});
      by_b[g.edge(e).object].push_back({g.edge(e).bidder, e});
    }
    std::uint64_t total = 0;
    std::uint32_t beta = 0;
    for (VertexId i = 0; i < g.num_bidders(); ++i) {
      const auto adj = g.bidder_adjacency(i);
      ASSERT_EQ(adj.size(), by_a[i].size());
      for (std::size_t k = 0; k < adj.size(); ++k) {
        EXPECT_EQ(adj[k].edge, by_a[i][k].edge);
        EXPECT_EQ(adj[k].neighbor, by_a[i][k].neighbor);
      }
      EXPECT_LE(g.bidder_capacity(i), g.bidder_degree(i));
      total += g.bidder_capacity(i);
      beta = std::max(beta, g.bidder_capacity(i));
    }
    for (VertexId j = 0; j < g.num_objects(); ++j) {
      const auto adj = g.object_adjacency(j);
      ASSERT_EQ(adj.size(), by_b[j].size());
      for (std::size_t k = 0; k < adj.size(); ++k) EXPECT_EQ(adj[k].edge, by_b[j][k].edge);
      EXPECT_LE(g.object_capacity(j), g.object_degree(j));
      total += g.object_capacity(j);
      beta = std::max(beta, g.object_capacity(j));
    }
    EXPECT_EQ(total, g.stats().b_total);
    EXPECT_EQ(beta, g.stats().beta);
  }
}

}  // namespace
}  // namespace bbm
