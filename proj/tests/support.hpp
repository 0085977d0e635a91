#pragma once

// Small seeded instances for oracle and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "bbm/generate.hpp"
#include "bbm/graph.hpp"

namespace bbm::testing {

struct SmallShape {
  std::uint32_t max_side = 6;
  std::uint32_t max_degree = 4;
  std::uint32_t max_edges = 24;
  std::uint32_t b_max = 3;
  double max_weight = 10.0;
};

/// nA, nB uniform in [1, max_side]; pairs visited in a shuffled order and
/// kept while both endpoints stay within max_degree, up to a random target
/// edge count; weights uniform in (0, max_weight]; capacities in [1, b_max].
inline BipartiteGraph small_instance(SplitMix64& rng, const SmallShape& shape = {}) {
  const auto n_a = static_cast<std::size_t>(1 + rng.below(shape.max_side));
  const auto n_b = static_cast<std::size_t>(1 + rng.below(shape.max_side));
  std::vector<std::uint64_t> pairs(n_a * n_b);
  for (std::uint64_t k = 0; k < pairs.size(); ++k) pairs[k] = k;
  for (std::size_t k = pairs.size(); k > 1; --k) std::swap(pairs[k - 1], pairs[rng.below(k)]);
  const std::size_t target =
      1 + rng.below(std::min<std::uint64_t>(pairs.size(), shape.max_edges));
  std::vector<std::uint32_t> deg_a(n_a, 0), deg_b(n_b, 0);
  std::vector<Edge> edges;
  for (std::uint64_t k : pairs) {
    if (edges.size() == target) break;
    const auto i = static_cast<VertexId>(k / n_b), j = static_cast<VertexId>(k % n_b);
    if (deg_a[i] >= shape.max_degree || deg_b[j] >= shape.max_degree) continue;
    ++deg_a[i];
    ++deg_b[j];
    edges.push_back({i, j, shape.max_weight * (1.0 - rng.uniform01())});
  }
  std::vector<std::int64_t> ba(n_a), bb(n_b);
  for (auto& b : ba) b = 1 + static_cast<std::int64_t>(rng.below(shape.b_max));
  for (auto& b : bb) b = 1 + static_cast<std::int64_t>(rng.below(shape.b_max));
  return build_graph(n_a, n_b, std::move(edges), ba, bb);
}

/// The 2x2 instance used throughout: w(a1,b1)=3, w(a1,b2)=2, w(a2,b1)=3, w(a2,b2)=1.
inline BipartiteGraph two_by_two() {
  return build_graph(2, 2, {{0, 0, 3.0}, {0, 1, 2.0}, {1, 0, 3.0}, {1, 1, 1.0}});
}

}  // namespace bbm::testing
