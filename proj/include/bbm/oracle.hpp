#pragma once

// Reference solvers for verification at desk scale. None of these share
// code with the auction.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbm/graph.hpp"

namespace bbm {

enum class OracleMethod { brute, flow, greedy };

inline const char* to_string(OracleMethod m) {
  switch (m) {
    case OracleMethod::brute: return "brute";
    case OracleMethod::flow: return "flow";
    case OracleMethod::greedy: return "greedy";
  }
  return "?";
}

struct OracleResult {
  double weight = 0.0;  // original weights, summed in edge-id order
  std::vector<EdgeId> matching;  // ascending edge ids
  OracleMethod method = OracleMethod::brute;
};

inline constexpr std::size_t kBruteForceMaxEdges = 24;

class InstanceTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline OracleResult finish(const BipartiteGraph& g, std::vector<EdgeId> f, OracleMethod m) {
  std::sort(f.begin(), f.end());
  OracleResult r;
  r.method = m;
  r.weight = matching_weight(g, f);
  r.matching = std::move(f);
  return r;
}

}  // namespace detail

/// Exhaustive search over edge subsets with capacity and bound pruning.
inline OracleResult brute_force(const BipartiteGraph& g) {
  const std::size_t m = g.num_edges();
  if (m > kBruteForceMaxEdges) {
    throw InstanceTooLarge("brute force is limited to " + std::to_string(kBruteForceMaxEdges) +
                           " edges, instance has " + std::to_string(m));
  }
  std::vector<double> suffix(m + 1, 0.0);
  for (std::size_t k = m; k-- > 0;) suffix[k] = suffix[k + 1] + g.edge(static_cast<EdgeId>(k)).weight;

  std::vector<std::uint32_t> left_a(g.bidder_capacities().begin(), g.bidder_capacities().end());
  std::vector<std::uint32_t> left_b(g.object_capacities().begin(), g.object_capacities().end());
  std::vector<EdgeId> current, best;
  double best_weight = 0.0;

  std::function<void(std::size_t, double)> dfs = [&](std::size_t k, double weight) {
    if (weight > best_weight) {
      best_weight = weight;
      best = current;
    }
    if (k == m) return;
    // Bound: everything left cannot beat the incumbent.
    if (weight + suffix[k] < best_weight * (1.0 - 1e-12)) return;
    const Edge& e = g.edge(static_cast<EdgeId>(k));
    if (left_a[e.bidder] > 0 && left_b[e.object] > 0) {
      --left_a[e.bidder];
      --left_b[e.object];
      current.push_back(static_cast<EdgeId>(k));
      dfs(k + 1, weight + e.weight);
      current.pop_back();
      ++left_a[e.bidder];
      ++left_b[e.object];
    }
    dfs(k + 1, weight);
  };
  dfs(0, 0.0);
  return detail::finish(g, std::move(best), OracleMethod::brute);
}

/// Exact maximum-weight b-matching by successive shortest paths on the
/// network source -> bidder (cap b(i)) -> object (cap 1, cost -w) -> sink
/// (cap b(j)), with Johnson potentials. Stops once the cheapest augmenting
/// path no longer has positive weight.
inline OracleResult flow_exact(const BipartiteGraph& g) {
  const std::size_t n_a = g.num_bidders(), n_b = g.num_objects();
  const std::size_t source = 0, sink = n_a + n_b + 1, n = n_a + n_b + 2;
  struct Arc {
    std::size_t to;
    std::int64_t cap;
    double cost;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<std::size_t>> out(n);
  auto add_arc = [&](std::size_t u, std::size_t v, std::int64_t cap, double cost) {
    out[u].push_back(arcs.size());
    arcs.push_back({v, cap, cost});
    out[v].push_back(arcs.size());
    arcs.push_back({u, 0, -cost});
  };
  for (VertexId i = 0; i < n_a; ++i) add_arc(source, 1 + i, g.bidder_capacity(i), 0.0);
  std::vector<std::size_t> edge_arc(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    edge_arc[e] = arcs.size();
    add_arc(1 + g.edge(e).bidder, 1 + n_a + g.edge(e).object, 1, -g.edge(e).weight);
  }
  for (VertexId j = 0; j < n_b; ++j) add_arc(1 + n_a + j, sink, g.object_capacity(j), 0.0);

  // The initial network is a layered DAG, so exact potentials come from one sweep.
  std::vector<double> pot(n, 0.0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    const std::size_t v = 1 + n_a + g.edge(e).object;
    pot[v] = std::min(pot[v], -g.edge(e).weight);
  }
  for (VertexId j = 0; j < n_b; ++j) pot[sink] = std::min(pot[sink], pot[1 + n_a + j]);

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n);
  std::vector<std::size_t> via(n);
  using Item = std::pair<double, std::size_t>;
  for (;;) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[source] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (std::size_t a : out[u]) {
        const Arc& arc = arcs[a];
        if (arc.cap <= 0) continue;
        const double reduced = std::max(0.0, arc.cost + pot[u] - pot[arc.to]);
        if (d + reduced < dist[arc.to]) {
          dist[arc.to] = d + reduced;
          via[arc.to] = a;
          heap.emplace(dist[arc.to], arc.to);
        }
      }
    }
    if (dist[sink] == kInf) break;
    // Recover the true path cost rather than trusting the reduced distances.
    double path_cost = 0.0;
    for (std::size_t v = sink; v != source; v = arcs[via[v] ^ 1].to) path_cost += arcs[via[v]].cost;
    if (path_cost >= 0.0) break;
    for (std::size_t v = 0; v < n; ++v) {
      if (dist[v] < kInf) pot[v] += dist[v];
    }
    for (std::size_t v = sink; v != source; v = arcs[via[v] ^ 1].to) {
      arcs[via[v]].cap -= 1;
      arcs[via[v] ^ 1].cap += 1;
    }
  }

  std::vector<EdgeId> f;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (arcs[edge_arc[e]].cap == 0) f.push_back(e);
  }
  return detail::finish(g, std::move(f), OracleMethod::flow);
}

/// Heaviest-first greedy; maximal, and at least half the optimum.
inline OracleResult greedy_half(const BipartiteGraph& g) {
  std::vector<EdgeId> order(g.num_edges());
  std::iota(order.begin(), order.end(), EdgeId{0});
  std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
    return g.edge(a).weight > g.edge(b).weight;
  });
  std::vector<std::uint32_t> left_a(g.bidder_capacities().begin(), g.bidder_capacities().end());
  std::vector<std::uint32_t> left_b(g.object_capacities().begin(), g.object_capacities().end());
  std::vector<EdgeId> f;
  for (EdgeId e : order) {
    const Edge& ed = g.edge(e);
    if (left_a[ed.bidder] > 0 && left_b[ed.object] > 0) {
      --left_a[ed.bidder];
      --left_b[ed.object];
      f.push_back(e);
    }
  }
  return detail::finish(g, std::move(f), OracleMethod::greedy);
}

}  // namespace bbm
