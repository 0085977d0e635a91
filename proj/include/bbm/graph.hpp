#pragma once

// Weighted bipartite graph with vertex capacities (b-values).
//
// Side A holds the bidders, side B the objects. Indices are 0-based
// internally; edge ids are input positions and every later tie-break
// in the solver is defined in terms of them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace bbm {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

struct Edge {
  VertexId bidder;
  VertexId object;
  double weight;
};

struct Incidence {
  VertexId neighbor;
  EdgeId edge;
};

struct GraphStats {
  std::size_t m = 0;
  std::size_t max_degree = 0;   // Delta
  std::uint32_t beta = 0;       // max effective b-value
  std::uint64_t b_total = 0;    // b(V)

  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

/// Raised by build_graph. `edge` / `vertex` name the offending item when
/// there is one (vertex ids on side B are offset by nA).
class GraphError : public std::invalid_argument {
 public:
  explicit GraphError(const std::string& what,
                      std::optional<EdgeId> edge = std::nullopt,
                      std::optional<std::size_t> vertex = std::nullopt)
      : std::invalid_argument(what), edge_(edge), vertex_(vertex) {}

  std::optional<EdgeId> edge() const noexcept { return edge_; }
  std::optional<std::size_t> vertex() const noexcept { return vertex_; }

 private:
  std::optional<EdgeId> edge_;
  std::optional<std::size_t> vertex_;
};

class BipartiteGraph;

BipartiteGraph build_graph(std::size_t num_bidders, std::size_t num_objects,
                           std::vector<Edge> edges,
                           std::span<const std::int64_t> bidder_capacity,
                           std::span<const std::int64_t> object_capacity);

/// Immutable after construction.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  std::size_t num_bidders() const noexcept { return num_bidders_; }
  std::size_t num_objects() const noexcept { return num_objects_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  std::span<const Incidence> bidder_adjacency(VertexId i) const {
    return {bidder_adj_.data() + bidder_off_[i],
            bidder_off_[i + 1] - bidder_off_[i]};
  }
  std::span<const Incidence> object_adjacency(VertexId j) const {
    return {object_adj_.data() + object_off_[j],
            object_off_[j + 1] - object_off_[j]};
  }

  std::size_t bidder_degree(VertexId i) const {
    return bidder_off_[i + 1] - bidder_off_[i];
  }
  std::size_t object_degree(VertexId j) const {
    return object_off_[j + 1] - object_off_[j];
  }

  std::uint32_t bidder_capacity(VertexId i) const { return b_bidder_[i]; }
  std::uint32_t object_capacity(VertexId j) const { return b_object_[j]; }
  std::span<const std::uint32_t> bidder_capacities() const { return b_bidder_; }
  std::span<const std::uint32_t> object_capacities() const { return b_object_; }

  std::uint64_t bidder_capacity_total() const noexcept { return b_bidder_total_; }
  std::uint64_t object_capacity_total() const noexcept { return b_object_total_; }

  const GraphStats& stats() const noexcept { return stats_; }

  /// Number of vertices whose requested capacity exceeded their degree.
  std::size_t clamped_count() const noexcept { return clamped_; }

  double max_weight() const noexcept { return max_weight_; }

 private:
  friend BipartiteGraph build_graph(std::size_t, std::size_t, std::vector<Edge>,
                                    std::span<const std::int64_t>,
                                    std::span<const std::int64_t>);

  std::size_t num_bidders_ = 0;
  std::size_t num_objects_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> bidder_off_{0};
  std::vector<Incidence> bidder_adj_;
  std::vector<std::size_t> object_off_{0};
  std::vector<Incidence> object_adj_;
  std::vector<std::uint32_t> b_bidder_;
  std::vector<std::uint32_t> b_object_;
  std::uint64_t b_bidder_total_ = 0;
  std::uint64_t b_object_total_ = 0;
  GraphStats stats_;
  std::size_t clamped_ = 0;
  double max_weight_ = 0.0;
};

namespace detail {

inline void build_csr(std::size_t n, std::span<const Edge> edges, bool by_bidder,
                      std::vector<std::size_t>& off, std::vector<Incidence>& adj) {
  off.assign(n + 1, 0);
  for (const Edge& e : edges) ++off[(by_bidder ? e.bidder : e.object) + 1];
  for (std::size_t v = 0; v < n; ++v) off[v + 1] += off[v];
  adj.resize(edges.size());
  std::vector<std::size_t> fill(off.begin(), off.end() - 1);
  for (EdgeId id = 0; id < edges.size(); ++id) {
    const Edge& e = edges[id];
    if (by_bidder) {
      adj[fill[e.bidder]++] = {e.object, id};
    } else {
      adj[fill[e.object]++] = {e.bidder, id};
    }
  }
}

}  // namespace detail

/// Validates the input and clamps each requested capacity to the vertex
/// degree. Isolated vertices get capacity 0. Throws GraphError.
inline BipartiteGraph build_graph(std::size_t num_bidders, std::size_t num_objects,
                                  std::vector<Edge> edges,
                                  std::span<const std::int64_t> bidder_capacity,
                                  std::span<const std::int64_t> object_capacity) {
  if (bidder_capacity.size() != num_bidders) {
    throw GraphError("bidder capacity list has " +
                     std::to_string(bidder_capacity.size()) + " entries, expected " +
                     std::to_string(num_bidders));
  }
  if (object_capacity.size() != num_objects) {
    throw GraphError("object capacity list has " +
                     std::to_string(object_capacity.size()) + " entries, expected " +
                     std::to_string(num_objects));
  }
  if (edges.size() >= static_cast<std::size_t>(kNoEdge)) {
    throw GraphError("too many edges");
  }
  for (std::size_t i = 0; i < num_bidders; ++i) {
    if (bidder_capacity[i] < 1) {
      throw GraphError("bidder " + std::to_string(i) + " has nonpositive capacity " +
                           std::to_string(bidder_capacity[i]),
                       std::nullopt, i);
    }
  }
  for (std::size_t j = 0; j < num_objects; ++j) {
    if (object_capacity[j] < 1) {
      throw GraphError("object " + std::to_string(j) + " has nonpositive capacity " +
                           std::to_string(object_capacity[j]),
                       std::nullopt, num_bidders + j);
    }
  }

  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges.size() * 2);
  double max_weight = 0.0;
  for (EdgeId id = 0; id < edges.size(); ++id) {
    const Edge& e = edges[id];
    auto fail = [&](const char* why) {
      throw GraphError("edge " + std::to_string(id) + " (" + std::to_string(e.bidder) +
                           ", " + std::to_string(e.object) + "): " + why,
                       id);
    };
    if (e.bidder >= num_bidders || e.object >= num_objects) fail("index out of range");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      fail("weight must be finite and nonnegative");
    }
    const std::uint64_t key = static_cast<std::uint64_t>(e.bidder) * num_objects + e.object;
    if (!seen.insert(key).second) fail("duplicate edge");
    max_weight = std::max(max_weight, e.weight);
  }

  BipartiteGraph g;
  g.num_bidders_ = num_bidders;
  g.num_objects_ = num_objects;
  g.edges_ = std::move(edges);
  g.max_weight_ = max_weight;
  detail::build_csr(num_bidders, g.edges_, true, g.bidder_off_, g.bidder_adj_);
  detail::build_csr(num_objects, g.edges_, false, g.object_off_, g.object_adj_);

  GraphStats& s = g.stats_;
  s.m = g.edges_.size();
  auto clamp = [&](std::int64_t requested, std::size_t degree) -> std::uint32_t {
    if (static_cast<std::uint64_t>(requested) > degree) {
      ++g.clamped_;
      return static_cast<std::uint32_t>(degree);
    }
    return static_cast<std::uint32_t>(requested);
  };
  g.b_bidder_.resize(num_bidders);
  for (VertexId i = 0; i < num_bidders; ++i) {
    const std::size_t d = g.bidder_degree(i);
    g.b_bidder_[i] = clamp(bidder_capacity[i], d);
    g.b_bidder_total_ += g.b_bidder_[i];
    s.max_degree = std::max(s.max_degree, d);
    s.beta = std::max(s.beta, g.b_bidder_[i]);
  }
  g.b_object_.resize(num_objects);
  for (VertexId j = 0; j < num_objects; ++j) {
    const std::size_t d = g.object_degree(j);
    g.b_object_[j] = clamp(object_capacity[j], d);
    g.b_object_total_ += g.b_object_[j];
    s.max_degree = std::max(s.max_degree, d);
    s.beta = std::max(s.beta, g.b_object_[j]);
  }
  s.b_total = g.b_bidder_total_ + g.b_object_total_;
  return g;
}

/// Convenience overload: the same capacity for every vertex.
inline BipartiteGraph build_graph(std::size_t num_bidders, std::size_t num_objects,
                                  std::vector<Edge> edges, std::int64_t capacity = 1) {
  const std::vector<std::int64_t> a(num_bidders, capacity), b(num_objects, capacity);
  return build_graph(num_bidders, num_objects, std::move(edges), a, b);
}

inline GraphStats stats(const BipartiteGraph& g) { return g.stats(); }

/// Neumaier compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// Sum of original weights over an edge set, accumulated in edge-id order.
inline double matching_weight(const BipartiteGraph& g, std::span<const EdgeId> matching) {
  std::vector<EdgeId> ids(matching.begin(), matching.end());
  std::sort(ids.begin(), ids.end());
  CompensatedSum total;
  for (EdgeId e : ids) total.add(g.edge(e).weight);
  return total.value();
}

}  // namespace bbm
