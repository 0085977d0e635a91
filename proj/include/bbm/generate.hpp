#pragma once

// Seeded random instances. The PRNG is splitmix64 and every draw is
// spelled out below so the same seed yields the same instance in any
// language:
//   uniform01()   = (next() >> 11) * 2^-53
//   below(n)      = next() % n
// Edges are sampled without replacement with Floyd's algorithm over the
// nA*nB pair indices (pair k is bidder k / nB, object k % nB), in the
// order Floyd inserts them. Weights are then drawn in edge order,
// followed by bidder capacities and object capacities.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbm/graph.hpp"

namespace bbm {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

enum class WeightDistribution {
  uniform,  // (0, max_weight]
  unit,     // 1.0
  integer,  // {1, ..., max_weight}
};

inline WeightDistribution parse_weight_distribution(const std::string& tag) {
  if (tag == "uniform") return WeightDistribution::uniform;
  if (tag == "unit") return WeightDistribution::unit;
  if (tag == "int" || tag == "integer") return WeightDistribution::integer;
  throw std::invalid_argument("unknown weight distribution '" + tag + "'");
}

struct GenConfig {
  std::size_t num_bidders = 0;
  std::size_t num_objects = 0;
  std::size_t num_edges = 0;
  std::uint32_t b_max = 1;
  WeightDistribution weights = WeightDistribution::uniform;
  double max_weight = 10.0;
  std::uint64_t seed = 1;
};

/// Edge count for a target average bidder degree.
inline std::size_t edges_for_average_degree(std::size_t num_bidders, double avg_degree) {
  return static_cast<std::size_t>(std::llround(avg_degree * static_cast<double>(num_bidders)));
}

namespace detail {

/// Open-addressing set of pair indices, sized once.
class FlatSet {
 public:
  explicit FlatSet(std::size_t n) {
    std::size_t cap = 16;
    while (cap < 2 * n) cap *= 2;
    slots_.assign(cap, kEmpty);
    mask_ = cap - 1;
  }

  /// False if k was already present.
  bool insert(std::uint64_t k) {
    for (std::size_t h = mix(k) & mask_;; h = (h + 1) & mask_) {
      if (slots_[h] == k) return false;
      if (slots_[h] == kEmpty) {
        slots_[h] = k;
        return true;
      }
    }
  }

 private:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::vector<std::uint64_t> slots_;
  std::size_t mask_ = 0;
};

}  // namespace detail

inline BipartiteGraph generate(const GenConfig& cfg) {
  const std::uint64_t pairs =
      static_cast<std::uint64_t>(cfg.num_bidders) * static_cast<std::uint64_t>(cfg.num_objects);
  if (cfg.num_edges > pairs) {
    throw std::invalid_argument("cannot place " + std::to_string(cfg.num_edges) +
                                " distinct edges on " + std::to_string(pairs) + " pairs");
  }
  if (cfg.b_max < 1) throw std::invalid_argument("b_max must be at least 1");
  if (cfg.weights != WeightDistribution::unit && !(cfg.max_weight > 0.0)) {
    throw std::invalid_argument("max_weight must be positive");
  }
  if (cfg.weights == WeightDistribution::integer && cfg.max_weight < 1.0) {
    throw std::invalid_argument("integer weights need max_weight >= 1");
  }

  SplitMix64 rng(cfg.seed);
  std::vector<Edge> edges;
  edges.reserve(cfg.num_edges);
  {
    detail::FlatSet chosen(cfg.num_edges);
    for (std::uint64_t top = pairs - cfg.num_edges; top < pairs; ++top) {
      const std::uint64_t t = rng.below(top + 1);
      const std::uint64_t k = chosen.insert(t) ? t : top;
      if (k == top) chosen.insert(top);
      edges.push_back({static_cast<VertexId>(k / cfg.num_objects),
                       static_cast<VertexId>(k % cfg.num_objects), 0.0});
    }
  }
  for (Edge& e : edges) {
    switch (cfg.weights) {
      case WeightDistribution::uniform:
        e.weight = cfg.max_weight * (1.0 - rng.uniform01());
        break;
      case WeightDistribution::unit:
        e.weight = 1.0;
        break;
      case WeightDistribution::integer:
        e.weight = static_cast<double>(
            1 + rng.below(static_cast<std::uint64_t>(std::floor(cfg.max_weight))));
        break;
    }
  }
  std::vector<std::int64_t> ba(cfg.num_bidders), bb(cfg.num_objects);
  for (auto& b : ba) b = 1 + static_cast<std::int64_t>(rng.below(cfg.b_max));
  for (auto& b : bb) b = 1 + static_cast<std::int64_t>(rng.below(cfg.b_max));
  return build_graph(cfg.num_bidders, cfg.num_objects, std::move(edges), ba, bb);
}

}  // namespace bbm
