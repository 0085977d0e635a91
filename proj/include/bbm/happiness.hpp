#pragma once

// Strong eps-happiness of a single bidder, evaluated by brute force over
// every unmatched neighbour and every copy of it. Shared by the auction's
// debug invariant checks and the certifier.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>

#include "bbm/copies.hpp"
#include "bbm/graph.hpp"
#include "bbm/scaling.hpp"

namespace bbm {

struct BidderHappiness {
  VertexId bidder = 0;
  bool happy = true;
  bool saturated = false;
  double profit = 0.0;          // max{ max_{k notin F(i), l} (1-eps) w~(i,k) - p_k(l), 0 }
  double worst_residual = std::numeric_limits<double>::infinity();
  EdgeId worst_edge = kNoEdge;  // matched edge achieving worst_residual
  std::string reason;
};

/// `edge_copy[e]` is the copy matched through edge e, or kNoCopy.
/// Residuals are compared against -tol * w~_max.
inline BidderHappiness strong_happiness(VertexId i, const BipartiteGraph& g,
                                        const ScaledInstance& s,
                                        std::span<const CopyId> edge_copy,
                                        const CopyPool& copies, double tol) {
  BidderHappiness h;
  h.bidder = i;
  const double slack = tol * s.powers(s.s_max);
  const double keep = 1.0 - s.eps;

  std::uint32_t matched = 0;
  double profit = 0.0;
  for (const Incidence& inc : g.bidder_adjacency(i)) {
    if (!s.is_kept(inc.edge)) continue;
    if (edge_copy[inc.edge] != kNoCopy) {
      ++matched;
      continue;
    }
    const double w = s.rounded_weight(inc.edge);
    for (CopyId l = copies.first(inc.neighbor); l < copies.last(inc.neighbor); ++l) {
      profit = std::max(profit, keep * w - copies.price(l));
    }
  }
  h.profit = profit;
  h.saturated = matched == g.bidder_capacity(i);

  for (const Incidence& inc : g.bidder_adjacency(i)) {
    const CopyId c = s.is_kept(inc.edge) ? edge_copy[inc.edge] : kNoCopy;
    if (c == kNoCopy) continue;
    const double residual = s.rounded_weight(inc.edge) - copies.price(c) - profit;
    if (residual < h.worst_residual) {
      h.worst_residual = residual;
      h.worst_edge = inc.edge;
    }
  }
  if (h.worst_edge != kNoEdge && h.worst_residual < -slack) {
    h.happy = false;
    h.reason = "matched edge " + std::to_string(h.worst_edge) + " has utility below profit by " +
               std::to_string(-h.worst_residual);
  } else if (!h.saturated && profit > slack) {
    h.happy = false;
    h.reason = "unsaturated with positive profit " + std::to_string(profit);
  }
  return h;
}

}  // namespace bbm
