#pragma once

// A-posteriori certification of an auction result.
//
// Everything here works on the rounded weights w~ except
// verify_approximation, which compares original weights against an exact
// optimum. The relaxed complementary-slackness premises are checked with
// delta1 = eps and delta2 = 0; when they hold, scaling (pi, p) by 1/(1-eps)
// and taking z' = max{w~ - (pi+p)/(1-eps), 0} gives a feasible dual of the
// LP relaxation, whose objective bounds w~(F*) from above.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbm/auction.hpp"
#include "bbm/graph.hpp"
#include "bbm/happiness.hpp"
#include "bbm/scaling.hpp"

namespace bbm {

inline constexpr double kDefaultTolerance = 1e-9;

struct FeasibilityReport {
  bool feasible = true;
  std::size_t size = 0;
  std::vector<std::string> problems;
};

inline FeasibilityReport check_feasible(std::span<const EdgeId> matching,
                                        const BipartiteGraph& g) {
  FeasibilityReport rep;
  rep.size = matching.size();
  std::vector<std::uint32_t> deg_a(g.num_bidders(), 0), deg_b(g.num_objects(), 0);
  std::vector<std::uint8_t> used(g.num_edges(), 0);
  for (EdgeId e : matching) {
    if (e >= g.num_edges()) {
      rep.feasible = false;
      rep.problems.push_back("edge id " + std::to_string(e) + " not in graph");
      continue;
    }
    if (used[e]++) {
      rep.feasible = false;
      rep.problems.push_back("edge " + std::to_string(e) + " listed twice");
      continue;
    }
    ++deg_a[g.edge(e).bidder];
    ++deg_b[g.edge(e).object];
  }
  for (VertexId i = 0; i < g.num_bidders(); ++i) {
    if (deg_a[i] > g.bidder_capacity(i)) {
      rep.feasible = false;
      rep.problems.push_back("bidder " + std::to_string(i) + " has " + std::to_string(deg_a[i]) +
                             " matched edges, capacity " + std::to_string(g.bidder_capacity(i)));
    }
  }
  for (VertexId j = 0; j < g.num_objects(); ++j) {
    if (deg_b[j] > g.object_capacity(j)) {
      rep.feasible = false;
      rep.problems.push_back("object " + std::to_string(j) + " has " + std::to_string(deg_b[j]) +
                             " matched edges, capacity " + std::to_string(g.object_capacity(j)));
    }
  }
  const std::uint64_t cap = std::min(g.bidder_capacity_total(), g.object_capacity_total());
  if (rep.feasible && rep.size > cap) {
    rep.feasible = false;
    rep.problems.push_back("matching larger than min{b(A), b(B)}");
  }
  return rep;
}

struct HappinessReport {
  std::size_t happy = 0;
  std::vector<BidderHappiness> failures;
  bool ok() const noexcept { return failures.empty(); }
};

inline HappinessReport check_strong_happiness(const AuctionResult& result,
                                              const ScaledInstance& s, const BipartiteGraph& g,
                                              double tol = kDefaultTolerance) {
  HappinessReport rep;
  for (VertexId i = 0; i < g.num_bidders(); ++i) {
    BidderHappiness h = strong_happiness(i, g, s, result.edge_copy, result.copies, tol);
    if (h.happy) {
      ++rep.happy;
    } else {
      rep.failures.push_back(std::move(h));
    }
  }
  return rep;
}

/// Plain eps-happiness of every bidder against one price per object.
inline HappinessReport check_happiness(std::span<const CopyId> edge_copy,
                                       std::span<const double> object_price,
                                       const ScaledInstance& s, const BipartiteGraph& g,
                                       double tol = kDefaultTolerance) {
  HappinessReport rep;
  const double slack = tol * s.powers(s.s_max);
  for (VertexId i = 0; i < g.num_bidders(); ++i) {
    BidderHappiness h;
    h.bidder = i;
    std::uint32_t matched = 0;
    for (const Incidence& inc : g.bidder_adjacency(i)) {
      if (!s.is_kept(inc.edge)) continue;
      if (edge_copy[inc.edge] != kNoCopy) {
        ++matched;
      } else {
        h.profit = std::max(h.profit, (1.0 - s.eps) * s.rounded_weight(inc.edge) -
                                          object_price[inc.neighbor]);
      }
    }
    h.saturated = matched == g.bidder_capacity(i);
    for (const Incidence& inc : g.bidder_adjacency(i)) {
      if (!s.is_kept(inc.edge) || edge_copy[inc.edge] == kNoCopy) continue;
      const double res = s.rounded_weight(inc.edge) - object_price[inc.neighbor] - h.profit;
      if (res < h.worst_residual) {
        h.worst_residual = res;
        h.worst_edge = inc.edge;
      }
    }
    h.happy = !(h.worst_edge != kNoEdge && h.worst_residual < -slack) &&
              (h.saturated || h.profit <= slack);
    if (h.happy) {
      ++rep.happy;
    } else {
      rep.failures.push_back(std::move(h));
    }
  }
  return rep;
}

struct DualSolution {
  std::vector<double> profit;     // pi, per bidder
  std::vector<double> price;      // p, per object
  std::vector<double> edge_dual;  // z, per edge (0 for pruned edges)
  double eps = 0.0;
};

inline DualSolution derive_duals(const AuctionResult& result, const ScaledInstance& s,
                                 const BipartiteGraph& g) {
  DualSolution d;
  d.eps = s.eps;
  d.price.resize(g.num_objects());
  for (VertexId j = 0; j < g.num_objects(); ++j) d.price[j] = result.copies.min_price(j);
  d.profit.assign(g.num_bidders(), 0.0);
  for (VertexId i = 0; i < g.num_bidders(); ++i) {
    for (const Incidence& inc : g.bidder_adjacency(i)) {
      if (!s.is_kept(inc.edge) || result.edge_copy[inc.edge] != kNoCopy) continue;
      d.profit[i] = std::max(d.profit[i], (1.0 - s.eps) * s.rounded_weight(inc.edge) -
                                              d.price[inc.neighbor]);
    }
  }
  d.edge_dual.assign(g.num_edges(), 0.0);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!s.is_kept(e)) continue;
    const Edge& ed = g.edge(e);
    d.edge_dual[e] = std::max(s.rounded_weight(e) - d.profit[ed.bidder] - d.price[ed.object], 0.0);
  }
  return d;
}

struct CsViolation {
  std::string condition;
  std::size_t index = 0;  // edge, bidder or object id depending on condition
  double residual = 0.0;
};

struct RelaxedCsReport {
  bool matched_edges = true;        // pi(i) + p(j) <= w~(i,j) on F
  bool unmatched_edges = true;      // pi(i) + p(j) >= (1-eps) w~(i,j) off F
  bool unsaturated_bidders = true;  // pi(i) = 0
  bool unsaturated_objects = true;  // p(j) = 0
  std::vector<CsViolation> violations;
  bool ok() const noexcept {
    return matched_edges && unmatched_edges && unsaturated_bidders && unsaturated_objects;
  }
};

inline RelaxedCsReport check_relaxed_cs(const DualSolution& d, std::span<const EdgeId> matching,
                                        const ScaledInstance& s, const BipartiteGraph& g,
                                        double tol = kDefaultTolerance) {
  RelaxedCsReport rep;
  std::vector<std::uint8_t> in_f(g.num_edges(), 0);
  std::vector<std::uint32_t> deg_a(g.num_bidders(), 0), deg_b(g.num_objects(), 0);
  for (EdgeId e : matching) {
    in_f[e] = 1;
    ++deg_a[g.edge(e).bidder];
    ++deg_b[g.edge(e).object];
  }
  const double zero_slack = tol * s.powers(s.s_max);
  for (VertexId i = 0; i < g.num_bidders(); ++i) {
    if (deg_a[i] < g.bidder_capacity(i) && d.profit[i] > zero_slack) {
      rep.unsaturated_bidders = false;
      rep.violations.push_back({"unsaturated bidder with positive profit", i, d.profit[i]});
    }
  }
  for (VertexId j = 0; j < g.num_objects(); ++j) {
    if (deg_b[j] < g.object_capacity(j) && d.price[j] > zero_slack) {
      rep.unsaturated_objects = false;
      rep.violations.push_back({"unsaturated object with positive price", j, d.price[j]});
    }
  }
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!s.is_kept(e)) continue;
    const Edge& ed = g.edge(e);
    const double w = s.rounded_weight(e);
    const double sum = d.profit[ed.bidder] + d.price[ed.object];
    if (in_f[e]) {
      if (sum > w * (1.0 + tol)) {
        rep.matched_edges = false;
        rep.violations.push_back({"matched edge overpriced", e, sum - w});
      }
    } else if (sum < (1.0 - d.eps) * w * (1.0 - tol)) {
      rep.unmatched_edges = false;
      rep.violations.push_back({"unmatched edge underpriced", e, (1.0 - d.eps) * w - sum});
    }
  }
  return rep;
}

/// Objective of the scaled feasible dual. Requires a passing relaxed-CS report.
/// The result is rounded outward: it carries a bound on its own
/// floating-point error, so it never falls below the exact dual objective.
inline double certified_upper_bound(const DualSolution& d, const ScaledInstance& s,
                                    const BipartiteGraph& g, const RelaxedCsReport& cs) {
  if (!cs.ok()) {
    throw std::logic_error("upper bound requested without passing complementary slackness");
  }
  const double scale = 1.0 / (1.0 - d.eps);
  CompensatedSum vertex_part, edge_part;
  double magnitude = 0.0;
  for (VertexId i = 0; i < g.num_bidders(); ++i) vertex_part.add(g.bidder_capacity(i) * d.profit[i]);
  for (VertexId j = 0; j < g.num_objects(); ++j) vertex_part.add(g.object_capacity(j) * d.price[j]);
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!s.is_kept(e)) continue;
    const Edge& ed = g.edge(e);
    const double w = s.rounded_weight(e);
    edge_part.add(std::max(w - (d.profit[ed.bidder] + d.price[ed.object]) * scale, 0.0));
    magnitude += w;
  }
  const double vertex_total = vertex_part.value() * scale;
  magnitude += vertex_total;
  constexpr double kUnit = std::numeric_limits<double>::epsilon();
  return vertex_total + edge_part.value() + 8.0 * kUnit * magnitude;
}

struct ApproxVerdict {
  bool ok = false;
  double weight = 0.0;  // w(F), original weights
  double bound = 0.0;   // (1-eps') OPT - tol OPT
};

inline ApproxVerdict verify_approximation(std::span<const EdgeId> matching,
                                          const BipartiteGraph& g, double eps_prime,
                                          double opt_weight, double tol = kDefaultTolerance) {
  ApproxVerdict v;
  v.weight = matching_weight(g, matching);
  v.bound = (1.0 - eps_prime) * opt_weight - tol * opt_weight;
  v.ok = v.weight >= v.bound;
  return v;
}

/// Sum of w~ over the matching.
inline double rounded_matching_weight(const ScaledInstance& s, std::span<const EdgeId> matching) {
  std::vector<EdgeId> ids(matching.begin(), matching.end());
  std::sort(ids.begin(), ids.end());
  CompensatedSum total;
  for (EdgeId e : ids) total.add(s.rounded_weight(e));
  return total.value();
}

struct CertReport {
  double tolerance = kDefaultTolerance;
  FeasibilityReport feasibility;
  HappinessReport strong;
  RelaxedCsReport relaxed_cs;
  DualSolution duals;
  bool has_upper_bound = false;
  double rounded_weight = 0.0;  // w~(F)
  double upper_bound = 0.0;
  double ratio_lower = 0.0;     // w~(F) / upper_bound

  bool feasible() const noexcept { return feasibility.feasible; }
  bool strong_happy() const noexcept { return strong.ok(); }
  bool passed() const noexcept {
    return feasible() && strong_happy() && relaxed_cs.ok() && has_upper_bound;
  }
};

inline CertReport certify(const AuctionResult& result, const ScaledInstance& s,
                          const BipartiteGraph& g, double tol = kDefaultTolerance) {
  CertReport rep;
  rep.tolerance = tol;
  const std::vector<EdgeId> f = result.matching();
  rep.feasibility = check_feasible(f, g);
  rep.strong = check_strong_happiness(result, s, g, tol);
  rep.duals = derive_duals(result, s, g);
  rep.relaxed_cs = check_relaxed_cs(rep.duals, f, s, g, tol);
  rep.rounded_weight = rounded_matching_weight(s, f);
  if (rep.relaxed_cs.ok()) {
    rep.has_upper_bound = true;
    rep.upper_bound = certified_upper_bound(rep.duals, s, g, rep.relaxed_cs);
    rep.ratio_lower = rep.upper_bound > 0.0 ? rep.rounded_weight / rep.upper_bound : 1.0;
  }
  return rep;
}

}  // namespace bbm
