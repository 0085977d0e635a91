#pragma once

// Weight preprocessing: prune light edges, scale so the heaviest edge
// weighs b(V)/eps', then round every survivor down to an integer power
// of (1+eps) with eps = eps'/2.
//
// Every power (1+eps)^r used anywhere downstream is read from one
// PowerTable. Entries are produced by repeated multiplication (r > 0) and
// repeated division (r < 0) starting from exactly 1, so table[r+1] is
// table[r]*(1+eps) rounded once and strict comparisons against table
// values agree across call sites.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bbm/graph.hpp"

namespace bbm {

namespace detail {

inline void require_eps(double eps) {
  if (!(eps > 0.0 && eps <= 0.5)) {
    throw std::invalid_argument("eps must lie in (0, 1/2], got " + std::to_string(eps));
  }
}

/// (1+eps)^r by the same step sequence the PowerTable uses.
inline double step_power(double base, int r) {
  double v = 1.0;
  if (r >= 0) {
    for (int k = 0; k < r; ++k) v *= base;
  } else {
    for (int k = 0; k > r; --k) v /= base;
  }
  return v;
}

}  // namespace detail

/// floor(log_{1+eps} x). Log estimate, then corrected against step powers.
inline int ilog(double x, double eps) {
  detail::require_eps(eps);
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::invalid_argument("ilog needs a positive finite argument, got " +
                                std::to_string(x));
  }
  const double base = 1.0 + eps;
  int r = static_cast<int>(std::floor(std::log(x) / std::log1p(eps)));
  while (detail::step_power(base, r) > x) --r;
  while (detail::step_power(base, r + 1) <= x) ++r;
  return r;
}

/// Smallest s with (1+eps)^{-s} <= eps.
inline int compute_smin(double eps) {
  detail::require_eps(eps);
  const double base = 1.0 + eps;
  double v = 1.0;
  int s = 0;
  while (v > eps) {
    v /= base;
    ++s;
  }
  return s;
}

/// Exponent of the maximum post-scaling weight b(V)/(2 eps).
inline int compute_smax(double eps, std::uint64_t b_total) {
  detail::require_eps(eps);
  if (b_total < 1) throw std::invalid_argument("b(V) must be at least 1");
  return ilog(static_cast<double>(b_total) / (2.0 * eps), eps);
}

/// (1+eps)^r for r in [lo, hi].
class PowerTable {
 public:
  PowerTable() = default;
  PowerTable(double eps, int lo, int hi) : base_(1.0 + eps), lo_(lo), hi_(hi) {
    if (lo > 0 || hi < 0) throw std::invalid_argument("power table must contain r = 0");
    values_.resize(static_cast<std::size_t>(hi - lo + 1));
    at(0) = 1.0;
    for (int r = 1; r <= hi; ++r) at(r) = at(r - 1) * base_;
    for (int r = -1; r >= lo; --r) at(r) = at(r + 1) / base_;
  }

  double operator()(int r) const {
    if (r < lo_ || r > hi_) {
      throw std::out_of_range("power index " + std::to_string(r) + " outside [" +
                              std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
    }
    return values_[static_cast<std::size_t>(r - lo_)];
  }

  /// Largest r with table(r) <= x, for x inside the table range.
  int ilog(double x) const {
    int r = static_cast<int>(std::floor(std::log(x) / std::log(base_)));
    r = std::clamp(r, lo_, hi_);
    while (r > lo_ && (*this)(r) > x) --r;
    while (r < hi_ && (*this)(r + 1) <= x) ++r;
    return r;
  }

  int lo() const noexcept { return lo_; }
  int hi() const noexcept { return hi_; }
  double base() const noexcept { return base_; }

 private:
  double& at(int r) { return values_[static_cast<std::size_t>(r - lo_)]; }

  double base_ = 1.0;
  int lo_ = 0;
  int hi_ = 0;
  std::vector<double> values_{1.0};
};

struct ScaledInstance {
  double eps_prime = 0.0;
  double eps = 0.0;
  double max_weight = 0.0;       // W
  double prune_threshold = 0.0;  // (eps'/b(V)) W
  double sigma = 0.0;            // b(V)/(eps' W)
  int s_min = 0;
  int s_max = 0;
  std::vector<std::uint8_t> kept;    // per edge
  std::vector<double> scaled;        // per edge, scaled weight (0 when pruned)
  std::vector<std::int32_t> exponent;  // per edge, r_ij (meaningful when kept)
  std::size_t pruned = 0;
  std::size_t kept_count = 0;
  PowerTable powers;

  bool is_kept(EdgeId e) const { return kept[e] != 0; }

  /// w~(e) = (1+eps)^{r_e}.
  double rounded_weight(EdgeId e) const { return powers(exponent[e]); }

  bool empty() const noexcept { return kept_count == 0; }
};

namespace detail {

inline void finish_instance(ScaledInstance& s) {
  s.powers = PowerTable(s.eps, -s.s_min - 1, s.s_max + 2);
}

}  // namespace detail

inline ScaledInstance preprocess(const BipartiteGraph& g, double eps_prime) {
  if (!(eps_prime > 0.0 && eps_prime < 1.0)) {
    throw std::invalid_argument("epsilon' must lie in (0, 1), got " +
                                std::to_string(eps_prime));
  }
  ScaledInstance s;
  s.eps_prime = eps_prime;
  s.eps = eps_prime / 2.0;
  s.s_min = compute_smin(s.eps);
  const std::size_t m = g.num_edges();
  s.kept.assign(m, 0);
  s.scaled.assign(m, 0.0);
  s.exponent.assign(m, 0);
  s.max_weight = g.max_weight();

  const std::uint64_t b_total = g.stats().b_total;
  if (m == 0 || s.max_weight == 0.0) {
    s.pruned = m;
    detail::finish_instance(s);
    return s;
  }

  const double bv = static_cast<double>(b_total);
  const double top = bv / eps_prime;  // scaled weight of the heaviest edge
  s.prune_threshold = (eps_prime / bv) * s.max_weight;
  s.sigma = bv / (eps_prime * s.max_weight);

  // Table sized from the analytic s_max first, then s_max is re-read from
  // the table itself so r_ij <= s_max holds bit-for-bit.
  s.s_max = compute_smax(s.eps, b_total);
  s.powers = PowerTable(s.eps, -s.s_min - 1, s.s_max + 3);
  s.s_max = std::max(0, s.powers.ilog(top));
  detail::finish_instance(s);

  for (EdgeId e = 0; e < m; ++e) {
    const double w = g.edge(e).weight;
    if (w < s.prune_threshold) {
      ++s.pruned;
      continue;
    }
    // w/W first: the heaviest edge maps to exactly b(V)/eps'.
    const double scaled = std::max(1.0, (w / s.max_weight) * top);
    s.kept[e] = 1;
    s.scaled[e] = scaled;
    s.exponent[e] = s.powers.ilog(scaled);
    ++s.kept_count;
  }
  return s;
}

/// Instance whose rounded weights are given directly as exponents; every
/// edge is kept. Used to replay hand-worked auctions at a chosen eps.
inline ScaledInstance make_rounded_instance(const BipartiteGraph& g, double eps,
                                            std::span<const std::int32_t> exponents) {
  detail::require_eps(eps);
  if (exponents.size() != g.num_edges()) {
    throw std::invalid_argument("need one exponent per edge");
  }
  ScaledInstance s;
  s.eps = eps;
  s.eps_prime = 2.0 * eps;
  s.s_min = compute_smin(eps);
  s.s_max = 0;
  for (std::int32_t r : exponents) {
    if (r < 0) throw std::invalid_argument("exponents must be nonnegative");
    s.s_max = std::max<int>(s.s_max, r);
  }
  detail::finish_instance(s);
  const std::size_t m = g.num_edges();
  s.kept.assign(m, 1);
  s.exponent.assign(exponents.begin(), exponents.end());
  s.scaled.resize(m);
  for (EdgeId e = 0; e < m; ++e) s.scaled[e] = s.powers(s.exponent[e]);
  s.kept_count = m;
  s.max_weight = m ? s.powers(s.s_max) : 0.0;
  return s;
}

/// The kept subgraph with w~ as edge weights. Edge ids are renumbered
/// densely; `original_edge` maps them back.
struct RoundedGraph {
  BipartiteGraph graph;
  std::vector<EdgeId> original_edge;
};

inline RoundedGraph rounded_graph(const ScaledInstance& s, const BipartiteGraph& g) {
  RoundedGraph out;
  std::vector<Edge> edges;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!s.is_kept(e)) continue;
    edges.push_back({g.edge(e).bidder, g.edge(e).object, s.rounded_weight(e)});
    out.original_edge.push_back(e);
  }
  std::vector<std::int64_t> ba(g.num_bidders()), bb(g.num_objects());
  for (VertexId i = 0; i < g.num_bidders(); ++i) ba[i] = std::max<std::int64_t>(1, g.bidder_capacity(i));
  for (VertexId j = 0; j < g.num_objects(); ++j) bb[j] = std::max<std::int64_t>(1, g.object_capacity(j));
  out.graph = build_graph(g.num_bidders(), g.num_objects(), std::move(edges), ba, bb);
  return out;
}

}  // namespace bbm
