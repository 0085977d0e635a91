#pragma once

// Multiplicative auction for max-weight bipartite b-matching.
//
// Each bidder i owns a fixed queue of (r, edge) entries, one for every
// kept edge (i,j) and every r in [r_ij - s_min, r_ij], ordered by
// non-increasing r with ties by edge id. Active bidders are served from a
// LIFO stack; a served bidder pops entries until it is saturated or its
// queue runs out, matching the cheapest copy of an object whenever the
// utility clears (1+eps)^r, and finally bids every collected copy down to
// the utility (1-eps)(1+eps)^{r_i+1}.
//
// Queues are not stored entry by entry. Level r of Q_i holds exactly the
// kept edges with r <= r_ij <= r + s_min, so the queue is replayed from a
// per-bidder bitset of such edges (in edge-id order) that gains edges as
// r reaches r_ij and drops them below r_ij - s_min. The pop sequence is
// the one a bucket sort of all (r, edge) pairs would produce, in O(m)
// memory instead of O(m s_min).
//
// Each slot keeps a lower bound on the price its next check reads. Prices
// never fall, so a check that fails against the bound fails outright and
// the object is not looked up.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bbm/copies.hpp"
#include "bbm/graph.hpp"
#include "bbm/happiness.hpp"
#include "bbm/hugepage.hpp"
#include "bbm/scaling.hpp"

namespace bbm {

struct QueueEntry {
  std::int32_t r;
  EdgeId edge;

  friend bool operator==(const QueueEntry&, const QueueEntry&) = default;
};

struct AuctionCounters {
  std::uint64_t pops = 0;
  std::uint64_t bids = 0;
  std::uint64_t outbids = 0;
  std::uint64_t nonpositive_bids = 0;
  std::uint64_t calls = 0;

  friend bool operator==(const AuctionCounters&, const AuctionCounters&) = default;
};

struct AuctionOptions {
  /// O(deg * beta) checks of the utility bound after every r_i update and
  /// of strong happiness after every AssignAndBid call.
  bool check_invariants = false;
  double tolerance = 1e-9;

  /// check_invariants is switched on by BBM_DEBUG_INVARIANTS=1.
  static AuctionOptions from_environment() {
    AuctionOptions o;
    if (const char* v = std::getenv("BBM_DEBUG_INVARIANTS")) {
      o.check_invariants = std::string_view(v) == "1";
    }
    return o;
  }
};

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A kept edge seen from its bidder. Slots of bidder i are contiguous and
/// in edge-id order.
struct Slot {
  std::int32_t r;       // r_ij; w~ is powers(r)
  float seen;           // lower bound on the price the next check reads
  VertexId object;
  CopyId copy;          // kNoCopy unless (i,j) is in F
};

/// Q_i for every bidder, with one consumption cursor each.
class BidderQueues {
 public:
  BidderQueues() = default;

  /// `slot_begin[i]..slot_begin[i+1]` are bidder i's slots.
  BidderQueues(std::span<const Slot> slots, std::span<const std::uint32_t> slot_begin, int s_min)
      : s_min_(s_min) {
    const std::size_t n_a = slot_begin.size() - 1;
    cursor_.resize(n_a + 1);
    std::size_t spill = 0;
    for (std::size_t i = 0; i <= n_a; ++i) {
      Cursor& c = cursor_[i];
      c.begin = c.enter = c.leave = slot_begin[i];
      if (i < n_a && slot_begin[i + 1] - slot_begin[i] > 64) {
        c.word = spill;
        spill += (slot_begin[i + 1] - slot_begin[i] + 63) / 64;
      }
    }
    spill_.assign(spill, 0);

    // Per bidder, local slot indices by r_ij descending, ties by index.
    by_level_.resize(slots.size());
    for (std::size_t i = 0; i < n_a; ++i) {
      const std::uint32_t base = slot_begin[i], deg = slot_begin[i + 1] - base;
      for (std::uint32_t k = 0; k < deg; ++k) by_level_[base + k] = {k, slots[base + k].r};
      std::stable_sort(by_level_.begin() + base, by_level_.begin() + base + deg,
                       [](const Level& a, const Level& b) { return a.r > b.r; });
    }
    for (std::size_t i = 0; i < n_a; ++i) {
      Cursor& c = cursor_[i];
      const std::uint32_t end = cursor_[i + 1].begin;
      advance_level(c, end);
      if (c.active) find_from(c, end, 0);
    }
  }

  std::size_t num_bidders() const noexcept { return cursor_.empty() ? 0 : cursor_.size() - 1; }

  bool exhausted(VertexId i) const { return cursor_[i].active == 0; }

  void prefetch(VertexId i) const { __builtin_prefetch(&cursor_[i]); }

  /// by_level_ is laid out like the slots, so a bidder's slot range locates
  /// its level order without touching the cursor.
  void prefetch_levels(std::uint32_t first_slot) const {
    if (first_slot < by_level_.size()) __builtin_prefetch(&by_level_[first_slot]);
  }

  /// Next entry as (r, slot index). Queue must not be exhausted.
  std::int32_t next_level(VertexId i) const { return cursor_[i].r; }
  std::uint32_t next_slot(VertexId i) const { return cursor_[i].begin + cursor_[i].bit; }

  void pop(VertexId i) {
    Cursor& c = cursor_[i];
    const std::uint32_t end = cursor_[i + 1].begin;
    if (find_from(c, end, c.bit + 1)) return;
    advance_level(c, end);
    if (c.active) find_from(c, end, 0);
  }

  /// Discards everything left in Q_i.
  void drain(VertexId i) {
    while (!exhausted(i)) pop(i);
  }

  /// Remaining entries of Q_i as (r, slot index), without consuming them.
  std::vector<std::pair<std::int32_t, std::uint32_t>> remaining(VertexId i) const {
    BidderQueues copy = *this;
    std::vector<std::pair<std::int32_t, std::uint32_t>> out;
    while (!copy.exhausted(i)) {
      out.emplace_back(copy.next_level(i), copy.next_slot(i));
      copy.pop(i);
    }
    return out;
  }

 private:
  struct Cursor {
    std::int32_t r = 0;
    std::uint32_t bit = 0;     // local index of the next entry
    std::uint32_t enter = 0;   // into by_level_, next slot to join
    std::uint32_t leave = 0;   // into by_level_, next slot to drop
    std::uint32_t active = 0;  // slots in the current level
    std::uint32_t begin = 0;   // first slot
    // The level's bitset for degree <= 64, else an offset into spill_.
    std::uint64_t word = 0;
  };
  struct Level {
    std::uint32_t local;
    std::int32_t r;
  };

  std::uint64_t* bits(Cursor& c, std::uint32_t end) {
    return end - c.begin <= 64 ? &c.word : spill_.data() + c.word;
  }
  const std::uint64_t* bits(const Cursor& c, std::uint32_t end) const {
    return end - c.begin <= 64 ? &c.word : spill_.data() + c.word;
  }

  /// Moves bit to the first active slot at local index >= from.
  bool find_from(Cursor& c, std::uint32_t end, std::uint32_t from) const {
    const std::uint32_t words = (end - c.begin + 63) / 64;
    std::uint32_t w = from / 64;
    if (w >= words) return false;
    const std::uint64_t* b = bits(c, end);
    std::uint64_t cur = b[w] & (~std::uint64_t{0} << (from % 64));
    for (;;) {
      if (cur) {
        c.bit = w * 64 + static_cast<std::uint32_t>(std::countr_zero(cur));
        return true;
      }
      if (++w == words) return false;
      cur = b[w];
    }
  }

  /// Steps to the next nonempty level; leaves active == 0 when none is left.
  void advance_level(Cursor& c, std::uint32_t end) {
    std::uint64_t* b = bits(c, end);
    for (;;) {
      if (c.active == 0) {
        if (c.enter == end) return;
        c.r = by_level_[c.enter].r;
      } else {
        --c.r;
      }
      while (c.leave < c.enter && by_level_[c.leave].r > c.r + s_min_) {
        const std::uint32_t k = by_level_[c.leave++].local;
        b[k / 64] &= ~(std::uint64_t{1} << (k % 64));
        --c.active;
      }
      while (c.enter < end && by_level_[c.enter].r >= c.r) {
        const std::uint32_t k = by_level_[c.enter++].local;
        b[k / 64] |= std::uint64_t{1} << (k % 64);
        ++c.active;
      }
      if (c.active) return;
    }
  }

  int s_min_ = 0;
  std::vector<std::uint64_t> spill_;  // bitsets of bidders with degree > 64
  HugeVector<Level> by_level_;        // per slot
  HugeVector<Cursor> cursor_;         // one sentinel past the last bidder
};

struct BidderState {
  std::uint32_t matched = 0;   // |F(i)|
  std::uint32_t capacity = 0;  // b(i)
  std::int32_t last_index = 0;  // r_i
  std::uint8_t in_active = 0;
  std::uint8_t exhausted = 0;  // mirrors the queue
};

struct AuctionState {
  HugeVector<Slot> slots;
  std::vector<EdgeId> slot_edge;
  std::vector<std::uint32_t> slot_begin;  // per bidder, into slots
  BidderQueues queues;
  HugeVector<BidderState> bidders;
  CopyPool copies;                        // owner tags are slots
  std::vector<VertexId> active;           // I, used as a stack
  std::vector<std::pair<CopyId, std::uint32_t>> pending;  // T, as (copy, slot)
  std::vector<std::uint64_t> in_pending;  // by local slot index, clear between turns
  AuctionCounters counters;
  // Per edge; only bidder i's entries are refreshed, and only before the
  // invariant checks of its own turn.
  std::vector<CopyId> edge_copy;

  /// Unconsumed part of Q_i.
  std::vector<QueueEntry> queue(VertexId i) const {
    std::vector<QueueEntry> out;
    for (const auto& [r, k] : queues.remaining(i)) out.push_back({r, slot_edge[k]});
    return out;
  }
  bool exhausted(VertexId i) const { return queues.exhausted(i); }
  void drain(VertexId i) {
    queues.drain(i);
    bidders[i].exhausted = 1;
  }

  /// Copy matched through edge e, or kNoCopy. Edge must be kept.
  CopyId copy_of(EdgeId e) const { return slots[slot_of(e)].copy; }

  /// Slot of kept edge e. Linear; meant for tests and debugging.
  std::uint32_t slot_of(EdgeId e) const {
    const auto it = std::find(slot_edge.begin(), slot_edge.end(), e);
    if (it == slot_edge.end()) throw std::invalid_argument("edge is pruned");
    return static_cast<std::uint32_t>(it - slot_edge.begin());
  }

  /// Edge owning copy c, or kNoEdge.
  EdgeId owner_edge(CopyId c) const {
    const std::uint32_t k = copies.owner(c);
    return k == CopyPool::kNoOwner ? kNoEdge : slot_edge[k];
  }

  /// Prefetches what bidder i's next turn reads first.
  void warm(VertexId i) const {
    __builtin_prefetch(&bidders[i]);
    queues.prefetch(i);
    const std::uint32_t lo = slot_begin[i], hi = std::min(slot_begin[i + 1], lo + 16);
    queues.prefetch_levels(lo);
    queues.prefetch_levels(lo + 8);
    for (std::uint32_t k = lo; k < hi; k += 2) __builtin_prefetch(&slots[k]);
  }

  /// Prefetches the objects of bidder i's first slots and their cheapest
  /// copies. Reads the slots, so call it once they are likely cached.
  void warm_objects(VertexId i) const {
    const std::uint32_t lo = slot_begin[i], hi = std::min(slot_begin[i + 1], lo + 32);
    for (std::uint32_t k = lo; k < hi; ++k) copies.prefetch(slots[k].object);
    for (std::uint32_t k = lo; k < hi; ++k) copies.prefetch_cheapest(slots[k].object);
  }

  void sync_edge_copy(VertexId i) {
    for (std::uint32_t k = slot_begin[i]; k < slot_begin[i + 1]; ++k) {
      edge_copy[slot_edge[k]] = slots[k].copy;
    }
  }
};

/// Σ_i deg(i) (s_min + 1): the total number of queue entries available
/// before pruning, hence a hard cap on pops.
inline std::uint64_t pop_budget(const ScaledInstance& s, const BipartiteGraph& g) {
  return static_cast<std::uint64_t>(g.num_edges()) * static_cast<std::uint64_t>(s.s_min + 1);
}

inline AuctionState initialize(const ScaledInstance& s, const BipartiteGraph& g) {
  AuctionState st;
  const std::size_t n_a = g.num_bidders();
  st.bidders.resize(n_a);
  st.slots.reserve(s.kept_count);
  st.slot_edge.reserve(s.kept_count);
  st.slot_begin.assign(n_a + 1, 0);
  for (VertexId i = 0; i < n_a; ++i) {
    BidderState& b = st.bidders[i];
    b.capacity = g.bidder_capacity(i);
    b.in_active = 1;
    for (const Incidence& inc : g.bidder_adjacency(i)) {
      const EdgeId e = inc.edge;
      if (!s.is_kept(e)) continue;
      st.slots.push_back({s.exponent[e], 0.0f, inc.neighbor, kNoCopy});
      st.slot_edge.push_back(e);
      b.last_index = std::max(b.last_index, s.exponent[e]);
    }
    st.slot_begin[i + 1] = static_cast<std::uint32_t>(st.slots.size());
  }
  st.queues = BidderQueues(st.slots, st.slot_begin, s.s_min);
  std::uint32_t widest = 0;
  for (VertexId i = 0; i < n_a; ++i) widest = std::max(widest, st.slot_begin[i + 1] - st.slot_begin[i]);
  st.in_pending.assign(widest / 64 + 1, 0);
  for (VertexId i = 0; i < n_a; ++i) st.bidders[i].exhausted = st.queues.exhausted(i);
  st.copies = CopyPool(g.object_capacities());
  // Bidder 0 ends up on top of the stack.
  st.active.reserve(n_a);
  for (std::size_t i = n_a; i-- > 0;) st.active.push_back(static_cast<VertexId>(i));
  return st;
}

namespace detail {

/// Largest float not above x.
inline float float_below(double x) {
  float f = static_cast<float>(x);
  if (static_cast<double>(f) > x) f = std::nextafter(f, -std::numeric_limits<float>::infinity());
  return f;
}

/// Prices never fall, so `seen` stays a lower bound: on the own copy's
/// price while matched, on the object's cheapest price otherwise.
inline void match_slot(VertexId i, std::uint32_t k, CopyId c, AuctionState& st) {
  const std::uint32_t previous = st.copies.owner(c);
  if (previous != CopyPool::kNoOwner) {
    const VertexId y = st.copies.holder(c);
    Slot& lost = st.slots[previous];
    lost.copy = kNoCopy;
    lost.seen = float_below(st.copies.min_price(st.copies.object_of(c)));
    BidderState& loser = st.bidders[y];
    --loser.matched;
    ++st.counters.outbids;
    if (!loser.in_active && !loser.exhausted) {
      st.active.push_back(y);
      loser.in_active = 1;
      st.warm(y);
    }
  }
  Slot& won = st.slots[k];
  st.copies.set_owner(c, k, i);
  won.copy = c;
  won.seen = float_below(st.copies.price(c));
  ++st.bidders[i].matched;
}

}  // namespace detail

/// Assign copy c of object j to bidder i through edge e. An evicted owner
/// goes back on the stack only if its queue still has entries.
inline void match(VertexId i, EdgeId e, CopyId c, AuctionState& st, const BipartiteGraph& g) {
  if (g.edge(e).bidder != i) throw std::invalid_argument("edge does not belong to bidder");
  const auto first = st.slot_edge.begin() + st.slot_begin[i];
  const auto last = st.slot_edge.begin() + st.slot_begin[i + 1];
  const auto it = std::lower_bound(first, last, e);
  if (it == last || *it != e) throw std::invalid_argument("edge is pruned");
  detail::match_slot(i, static_cast<std::uint32_t>(it - st.slot_edge.begin()), c, st);
}

namespace detail {

inline void check_utility_bound(VertexId i, const AuctionState& st, const ScaledInstance& s,
                                const BipartiteGraph& g) {
  const double first = s.powers(st.bidders[i].last_index + 1);
  for (const Incidence& inc : g.bidder_adjacency(i)) {
    if (!s.is_kept(inc.edge) || st.edge_copy[inc.edge] != kNoCopy) continue;
    const double bound = std::max(first, s.powers(s.exponent[inc.edge] - s.s_min));
    const double w = s.rounded_weight(inc.edge);
    for (CopyId l = st.copies.first(inc.neighbor); l < st.copies.last(inc.neighbor); ++l) {
      if (!(w - st.copies.price(l) < bound)) {
        throw InvariantViolation("utility bound broken: bidder " + std::to_string(i) +
                                 ", edge " + std::to_string(inc.edge) + ", copy " +
                                 std::to_string(l) + ", utility " +
                                 std::to_string(w - st.copies.price(l)) + " >= " +
                                 std::to_string(bound));
      }
    }
  }
}

}  // namespace detail

inline void assign_and_bid(VertexId i, AuctionState& st, const ScaledInstance& s,
                           const BipartiteGraph& g, const AuctionOptions& opt = {}) {
  st.pending.clear();
  const std::uint32_t base = st.slot_begin[i];
  // A bidder holds at most one copy per object, so the slot identifies (j, c).
  auto collect = [&](CopyId c, std::uint32_t k) {
    const std::uint32_t local = k - base;
    std::uint64_t& word = st.in_pending[local / 64];
    const std::uint64_t bit = std::uint64_t{1} << (local % 64);
    if (word & bit) return;
    word |= bit;
    st.pending.emplace_back(c, k);
  };

  BidderState& me = st.bidders[i];
  if (opt.check_invariants) {
    st.edge_copy.resize(g.num_edges(), kNoCopy);
    st.sync_edge_copy(i);
  }
  if (!st.active.empty()) st.warm(st.active.back());
  st.warm_objects(i);
  while (!st.queues.exhausted(i) && me.matched < me.capacity) {
    const std::int32_t r = st.queues.next_level(i);
    const std::uint32_t k = st.queues.next_slot(i);
    st.queues.pop(i);
    me.exhausted = st.queues.exhausted(i);
    ++st.counters.pops;
    me.last_index = r;
    if (opt.check_invariants) {
      st.sync_edge_copy(i);
      detail::check_utility_bound(i, st, s, g);
    }

    Slot& slot = st.slots[k];
    const double threshold = s.powers(r);
    const double w = s.powers(slot.r);
    if (w - static_cast<double>(slot.seen) < threshold) continue;
    if (slot.copy != kNoCopy) {
      const double p = st.copies.price(slot.copy);
      slot.seen = detail::float_below(p);
      if (w - p >= threshold) collect(slot.copy, k);
    } else {
      const CopyPool::Top& top = st.copies.top(slot.object);
      slot.seen = detail::float_below(top.price);
      if (w - top.price >= threshold) {
        const CopyId c = top.copy;
        detail::match_slot(i, k, c, st);
        collect(c, k);
      }
    }
  }

  const double target = (1.0 - s.eps) * s.powers(me.last_index + 1);
  for (const auto& [c, k] : st.pending) {
    const double gamma = s.powers(st.slots[k].r) - st.copies.price(c) - target;
    ++st.counters.bids;
    if (!(gamma > 0.0)) {
      ++st.counters.nonpositive_bids;
      if (opt.check_invariants) {
        throw InvariantViolation("nonpositive bid " + std::to_string(gamma) + " by bidder " +
                                 std::to_string(i) + " on copy " + std::to_string(c));
      }
    }
    st.copies.raise_price(c, gamma);
  }
  for (const auto& entry : st.pending) st.in_pending[(entry.second - base) / 64] = 0;
  if (!st.active.empty()) st.warm_objects(st.active.back());

  if (opt.check_invariants) {
    st.sync_edge_copy(i);
    const BidderHappiness h = strong_happiness(i, g, s, st.edge_copy, st.copies, opt.tolerance);
    if (!h.happy) {
      throw InvariantViolation("bidder " + std::to_string(i) +
                               " not strongly happy after its turn: " + h.reason);
    }
  }
}

struct AuctionResult {
  std::vector<CopyId> edge_copy;
  CopyPool copies;
  std::vector<std::int32_t> last_index;
  std::vector<std::uint32_t> matched_count;
  AuctionCounters counters;
  std::uint64_t pop_budget = 0;

  /// Matched edge ids, ascending.
  std::vector<EdgeId> matching() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < edge_copy.size(); ++e) {
      if (edge_copy[e] != kNoCopy) out.push_back(e);
    }
    return out;
  }
};

/// Packages a finished state; copy owners become edge ids.
inline AuctionResult finish(AuctionState st, const ScaledInstance& s, const BipartiteGraph& g) {
  AuctionResult out;
  out.edge_copy.assign(g.num_edges(), kNoCopy);
  for (CopyId c = 0; c < st.copies.size(); ++c) {
    const EdgeId e = st.owner_edge(c);
    st.copies.set_owner(c, e, st.copies.holder(c));
    if (e != kNoEdge) out.edge_copy[e] = c;
  }
  out.copies = std::move(st.copies);
  out.last_index.resize(st.bidders.size());
  out.matched_count.resize(st.bidders.size());
  for (std::size_t i = 0; i < st.bidders.size(); ++i) {
    out.last_index[i] = st.bidders[i].last_index;
    out.matched_count[i] = st.bidders[i].matched;
  }
  out.counters = st.counters;
  out.pop_budget = pop_budget(s, g);
  return out;
}

inline AuctionResult run(const ScaledInstance& s, const BipartiteGraph& g,
                         const AuctionOptions& opt = {}) {
  AuctionState st = initialize(s, g);
  while (!st.active.empty()) {
    const VertexId i = st.active.back();
    st.active.pop_back();
    st.bidders[i].in_active = 0;
    ++st.counters.calls;
    assign_and_bid(i, st, s, g, opt);
  }
  return finish(std::move(st), s, g);
}

}  // namespace bbm
