#pragma once

// Object copies. Object j owns b(j) copies laid out contiguously; each
// copy has a price and at most one owner. Per object, an indexed binary
// min-heap keyed by (price, copy id) yields the cheapest copy in O(1);
// the root and its price are mirrored per object so a lookup touches one
// cache line. Prices only ever rise, so updates are a sift-down,
// O(log b(j)).

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "bbm/graph.hpp"
#include "bbm/hugepage.hpp"

namespace bbm {

using CopyId = std::uint32_t;

inline constexpr CopyId kNoCopy = std::numeric_limits<CopyId>::max();

class CopyPool {
 public:
  /// Owner tags are opaque to the pool; the auction stores queue slots
  /// while running and edge ids in its result.
  static constexpr std::uint32_t kNoOwner = std::numeric_limits<std::uint32_t>::max();

  struct Top {
    double price = 0.0;
    CopyId copy = kNoCopy;
    CopyId first = 0;  // first copy of the object
  };

  CopyPool() = default;

  explicit CopyPool(std::span<const std::uint32_t> object_capacity) {
    objects_.resize(object_capacity.size() + 1);
    CopyId next = 0;
    for (std::size_t j = 0; j < object_capacity.size(); ++j) {
      objects_[j] = {0.0, object_capacity[j] ? next : kNoCopy, next};
      for (std::uint32_t k = 0; k < object_capacity[j]; ++k, ++next) {
        copies_.push_back({0.0, kNoOwner, static_cast<VertexId>(j), next, next, 0});
      }
    }
    objects_.back() = {0.0, kNoCopy, next};
  }

  std::size_t size() const noexcept { return copies_.size(); }
  std::size_t num_objects() const noexcept { return objects_.size() - 1; }

  CopyId first(VertexId j) const { return objects_[j].first; }
  CopyId last(VertexId j) const { return objects_[j + 1].first; }  // one past
  std::uint32_t count(VertexId j) const { return last(j) - first(j); }

  /// 0-based index of a copy within its object.
  std::uint32_t local_index(CopyId c) const { return c - first(copies_[c].object); }
  VertexId object_of(CopyId c) const { return copies_[c].object; }

  double price(CopyId c) const { return copies_[c].price; }
  std::vector<double> prices() const {
    std::vector<double> out(copies_.size());
    for (std::size_t c = 0; c < copies_.size(); ++c) out[c] = copies_[c].price;
    return out;
  }

  std::uint32_t owner(CopyId c) const { return copies_[c].owner; }
  /// Bidder recorded with the last set_owner.
  VertexId holder(CopyId c) const { return copies_[c].holder; }
  void set_owner(CopyId c, std::uint32_t tag, VertexId holder = 0) {
    copies_[c].owner = tag;
    copies_[c].holder = holder;
  }

  /// Cheapest copy of j and its price, ties by lowest copy id.
  const Top& top(VertexId j) const { return objects_[j]; }

  void prefetch(VertexId j) const { __builtin_prefetch(&objects_[j]); }
  void prefetch_cheapest(VertexId j) const {
    if (objects_[j].copy != kNoCopy) __builtin_prefetch(&copies_[objects_[j].copy]);
  }

  /// Object must have a copy.
  CopyId cheapest(VertexId j) const { return objects_[j].copy; }

  /// 0 for objects without copies.
  double min_price(VertexId j) const { return objects_[j].price; }

  void raise_price(CopyId c, double delta) {
    copies_[c].price += delta;
    const VertexId j = copies_[c].object;
    Top& t = objects_[j];
    sift_down(c, t.first, objects_[j + 1].first - t.first);
    t.copy = copies_[t.first].heap;
    t.price = copies_[t.copy].price;
  }

 private:
  struct Copy {
    double price;
    std::uint32_t owner;
    VertexId object;
    CopyId heap;         // copy stored at heap slot (this index)
    std::uint32_t pos;   // heap slot of this copy
    VertexId holder;
  };

  bool less(CopyId a, CopyId b) const {
    return copies_[a].price < copies_[b].price ||
           (copies_[a].price == copies_[b].price && a < b);
  }

  void sift_down(CopyId c, std::uint32_t base, std::uint32_t n) {
    std::uint32_t at = copies_[c].pos - base;
    for (;;) {
      std::uint32_t best = at;
      const std::uint32_t l = 2 * at + 1, r = l + 1;
      if (l < n && less(copies_[base + l].heap, copies_[base + best].heap)) best = l;
      if (r < n && less(copies_[base + r].heap, copies_[base + best].heap)) best = r;
      if (best == at) break;
      std::swap(copies_[base + at].heap, copies_[base + best].heap);
      copies_[copies_[base + at].heap].pos = base + at;
      copies_[copies_[base + best].heap].pos = base + best;
      at = best;
    }
  }

  HugeVector<Copy> copies_;
  HugeVector<Top> objects_{Top{}};  // one sentinel past the last object
};

}  // namespace bbm
