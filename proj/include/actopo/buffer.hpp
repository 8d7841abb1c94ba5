// actopo: bounded FIFO store of computed relation tables.
//
// Capacity counts distinct resident blocks, not (block, kind) entries.  When
// inserting a table for a new block would exceed capacity, the oldest
// ceil(capacity/2) resident blocks are evicted first — all their relation
// entries at once, in the order the blocks were first inserted.  The block
// the consumer is currently working on is exempt from eviction; at capacity
// 1 the exemption is deliberately void (there would be no legal victim).
//
// One writer role (the producer side) and any number of readers may operate
// concurrently; a single shared mutex makes the contains/insert/get triple
// linearizable.  Tables are handed out as shared_ptr, so a reader's row
// stays valid even if its block is evicted mid-use.
#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "actopo/ids.hpp"
#include "actopo/metrics.hpp"
#include "actopo/relations.hpp"

namespace actopo {

class Buffer {
 public:
  explicit Buffer(Id capacity, MemoryMeter* meter = nullptr, bool exempt_working_block = true)
      : capacity_(capacity), exempt_working_(exempt_working_block), meter_(meter) {
    if (capacity_ < 1) throw std::invalid_argument("buffer capacity must be at least 1 block");
  }

  Id capacity() const { return capacity_; }

  // The block the consumer is currently reading; exempt from eviction.
  void set_working_block(BlockId b) { working_.store(b, std::memory_order_relaxed); }

  bool contains(BlockId b, RelationKind kind) const {
    std::shared_lock lock(mu_);
    const auto it = entries_.find(b);
    return it != entries_.end() &&
           it->second.kinds[static_cast<std::size_t>(kind)] != nullptr;
  }

  std::shared_ptr<const RelationTable> try_get(BlockId b, RelationKind kind) const {
    std::shared_lock lock(mu_);
    const auto it = entries_.find(b);
    if (it == entries_.end()) return nullptr;
    return it->second.kinds[static_cast<std::size_t>(kind)];
  }

  std::shared_ptr<const RelationTable> get(BlockId b, RelationKind kind) const {
    auto table = try_get(b, kind);
    if (!table)
      throw std::logic_error("buffer contract violation: (" + std::to_string(b) + ", " +
                             std::string(kind_name(kind)) + ") is not resident");
    return table;
  }

  // Idempotent: re-inserting a resident key changes nothing.  Inserting a
  // kind for an already-resident block never evicts.
  void insert(BlockId b, RelationKind kind, std::shared_ptr<const RelationTable> table) {
    std::unique_lock lock(mu_);
    auto it = entries_.find(b);
    if (it != entries_.end()) {
      auto& slot = it->second.kinds[static_cast<std::size_t>(kind)];
      if (slot) return;
      slot = std::move(table);
      if (meter_) meter_->add(slot->bytes());
      return;
    }

    if (static_cast<Id>(fifo_.size()) == capacity_) evict_oldest_half();

    Entry entry;
    entry.kinds[static_cast<std::size_t>(kind)] = std::move(table);
    if (meter_) meter_->add(entry.kinds[static_cast<std::size_t>(kind)]->bytes());
    entries_.emplace(b, std::move(entry));
    fifo_.push_back(b);
    peak_resident_ = std::max(peak_resident_, static_cast<Id>(fifo_.size()));
  }

  Id resident_blocks() const {
    std::shared_lock lock(mu_);
    return static_cast<Id>(fifo_.size());
  }

  Id peak_resident_blocks() const {
    std::shared_lock lock(mu_);
    return peak_resident_;
  }

  std::int64_t evicted_blocks() const { return evicted_blocks_.load(std::memory_order_relaxed); }
  std::int64_t eviction_batches() const {
    return eviction_batches_.load(std::memory_order_relaxed);
  }

  // Resident blocks oldest-first (test introspection).
  std::vector<BlockId> resident_fifo() const {
    std::shared_lock lock(mu_);
    return {fifo_.begin(), fifo_.end()};
  }

  void clear() {
    std::unique_lock lock(mu_);
    if (meter_)
      for (const auto& [b, entry] : entries_)
        for (const auto& table : entry.kinds)
          if (table) meter_->sub(table->bytes());
    entries_.clear();
    fifo_.clear();
  }

 private:
  struct Entry {
    std::array<std::shared_ptr<const RelationTable>, kRelationKindCount> kinds;
  };

  void evict_oldest_half() {
    const Id batch = (capacity_ + 1) / 2;
    const BlockId working =
        (exempt_working_ && capacity_ > 1) ? working_.load(std::memory_order_relaxed)
                                           : kInvalidId;
    std::vector<BlockId> victims;
    victims.reserve(static_cast<std::size_t>(batch));
    for (const BlockId b : fifo_) {
      if (static_cast<Id>(victims.size()) == batch) break;
      if (b != working) victims.push_back(b);
    }
    for (const BlockId b : victims) {
      const auto it = entries_.find(b);
      if (meter_)
        for (const auto& table : it->second.kinds)
          if (table) meter_->sub(table->bytes());
      entries_.erase(it);
    }
    std::deque<BlockId> keep;
    for (const BlockId b : fifo_)
      if (entries_.count(b)) keep.push_back(b);
    fifo_.swap(keep);
    evicted_blocks_.fetch_add(static_cast<std::int64_t>(victims.size()),
                              std::memory_order_relaxed);
    eviction_batches_.fetch_add(1, std::memory_order_relaxed);
  }

  const Id capacity_;
  const bool exempt_working_;
  MemoryMeter* meter_;
  mutable std::shared_mutex mu_;
  std::unordered_map<BlockId, Entry> entries_;
  std::deque<BlockId> fifo_;  // distinct resident blocks, oldest first
  Id peak_resident_ = 0;
  std::atomic<BlockId> working_{kInvalidId};
  std::atomic<std::int64_t> evicted_blocks_{0};
  std::atomic<std::int64_t> eviction_batches_{0};
};

}  // namespace actopo
