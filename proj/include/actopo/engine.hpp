// actopo: the task-parallel engine.
//
// One consumer group = the consumer thread running the workload, a leader
// producer serving its misses, and workers_per_consumer worker producers
// prefetching ahead of it.  Workers claim (block, kind) pairs from a shared
// cursor under a mutex and compute them into the group's buffer; the moving
// direction (linear successor vs. breadth-first over block neighbors) and
// the relation scope (only the last-requested kind vs. all declared kinds)
// decide what the cursor hands out.  A consumer miss redirects the cursor to
// the missed block, so prefetching continues in its proximity.
//
// Claim discipline: a pair is claimed by at most one producer at a time (the
// in-flight set), claims skip pairs already resident, and the leader never
// computes a pair a worker is currently computing — it waits for the insert
// instead.  The leader alone guarantees progress; workers are pure
// opportunism.
//
// With several consumers, each group has its own buffer, cursor and
// producers; groups share nothing but the immutable mesh and index.
#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <utility>
#include <vector>

#include "actopo/block_index.hpp"
#include "actopo/buffer.hpp"
#include "actopo/ids.hpp"
#include "actopo/mesh.hpp"
#include "actopo/metrics.hpp"
#include "actopo/relations.hpp"
#include "actopo/topology_access.hpp"

namespace actopo {

enum class Direction { Linear, Spatial };
enum class Scope { Single, All };

inline std::pair<Direction, Scope> parse_mode(const std::string& name) {
  if (name == "linear-single") return {Direction::Linear, Scope::Single};
  if (name == "linear-all") return {Direction::Linear, Scope::All};
  if (name == "spatial-single") return {Direction::Spatial, Scope::Single};
  if (name == "spatial-all") return {Direction::Spatial, Scope::All};
  throw std::invalid_argument("unknown mode '" + name + "'");
}

inline std::string mode_name(Direction d, Scope s) {
  return std::string(d == Direction::Linear ? "linear" : "spatial") +
         (s == Scope::Single ? "-single" : "-all");
}

// Test instrumentation; all hooks optional.  on_claim fires under the cursor
// lock in exact claim order; on_compute fires once per relation computation
// (role 0 = leader, 1 = worker) before the table is inserted.
struct EngineTrace {
  std::function<void(BlockId, RelationKind)> on_claim;
  std::function<void(int role, BlockId, RelationKind)> on_compute;
};

struct EngineConfig {
  Direction direction = Direction::Linear;
  Scope scope = Scope::All;
  std::vector<RelationKind> required_kinds;  // filled from the workload per run
  int consumers = 1;                         // t_c
  int workers_per_consumer = 0;              // t_pc - 1; the leader always exists
  Id buffer_capacity = 0;                    // blocks; 0 = ceil(0.20 * n_blocks)
  bool exempt_working_block = true;
  EngineTrace trace;
};

struct GroupMetrics {
  std::int64_t requests = 0;
  std::int64_t hits = 0;
  std::int64_t misses = 0;
  std::int64_t leader_computes = 0;
  std::int64_t worker_computes = 0;
  std::int64_t consumer_computes = 0;  // always 0 here; used by baselines
  double wait_seconds = 0.0;
};

struct RunMetrics {
  std::vector<GroupMetrics> groups;
  double execute_seconds = 0.0;
  std::int64_t evicted_blocks = 0;
  std::int64_t eviction_batches = 0;
  Id peak_resident_blocks = 0;  // high-water mark over the structure's life
  std::int64_t peak_memory_bytes = 0;

  GroupMetrics totals() const {
    GroupMetrics sum;
    for (const auto& g : groups) {
      sum.requests += g.requests;
      sum.hits += g.hits;
      sum.misses += g.misses;
      sum.leader_computes += g.leader_computes;
      sum.worker_computes += g.worker_computes;
      sum.consumer_computes += g.consumer_computes;
      sum.wait_seconds += g.wait_seconds;
    }
    return sum;
  }
};

namespace detail {

inline std::uint64_t claim_key(BlockId b, RelationKind kind) {
  return (static_cast<std::uint64_t>(std::uint32_t(b)) << 8) | static_cast<std::uint8_t>(kind);
}

}  // namespace detail

class ConsumerGroup {
 public:
  ConsumerGroup(const Mesh& mesh, const BlockIndex& index, const EngineConfig& cfg,
                Buffer& buffer, BlockId start_block)
      : mesh_(mesh), index_(index), cfg_(cfg), buffer_(buffer) {
    redirect_locked(start_block);
  }

  ~ConsumerGroup() {
    if (leader_.joinable()) finish();
  }

  void start() { leader_ = std::thread([this] { leader_loop(); }); }

  // Called by the consumer when its range is done: signals the leader, which
  // shuts the workers down; returns once every producer thread has joined.
  void finish() {
    {
      std::lock_guard lock(mu_);
      consumer_done_ = true;
    }
    cv_.notify_all();
    leader_.join();
  }

  // The consumer's only topology entry point.
  RelationRow request(SimplexRef s, RelationKind kind) {
    const BlockId b = block_of_simplex(mesh_, index_, s);
    buffer_.set_working_block(b);
    ++metrics_.requests;
    if (auto table = buffer_.try_get(b, kind)) {
      ++metrics_.hits;
      return make_row(std::move(table), b, s);
    }
    ++metrics_.misses;
    const StopWatch wait;
    std::shared_ptr<const RelationTable> table;
    {
      std::unique_lock lock(mu_);
      if (worker_error_) std::rethrow_exception(worker_error_);
      has_request_ = true;
      req_block_ = b;
      req_kind_ = kind;
      req_served_ = false;
      req_result_ = nullptr;
      req_error_ = nullptr;
      cv_.notify_all();
      cv_.wait(lock, [&] { return req_served_; });
      if (req_error_) std::rethrow_exception(req_error_);
      table = std::move(req_result_);
    }
    metrics_.wait_seconds += wait.seconds();
    return make_row(std::move(table), b, s);
  }

  GroupMetrics metrics() const {
    GroupMetrics m = metrics_;
    m.worker_computes = worker_computes_.load(std::memory_order_relaxed);
    return m;
  }

 private:
  struct Claim {
    BlockId block;
    RelationKind kind;
  };

  RelationRow make_row(std::shared_ptr<const RelationTable> table, BlockId b, SimplexRef s) {
    const Id row = relation_row_index(index_, b, s);
    auto span = table->row(row);
    return {std::move(table), span};
  }

  // ---- cursor -------------------------------------------------------------

  // Point the prefetch frontier at block b: reset the kind index and, in
  // spatial mode, restart the breadth-first traversal from b.
  void redirect_locked(BlockId b) {
    frontier_ = b;
    rj_ = 0;
    if (cfg_.direction == Direction::Spatial) {
      visited_.assign(static_cast<std::size_t>(index_.n_blocks), 0);
      visited_[static_cast<std::size_t>(b)] = 1;
      bfs_queue_.clear();
      bfs_head_ = 0;
      for (const BlockId nb : index_.neighbors[static_cast<std::size_t>(b)]) {
        visited_[static_cast<std::size_t>(nb)] = 1;
        bfs_queue_.push_back(nb);
      }
    }
    ++epoch_;
  }

  // The moving direction: successor id (wrapping) or next breadth-first
  // block (kInvalidId once the component is exhausted).
  BlockId next_block_locked(BlockId from) {
    if (cfg_.direction == Direction::Linear)
      return (from + 1) % index_.n_blocks;
    if (bfs_head_ >= bfs_queue_.size()) return kInvalidId;
    const BlockId b = bfs_queue_[bfs_head_++];
    for (const BlockId nb : index_.neighbors[static_cast<std::size_t>(b)])
      if (!visited_[static_cast<std::size_t>(nb)]) {
        visited_[static_cast<std::size_t>(nb)] = 1;
        bfs_queue_.push_back(nb);
      }
    return b;
  }

  // Inspect the cursor's current pair and advance it, repeating until a pair
  // that is neither resident nor in flight turns up (claim it) or the claim
  // space is exhausted for now (park the worker).
  std::optional<Claim> try_claim_locked() {
    const std::size_t kinds = cfg_.required_kinds.size();
    const std::size_t limit =
        static_cast<std::size_t>(index_.n_blocks) * (cfg_.scope == Scope::All ? kinds : 1);
    if (cfg_.scope == Scope::Single && !has_last_kind_)
      return std::nullopt;  // nothing requested yet: no kind to prefetch
    for (std::size_t step = 0; step < limit; ++step) {
      if (frontier_ == kInvalidId) return std::nullopt;  // spatial frontier exhausted
      Claim claim{frontier_,
                  cfg_.scope == Scope::All ? cfg_.required_kinds[static_cast<std::size_t>(rj_)]
                                           : last_kind_};
      // Advance for the next claimant: scope=all walks the kind list and
      // moves the block on wrap-around; scope=single moves the block.
      if (cfg_.scope == Scope::All) {
        if (++rj_ == static_cast<int>(kinds)) {
          rj_ = 0;
          frontier_ = next_block_locked(frontier_);
        }
      } else {
        frontier_ = next_block_locked(frontier_);
      }
      const std::uint64_t key = detail::claim_key(claim.block, claim.kind);
      if (in_flight_.count(key) || buffer_.contains(claim.block, claim.kind)) continue;
      in_flight_.insert(key);
      if (cfg_.trace.on_claim) cfg_.trace.on_claim(claim.block, claim.kind);
      return claim;
    }
    return std::nullopt;
  }

  // ---- producer threads ---------------------------------------------------

  void worker_loop() {
    std::unique_lock lock(mu_);
    for (;;) {
      if (shutdown_) return;
      auto claim = try_claim_locked();
      if (!claim) {
        const std::uint64_t seen = epoch_;
        cv_.wait(lock, [&] { return shutdown_ || epoch_ != seen; });
        continue;
      }
      lock.unlock();
      std::exception_ptr error;
      try {
        auto table = std::make_shared<const RelationTable>(
            compute_relation(mesh_, index_, claim->block, claim->kind));
        worker_computes_.fetch_add(1, std::memory_order_relaxed);
        if (cfg_.trace.on_compute) cfg_.trace.on_compute(1, claim->block, claim->kind);
        buffer_.insert(claim->block, claim->kind, std::move(table));
      } catch (...) {
        error = std::current_exception();
      }
      lock.lock();
      in_flight_.erase(detail::claim_key(claim->block, claim->kind));
      ++epoch_;  // residency changed (or an in-flight pair was released)
      if (error && !worker_error_) worker_error_ = error;
      cv_.notify_all();
      if (error) return;
    }
  }

  void leader_loop() {
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(cfg_.workers_per_consumer));
    for (int i = 0; i < cfg_.workers_per_consumer; ++i)
      workers.emplace_back([this] { worker_loop(); });

    std::unique_lock lock(mu_);
    for (;;) {
      cv_.wait(lock, [&] { return has_request_ || consumer_done_; });
      if (has_request_) {
        const BlockId b = req_block_;
        const RelationKind kind = req_kind_;
        last_kind_ = kind;  // the scope=single register, written on every miss
        has_last_kind_ = true;
        std::shared_ptr<const RelationTable> table;
        std::exception_ptr error;
        for (;;) {
          table = buffer_.try_get(b, kind);
          if (table) break;
          if (worker_error_) {
            error = worker_error_;
            break;
          }
          const std::uint64_t key = detail::claim_key(b, kind);
          if (in_flight_.count(key)) {
            // A worker claimed this exact pair; wait for its insert rather
            // than computing it twice concurrently.
            cv_.wait(lock);
            continue;
          }
          in_flight_.insert(key);
          lock.unlock();
          try {
            auto computed = std::make_shared<const RelationTable>(
                compute_relation(mesh_, index_, b, kind));
            ++metrics_.leader_computes;
            if (cfg_.trace.on_compute) cfg_.trace.on_compute(0, b, kind);
            buffer_.insert(b, kind, computed);
            table = std::move(computed);
          } catch (...) {
            error = std::current_exception();
          }
          lock.lock();
          in_flight_.erase(key);
          ++epoch_;
          cv_.notify_all();
          if (table || error) break;
        }
        redirect_locked(b);
        req_result_ = std::move(table);
        req_error_ = error;
        has_request_ = false;
        req_served_ = true;
        cv_.notify_all();
        continue;
      }
      if (consumer_done_) break;
    }
    shutdown_ = true;
    cv_.notify_all();
    lock.unlock();
    for (auto& w : workers) w.join();
  }

  const Mesh& mesh_;
  const BlockIndex& index_;
  const EngineConfig& cfg_;
  Buffer& buffer_;
  std::thread leader_;

  std::mutex mu_;
  std::condition_variable cv_;
  // cursor state (all under mu_)
  BlockId frontier_ = 0;
  int rj_ = 0;
  RelationKind last_kind_ = RelationKind::EV;  // meaningless until has_last_kind_
  bool has_last_kind_ = false;
  std::vector<std::uint8_t> visited_;
  std::vector<BlockId> bfs_queue_;
  std::size_t bfs_head_ = 0;
  std::unordered_set<std::uint64_t> in_flight_;
  std::uint64_t epoch_ = 0;
  // request slot (under mu_)
  bool has_request_ = false;
  bool req_served_ = false;
  BlockId req_block_ = 0;
  RelationKind req_kind_ = RelationKind::EV;
  std::shared_ptr<const RelationTable> req_result_;
  std::exception_ptr req_error_;
  std::exception_ptr worker_error_;
  bool consumer_done_ = false;
  bool shutdown_ = false;

  GroupMetrics metrics_;  // consumer- and leader-written fields
  std::atomic<std::int64_t> worker_computes_{0};
};

class EngineAccess : public AccessBase {
 public:
  EngineAccess(const Mesh& mesh, const BlockIndex& index, ConsumerGroup& group)
      : AccessBase(mesh, index), group_(&group) {}

  RelationRow relation(SimplexRef s, RelationKind kind) {
    count_request();
    return group_->request(s, kind);
  }

 private:
  ConsumerGroup* group_;
};

// The block-decomposed task-parallel structure: immutable mesh + index, one
// persistent buffer per consumer (so reruns stay warm), and a thread
// ensemble spun up per run_workload call.
class TaskTopology {
 public:
  TaskTopology(const Mesh& mesh, const BlockIndex& index, EngineConfig cfg)
      : mesh_(mesh), index_(index), cfg_(std::move(cfg)) {
    if (cfg_.consumers < 1) throw std::invalid_argument("need at least one consumer");
    if (cfg_.workers_per_consumer < 0)
      throw std::invalid_argument("workers_per_consumer cannot be negative");
    if (cfg_.buffer_capacity == 0)
      cfg_.buffer_capacity = (index_.n_blocks + 4) / 5;  // ceil(0.20 * n_blocks)
    cfg_.buffer_capacity = std::max<Id>(1, cfg_.buffer_capacity);
    meter_.add(index_.bytes());
    for (int i = 0; i < cfg_.consumers; ++i)
      buffers_.push_back(std::make_unique<Buffer>(cfg_.buffer_capacity, &meter_,
                                                  cfg_.exempt_working_block));
  }

  const EngineConfig& config() const { return cfg_; }
  MemoryMeter& meter() { return meter_; }
  Buffer& buffer(int consumer) { return *buffers_[static_cast<std::size_t>(consumer)]; }

  // Runs the workload's iteration space split into contiguous ranges, one
  // consumer group per range.  The merged output is identical for every
  // mode, worker count and capacity; only the metrics differ.
  template <class W>
  typename W::Output run(const W& workload, RunMetrics* out_metrics = nullptr) {
    EngineConfig cfg = cfg_;
    cfg.required_kinds = workload.required_kinds();
    if (cfg.required_kinds.empty())
      throw std::invalid_argument("workload declares no relation kinds");

    const Id domain = workload.domain_size(mesh_, index_);
    const int tc = cfg.consumers;
    const std::int64_t evicted_before = total_evicted();
    const std::int64_t batches_before = total_batches();

    std::vector<typename W::Output> outputs(static_cast<std::size_t>(tc));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(tc));
    std::vector<std::unique_ptr<ConsumerGroup>> groups(static_cast<std::size_t>(tc));
    std::vector<std::thread> consumers;
    consumers.reserve(static_cast<std::size_t>(tc));

    const StopWatch clock;
    for (int i = 0; i < tc; ++i) {
      const Id lo = static_cast<Id>(std::int64_t(domain) * i / tc);
      const Id hi = static_cast<Id>(std::int64_t(domain) * (i + 1) / tc);
      BlockId start = 0;
      if (lo < hi) start = block_of_simplex(mesh_, index_, workload.domain_anchor(mesh_, index_, lo));
      groups[static_cast<std::size_t>(i)] = std::make_unique<ConsumerGroup>(
          mesh_, index_, cfg, *buffers_[static_cast<std::size_t>(i)], start);
      consumers.emplace_back([&, i, lo, hi] {
        auto& group = *groups[static_cast<std::size_t>(i)];
        group.start();
        try {
          EngineAccess access(mesh_, index_, group);
          workload.run_range(access, lo, hi, outputs[static_cast<std::size_t>(i)]);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
        group.finish();
      });
    }
    for (auto& t : consumers) t.join();
    const double execute_seconds = clock.seconds();

    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);

    if (out_metrics) {
      out_metrics->groups.clear();
      for (const auto& group : groups) out_metrics->groups.push_back(group->metrics());
      out_metrics->execute_seconds = execute_seconds;
      out_metrics->evicted_blocks = total_evicted() - evicted_before;
      out_metrics->eviction_batches = total_batches() - batches_before;
      Id peak = 0;
      for (const auto& buffer : buffers_) peak = std::max(peak, buffer->peak_resident_blocks());
      out_metrics->peak_resident_blocks = peak;
      out_metrics->peak_memory_bytes = meter_.peak_bytes();
    }

    typename W::Output result = std::move(outputs[0]);
    for (int i = 1; i < tc; ++i) result.merge(std::move(outputs[static_cast<std::size_t>(i)]));
    return result;
  }

 private:
  std::int64_t total_evicted() const {
    std::int64_t n = 0;
    for (const auto& buffer : buffers_) n += buffer->evicted_blocks();
    return n;
  }
  std::int64_t total_batches() const {
    std::int64_t n = 0;
    for (const auto& buffer : buffers_) n += buffer->eviction_batches();
    return n;
  }

  const Mesh& mesh_;
  const BlockIndex& index_;
  EngineConfig cfg_;
  MemoryMeter meter_;
  std::vector<std::unique_ptr<Buffer>> buffers_;
};

}  // namespace actopo
