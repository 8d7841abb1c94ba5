// actopo: the two reference structures the task-parallel engine is measured
// against.
//
// StaticTopology materializes whole-mesh relation tables up front (the
// precompute-everything baseline); OnDemandTopology keeps the same bounded
// FIFO buffer as the engine but computes every miss synchronously on the
// calling thread (the no-producer baseline).  Both answer queries through
// the same compute_relation kernel, which is what makes them usable as
// oracles for the engine.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "actopo/block_index.hpp"
#include "actopo/buffer.hpp"
#include "actopo/metrics.hpp"
#include "actopo/parallel.hpp"
#include "actopo/relations.hpp"
#include "actopo/topology_access.hpp"

namespace actopo {

class StaticTopology {
 public:
  // Materializes the given kinds (all 16 when kinds is empty) as global
  // per-kind tables indexed by source id.  Per-block computation may run in
  // parallel; the stitched result is deterministic.
  StaticTopology(const Mesh& mesh, const BlockIndex& index, std::vector<RelationKind> kinds,
                 MemoryMeter* meter = nullptr, unsigned threads = 0)
      : mesh_(&mesh), index_(&index) {
    if (kinds.empty())
      for (RelationKind k : all_relation_kinds()) kinds.push_back(k);

    for (const RelationKind kind : kinds) {
      if (rels_[static_cast<std::size_t>(kind)].present) continue;
      std::vector<RelationTable> blocks(static_cast<std::size_t>(index.n_blocks));
      parallel_for(
          index.n_blocks,
          [&](BlockId b) { blocks[static_cast<std::size_t>(b)] = compute_relation(mesh, index, b, kind); },
          threads);

      GlobalRelation& global = rels_[static_cast<std::size_t>(kind)];
      global.present = true;
      const Id n_sources = source_dim(kind) == 3 ? mesh.n_tets()
                           : source_dim(kind) == 0
                               ? mesh.n_vertices()
                               : (source_dim(kind) == 1 ? index.n_edges() : index.n_triangles());
      std::vector<Id> sizes(static_cast<std::size_t>(n_sources), 0);
      for (BlockId b = 0; b < index.n_blocks; ++b) {
        const RelationTable& table = blocks[static_cast<std::size_t>(b)];
        for (Id i = 0; i < table.n_rows(); ++i)
          sizes[static_cast<std::size_t>(global_source(index, b, kind, i))] =
              static_cast<Id>(table.row(i).size());
      }
      global.offsets.resize(static_cast<std::size_t>(n_sources) + 1);
      global.offsets[0] = 0;
      for (Id s = 0; s < n_sources; ++s)
        global.offsets[static_cast<std::size_t>(s) + 1] =
            global.offsets[static_cast<std::size_t>(s)] + sizes[static_cast<std::size_t>(s)];
      global.targets.resize(static_cast<std::size_t>(global.offsets.back()));
      for (BlockId b = 0; b < index.n_blocks; ++b) {
        const RelationTable& table = blocks[static_cast<std::size_t>(b)];
        for (Id i = 0; i < table.n_rows(); ++i) {
          const auto row = table.row(i);
          const Id at = global.offsets[static_cast<std::size_t>(global_source(index, b, kind, i))];
          std::copy(row.begin(), row.end(), global.targets.begin() + at);
        }
      }
      if (meter) meter->add(global.bytes());
    }
  }

  std::span<const Id> row(SimplexRef s, RelationKind kind) const {
    const GlobalRelation& global = rels_[static_cast<std::size_t>(kind)];
    if (!global.present)
      throw std::logic_error(std::string("relation ") + kind_name(kind) +
                             " was not materialized");
    const Id lo = global.offsets[static_cast<std::size_t>(s.id)];
    const Id hi = global.offsets[static_cast<std::size_t>(s.id) + 1];
    return {global.targets.data() + lo, static_cast<std::size_t>(hi - lo)};
  }

  std::int64_t bytes() const {
    std::int64_t total = 0;
    for (const auto& global : rels_)
      if (global.present) total += global.bytes();
    return total;
  }

 private:
  struct GlobalRelation {
    bool present = false;
    std::vector<Id> offsets;
    std::vector<Id> targets;

    std::int64_t bytes() const {
      return static_cast<std::int64_t>(offsets.size() + targets.size()) * sizeof(Id);
    }
  };

  static Id global_source(const BlockIndex& index, BlockId b, RelationKind kind, Id row) {
    if (source_dim(kind) == 3) return index.internal_tets[static_cast<std::size_t>(b)][static_cast<std::size_t>(row)];
    switch (source_dim(kind)) {
      case 0:
        return index.vertex_range(b).first + row;
      case 1:
        return index.edge_range(b).first + row;
      default:
        return index.triangle_range(b).first + row;
    }
  }

  const Mesh* mesh_;
  const BlockIndex* index_;
  std::array<GlobalRelation, kRelationKindCount> rels_;
};

class StaticAccess : public AccessBase {
 public:
  StaticAccess(const Mesh& mesh, const BlockIndex& index, const StaticTopology& topo)
      : AccessBase(mesh, index), topo_(&topo) {}

  RelationRow relation(SimplexRef s, RelationKind kind) {
    count_request();
    return {nullptr, topo_->row(s, kind)};
  }

 private:
  const StaticTopology* topo_;
};

// Fig-2(b)-style structure: the same bounded buffer, no producer threads.
// Strictly single-threaded; a parallel workload gives each thread its own
// instance.
class OnDemandTopology {
 public:
  OnDemandTopology(const Mesh& mesh, const BlockIndex& index, Id capacity,
                   MemoryMeter* meter = nullptr, bool exempt_working_block = true)
      : mesh_(&mesh), index_(&index), buffer_(capacity, meter, exempt_working_block) {}

  RelationRow request(SimplexRef s, RelationKind kind) {
    const BlockId b = block_of_simplex(*mesh_, *index_, s);
    buffer_.set_working_block(b);
    auto table = buffer_.try_get(b, kind);
    if (!table) {
      table = std::make_shared<const RelationTable>(compute_relation(*mesh_, *index_, b, kind));
      ++computes_;
      buffer_.insert(b, kind, table);
    } else {
      ++hits_;
    }
    const Id row = relation_row_index(*index_, b, s);
    return {table, table->row(row)};
  }

  Buffer& buffer() { return buffer_; }
  const Buffer& buffer() const { return buffer_; }
  std::int64_t computes() const { return computes_; }
  std::int64_t hits() const { return hits_; }

 private:
  const Mesh* mesh_;
  const BlockIndex* index_;
  Buffer buffer_;
  std::int64_t computes_ = 0;
  std::int64_t hits_ = 0;
};

class OnDemandAccess : public AccessBase {
 public:
  OnDemandAccess(const Mesh& mesh, const BlockIndex& index, OnDemandTopology& topo)
      : AccessBase(mesh, index), topo_(&topo) {}

  RelationRow relation(SimplexRef s, RelationKind kind) {
    count_request();
    return topo_->request(s, kind);
  }

 private:
  OnDemandTopology* topo_;
};

}  // namespace actopo
