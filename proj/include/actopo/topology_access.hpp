// actopo: the uniform topology-access surface workloads are written against.
//
// A workload sees two things: the static simplex identification data that
// every structure shares (vertex tuples of edges/triangles/tets, simplex
// counts — all fixed at initialization), and relation(s, kind), whose
// implementation is what distinguishes the structures.  RelationRow keeps
// the backing table alive via shared_ptr, so rows remain valid across
// evictions.
#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <span>

#include "actopo/block_index.hpp"
#include "actopo/ids.hpp"
#include "actopo/mesh.hpp"
#include "actopo/relations.hpp"

namespace actopo {

struct RelationRow {
  std::shared_ptr<const RelationTable> hold;  // null when the owner is immortal
  std::span<const Id> ids;

  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
  Id operator[](std::size_t i) const { return ids[i]; }
  auto begin() const { return ids.begin(); }
  auto end() const { return ids.end(); }
};

// Static identification data plus request counting, shared by all accesses.
class AccessBase {
 public:
  AccessBase(const Mesh& mesh, const BlockIndex& index) : mesh_(&mesh), index_(&index) {}

  const Mesh& mesh() const { return *mesh_; }
  const BlockIndex& index() const { return *index_; }

  Id n_simplices(int dim) const {
    switch (dim) {
      case 0:
        return mesh_->n_vertices();
      case 1:
        return index_->n_edges();
      case 2:
        return index_->n_triangles();
      default:
        return mesh_->n_tets();
    }
  }

  std::array<VertexId, 2> edge_vertices(EdgeId e) const {
    return index_->edges[static_cast<std::size_t>(e)];
  }
  std::array<VertexId, 3> triangle_vertices(TriangleId f) const {
    return index_->triangles[static_cast<std::size_t>(f)];
  }
  std::array<VertexId, 4> tet_vertices(TetId t) const {
    auto q = mesh_->tets[static_cast<std::size_t>(t)];
    std::sort(q.begin(), q.end());
    return q;
  }

  std::int64_t requests() const { return requests_.load(std::memory_order_relaxed); }

 protected:
  void count_request() { requests_.fetch_add(1, std::memory_order_relaxed); }

  const Mesh* mesh_;
  const BlockIndex* index_;
  std::atomic<std::int64_t> requests_{0};
};

}  // namespace actopo
