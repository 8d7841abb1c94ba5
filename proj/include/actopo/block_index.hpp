// actopo: the static, initialization-time side of the structure.
//
// From the tetrahedra alone we derive the canonical global edge list E and
// triangle list F, grouped block by block and sorted lexicographically
// within each block, plus the per-block internal/external tetrahedra and the
// interval arrays s_edge/s_tri that delimit each block's id range.  A
// simplex is internal to the block of its lowest vertex id; because block
// labels are non-decreasing in vertex id, that is also its minimum block
// label.  Everything here is immutable after construction and safe for
// unsynchronized concurrent reads.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "actopo/ids.hpp"
#include "actopo/mesh.hpp"
#include "actopo/parallel.hpp"
#include "actopo/partition.hpp"

namespace actopo {

struct BlockIndex {
  BlockId n_blocks = 0;
  std::vector<std::array<VertexId, 2>> edges;      // each (u < v)
  std::vector<std::array<VertexId, 3>> triangles;  // each (u < v < w)
  std::vector<std::vector<TetId>> internal_tets;   // ascending per block
  std::vector<std::vector<TetId>> external_tets;   // ascending per block
  std::vector<Id> s_edge;        // exclusive upper bound per block
  std::vector<Id> s_tri;         // exclusive upper bound per block
  std::vector<Id> vertex_begin;  // size n_blocks + 1
  std::vector<BlockId> vertex_block;               // copy of the labels
  std::vector<std::vector<BlockId>> neighbors;     // block adjacency, sorted

  Id n_vertices() const { return static_cast<Id>(vertex_block.size()); }
  Id n_edges() const { return static_cast<Id>(edges.size()); }
  Id n_triangles() const { return static_cast<Id>(triangles.size()); }

  std::pair<Id, Id> vertex_range(BlockId b) const {
    return {vertex_begin[static_cast<std::size_t>(b)],
            vertex_begin[static_cast<std::size_t>(b) + 1]};
  }
  std::pair<Id, Id> edge_range(BlockId b) const {
    return {b == 0 ? 0 : s_edge[static_cast<std::size_t>(b) - 1],
            s_edge[static_cast<std::size_t>(b)]};
  }
  std::pair<Id, Id> triangle_range(BlockId b) const {
    return {b == 0 ? 0 : s_tri[static_cast<std::size_t>(b) - 1],
            s_tri[static_cast<std::size_t>(b)]};
  }

  BlockId block_of_vertex(VertexId v) const {
    return vertex_block[static_cast<std::size_t>(v)];
  }
  BlockId block_of_edge(EdgeId e) const {
    return vertex_block[static_cast<std::size_t>(edges[static_cast<std::size_t>(e)][0])];
  }
  BlockId block_of_triangle(TriangleId f) const {
    return vertex_block[static_cast<std::size_t>(triangles[static_cast<std::size_t>(f)][0])];
  }

  // Global id of edge {u,v}; kInvalidId when absent.  Ids are grouped by the
  // lowest endpoint's block and sorted within it, so a binary search of that
  // slice resolves the id.
  EdgeId find_edge(VertexId u, VertexId v) const {
    if (u > v) std::swap(u, v);
    const auto [lo, hi] = edge_range(block_of_vertex(u));
    const std::array<VertexId, 2> key{u, v};
    const auto first = edges.begin() + lo;
    const auto last = edges.begin() + hi;
    const auto it = std::lower_bound(first, last, key);
    if (it == last || *it != key) return kInvalidId;
    return static_cast<EdgeId>(it - edges.begin());
  }

  TriangleId find_triangle(VertexId u, VertexId v, VertexId w) const {
    std::array<VertexId, 3> key{u, v, w};
    std::sort(key.begin(), key.end());
    const auto [lo, hi] = triangle_range(block_of_vertex(key[0]));
    const auto first = triangles.begin() + lo;
    const auto last = triangles.begin() + hi;
    const auto it = std::lower_bound(first, last, key);
    if (it == last || *it != key) return kInvalidId;
    return static_cast<TriangleId>(it - triangles.begin());
  }

  std::int64_t bytes() const {
    std::int64_t total = 0;
    total += static_cast<std::int64_t>(edges.size()) * sizeof(edges[0]);
    total += static_cast<std::int64_t>(triangles.size()) * sizeof(triangles[0]);
    for (const auto& v : internal_tets) total += static_cast<std::int64_t>(v.size()) * sizeof(TetId);
    for (const auto& v : external_tets) total += static_cast<std::int64_t>(v.size()) * sizeof(TetId);
    for (const auto& v : neighbors) total += static_cast<std::int64_t>(v.size()) * sizeof(BlockId);
    total += static_cast<std::int64_t>(s_edge.size() + s_tri.size() + vertex_begin.size()) * sizeof(Id);
    total += static_cast<std::int64_t>(vertex_block.size()) * sizeof(BlockId);
    return total;
  }
};

// Builds E, F, T_ex, S_E, S_F.  Tets are classified in one sequential pass;
// the per-block edge/triangle enumeration then runs one block per task and
// the results are stitched together by a deterministic prefix pass, so the
// output is independent of both thread count and input tet order.
inline BlockIndex build_block_index(const Mesh& mesh, unsigned threads = 0) {
  if (!mesh.has_blocks()) throw MeshError("block index needs a partitioned mesh");

  BlockIndex index;
  index.n_blocks = mesh.n_blocks;
  index.vertex_block = mesh.block_of;
  const std::size_t nb = static_cast<std::size_t>(mesh.n_blocks);
  index.internal_tets.resize(nb);
  index.external_tets.resize(nb);

  for (TetId t = 0; t < mesh.n_tets(); ++t) {
    const auto& q = mesh.tets[static_cast<std::size_t>(t)];
    const VertexId lowest = std::min(std::min(q[0], q[1]), std::min(q[2], q[3]));
    const BlockId home = mesh.block_of[static_cast<std::size_t>(lowest)];
    index.internal_tets[static_cast<std::size_t>(home)].push_back(t);
    BlockId touched[4];
    int n = 0;
    for (VertexId v : q) {
      const BlockId b = mesh.block_of[static_cast<std::size_t>(v)];
      bool dup = (b == home);
      for (int i = 0; i < n; ++i) dup |= (touched[i] == b);
      if (!dup) touched[n++] = b;
    }
    for (int i = 0; i < n; ++i)
      index.external_tets[static_cast<std::size_t>(touched[i])].push_back(t);
  }

  // Vertex ranges follow directly from the monotone labels.
  index.vertex_begin.assign(nb + 1, 0);
  for (BlockId b : mesh.block_of) ++index.vertex_begin[static_cast<std::size_t>(b) + 1];
  for (std::size_t b = 0; b < nb; ++b) index.vertex_begin[b + 1] += index.vertex_begin[b];

  // Enumerate each block's internal edges and triangles from the tets that
  // intersect it; a pair/triple is internal iff its lowest vertex is.
  std::vector<std::vector<std::array<VertexId, 2>>> block_edges(nb);
  std::vector<std::vector<std::array<VertexId, 3>>> block_tris(nb);
  parallel_for(
      mesh.n_blocks,
      [&](BlockId b) {
        auto& es = block_edges[static_cast<std::size_t>(b)];
        auto& fs = block_tris[static_cast<std::size_t>(b)];
        const auto scan = [&](const std::vector<TetId>& tets) {
          for (TetId t : tets) {
            std::array<VertexId, 4> q = mesh.tets[static_cast<std::size_t>(t)];
            std::sort(q.begin(), q.end());
            for (int i = 0; i < 4; ++i) {
              if (mesh.block_of[static_cast<std::size_t>(q[static_cast<std::size_t>(i)])] != b)
                continue;  // sub-simplices led by q[i] are internal elsewhere
              for (int j = i + 1; j < 4; ++j) {
                es.push_back({q[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(j)]});
                for (int k = j + 1; k < 4; ++k)
                  fs.push_back({q[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(j)],
                                q[static_cast<std::size_t>(k)]});
              }
            }
          }
        };
        scan(index.internal_tets[static_cast<std::size_t>(b)]);
        scan(index.external_tets[static_cast<std::size_t>(b)]);
        std::sort(es.begin(), es.end());
        es.erase(std::unique(es.begin(), es.end()), es.end());
        std::sort(fs.begin(), fs.end());
        fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
      },
      threads);

  index.s_edge.resize(nb);
  index.s_tri.resize(nb);
  Id edge_total = 0, tri_total = 0;
  for (std::size_t b = 0; b < nb; ++b) {
    edge_total += static_cast<Id>(block_edges[b].size());
    tri_total += static_cast<Id>(block_tris[b].size());
    index.s_edge[b] = edge_total;
    index.s_tri[b] = tri_total;
  }
  index.edges.reserve(static_cast<std::size_t>(edge_total));
  index.triangles.reserve(static_cast<std::size_t>(tri_total));
  for (std::size_t b = 0; b < nb; ++b) {
    index.edges.insert(index.edges.end(), block_edges[b].begin(), block_edges[b].end());
    index.triangles.insert(index.triangles.end(), block_tris[b].begin(), block_tris[b].end());
  }

  const BlockGraph graph = build_block_graph(mesh);
  index.neighbors = graph.neighbors;
  return index;
}

// Minimum block label over the simplex's vertices; equals the label of its
// lowest vertex id for every valid partition.
inline BlockId block_of_simplex(const Mesh& mesh, const BlockIndex& index, SimplexRef s) {
  switch (s.dim) {
    case 0:
      return index.block_of_vertex(s.id);
    case 1:
      return index.block_of_edge(s.id);
    case 2:
      return index.block_of_triangle(s.id);
    default: {
      const auto& q = mesh.tets[static_cast<std::size_t>(s.id)];
      BlockId best = index.block_of_vertex(q[0]);
      for (int i = 1; i < 4; ++i)
        best = std::min(best, index.block_of_vertex(q[static_cast<std::size_t>(i)]));
      return best;
    }
  }
}

inline bool is_internal(const Mesh& mesh, const BlockIndex& index, SimplexRef s, BlockId b) {
  return block_of_simplex(mesh, index, s) == b;
}

// The op-level view: global ids of the block's internal simplices of one
// dimension.  Vertices, edges and triangles are contiguous ranges; internal
// tets are an explicit ascending list.
inline std::vector<Id> simplices_in_block(const BlockIndex& index, BlockId b, int dim) {
  if (dim == 3) return index.internal_tets[static_cast<std::size_t>(b)];
  const auto [lo, hi] = dim == 0   ? index.vertex_range(b)
                        : dim == 1 ? index.edge_range(b)
                                   : index.triangle_range(b);
  std::vector<Id> ids(static_cast<std::size_t>(hi - lo));
  for (Id i = lo; i < hi; ++i) ids[static_cast<std::size_t>(i - lo)] = i;
  return ids;
}

}  // namespace actopo
