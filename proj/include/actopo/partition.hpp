// actopo: vertex -> block labelings and the block adjacency graph.
//
// Every simplex lives in the block of its lowest vertex id, and the block
// encoding requires that to coincide with the minimum block label over the
// simplex.  Both partitioners therefore end in a labeling that is monotone
// non-decreasing in vertex id: partition_by_index produces one directly,
// partition_grid produces spatial bins and relies on apply_partition to
// renumber the vertices.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "actopo/mesh.hpp"

namespace actopo {

struct BlockGraph {
  BlockId n_blocks = 0;
  std::vector<std::vector<BlockId>> neighbors;  // per block, sorted, no self
};

// Contiguous id-range chunking: vertex v -> floor(v * n / |V|).  Labels are
// monotone by construction and every block is non-empty for n <= |V|.
inline std::vector<BlockId> partition_by_index(const Mesh& mesh, BlockId n_blocks) {
  const Id nv = mesh.n_vertices();
  if (n_blocks < 1 || n_blocks > nv)
    throw MeshError("block count " + std::to_string(n_blocks) + " out of range [1, " +
                    std::to_string(nv) + "]");
  std::vector<BlockId> labels(static_cast<std::size_t>(nv));
  for (Id v = 0; v < nv; ++v)
    labels[static_cast<std::size_t>(v)] =
        static_cast<BlockId>(std::int64_t(v) * n_blocks / nv);
  return labels;
}

// Axis-aligned spatial bins, at most n_blocks of them.  The returned labels
// are dense (renumbered in vertex-index order of first occurrence) but not
// monotone; pass them through apply_partition before building a block index.
inline std::vector<BlockId> partition_grid(const Mesh& mesh, BlockId n_blocks) {
  const Id nv = mesh.n_vertices();
  if (n_blocks < 1 || n_blocks > nv)
    throw MeshError("block count " + std::to_string(n_blocks) + " out of range [1, " +
                    std::to_string(nv) + "]");

  std::array<double, 3> lo = mesh.coords[0];
  std::array<double, 3> hi = mesh.coords[0];
  for (const auto& c : mesh.coords)
    for (int a = 0; a < 3; ++a) {
      lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], c[static_cast<std::size_t>(a)]);
      hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], c[static_cast<std::size_t>(a)]);
    }
  std::array<double, 3> extent;
  for (int a = 0; a < 3; ++a)
    extent[static_cast<std::size_t>(a)] =
        hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)];

  // Factor n_blocks into per-axis bin counts whose bin edge lengths are as
  // close to uniform as possible; degenerate axes get a single bin.
  std::array<Id, 3> grid = {1, 1, n_blocks};
  double best = std::numeric_limits<double>::infinity();
  for (Id gx = 1; gx <= n_blocks; ++gx) {
    if (n_blocks % gx) continue;
    for (Id gy = 1; gy * gx <= n_blocks; ++gy) {
      if ((n_blocks / gx) % gy) continue;
      const Id gz = n_blocks / (gx * gy);
      const std::array<Id, 3> g = {gx, gy, gz};
      double longest = 0.0, shortest = std::numeric_limits<double>::infinity();
      bool feasible = true;
      for (int a = 0; a < 3; ++a) {
        if (extent[static_cast<std::size_t>(a)] <= 0.0) {
          if (g[static_cast<std::size_t>(a)] > 1) feasible = false;
          continue;
        }
        const double len =
            extent[static_cast<std::size_t>(a)] / double(g[static_cast<std::size_t>(a)]);
        longest = std::max(longest, len);
        shortest = std::min(shortest, len);
      }
      if (!feasible) continue;
      const double score = shortest > 0.0 ? longest / shortest : longest;
      if (score < best) {
        best = score;
        grid = g;
      }
    }
  }

  const auto bin = [&](double x, int a) {
    const Id g = grid[static_cast<std::size_t>(a)];
    if (g == 1 || extent[static_cast<std::size_t>(a)] <= 0.0) return Id(0);
    const double t = (x - lo[static_cast<std::size_t>(a)]) / extent[static_cast<std::size_t>(a)];
    return std::min<Id>(g - 1, static_cast<Id>(t * double(g)));
  };

  std::vector<BlockId> raw(static_cast<std::size_t>(nv));
  for (Id v = 0; v < nv; ++v) {
    const auto& c = mesh.coords[static_cast<std::size_t>(v)];
    raw[static_cast<std::size_t>(v)] =
        bin(c[0], 0) + grid[0] * (bin(c[1], 1) + grid[1] * bin(c[2], 2));
  }

  // Dense renumbering in order of first occurrence; empty bins vanish.
  std::vector<BlockId> dense_of_raw(static_cast<std::size_t>(grid[0]) * static_cast<std::size_t>(grid[1]) * static_cast<std::size_t>(grid[2]),
                                    kInvalidId);
  BlockId next = 0;
  for (Id v = 0; v < nv; ++v) {
    BlockId& d = dense_of_raw[static_cast<std::size_t>(raw[static_cast<std::size_t>(v)])];
    if (d == kInvalidId) d = next++;
    raw[static_cast<std::size_t>(v)] = d;
  }
  return raw;
}

// Reorders vertices so the given dense labels become monotone non-decreasing
// in the new vertex ids, then stamps them onto the mesh.  The reordering is
// stable, so partition_by_index labels pass through unchanged.  new_of_old
// (if given) receives the vertex id mapping.
inline Mesh apply_partition(const Mesh& mesh, const std::vector<BlockId>& labels,
                            std::vector<Id>* new_of_old = nullptr) {
  const Id nv = mesh.n_vertices();
  if (static_cast<Id>(labels.size()) != nv)
    throw MeshError("label count " + std::to_string(labels.size()) + " does not match " +
                    std::to_string(nv) + " vertices");
  BlockId n_blocks = 0;
  for (BlockId b : labels) {
    if (b < 0) throw MeshError("negative block label");
    n_blocks = std::max(n_blocks, b + 1);
  }

  std::vector<Id> old_of_new(static_cast<std::size_t>(nv));
  for (Id v = 0; v < nv; ++v) old_of_new[static_cast<std::size_t>(v)] = v;
  std::stable_sort(old_of_new.begin(), old_of_new.end(), [&](Id a, Id b) {
    return labels[static_cast<std::size_t>(a)] < labels[static_cast<std::size_t>(b)];
  });

  std::vector<Id> remap(static_cast<std::size_t>(nv));
  for (Id v = 0; v < nv; ++v) remap[static_cast<std::size_t>(old_of_new[static_cast<std::size_t>(v)])] = v;

  Mesh out;
  out.coords.resize(static_cast<std::size_t>(nv));
  out.block_of.resize(static_cast<std::size_t>(nv));
  if (mesh.has_scalars()) out.scalars.resize(static_cast<std::size_t>(nv));
  for (Id v = 0; v < nv; ++v) {
    const Id old = old_of_new[static_cast<std::size_t>(v)];
    out.coords[static_cast<std::size_t>(v)] = mesh.coords[static_cast<std::size_t>(old)];
    out.block_of[static_cast<std::size_t>(v)] = labels[static_cast<std::size_t>(old)];
    if (mesh.has_scalars())
      out.scalars[static_cast<std::size_t>(v)] = mesh.scalars[static_cast<std::size_t>(old)];
  }
  out.n_blocks = n_blocks;
  out.tets.resize(mesh.tets.size());
  for (std::size_t t = 0; t < mesh.tets.size(); ++t)
    for (int k = 0; k < 4; ++k)
      out.tets[t][static_cast<std::size_t>(k)] =
          remap[static_cast<std::size_t>(mesh.tets[t][static_cast<std::size_t>(k)])];

  if (new_of_old) *new_of_old = std::move(remap);
  validate_mesh(out);
  return out;
}

// Two blocks are neighbors iff some tetrahedron has vertices in both.
inline BlockGraph build_block_graph(const Mesh& mesh) {
  if (!mesh.has_blocks()) throw MeshError("block graph needs a partitioned mesh");
  BlockGraph graph;
  graph.n_blocks = mesh.n_blocks;
  graph.neighbors.resize(static_cast<std::size_t>(mesh.n_blocks));
  for (const auto& q : mesh.tets) {
    BlockId b[4];
    int n = 0;
    for (VertexId v : q) {
      const BlockId label = mesh.block_of[static_cast<std::size_t>(v)];
      bool dup = false;
      for (int i = 0; i < n; ++i) dup |= (b[i] == label);
      if (!dup) b[n++] = label;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) graph.neighbors[static_cast<std::size_t>(b[i])].push_back(b[j]);
  }
  for (auto& list : graph.neighbors) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return graph;
}

}  // namespace actopo
