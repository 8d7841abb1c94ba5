// Structural checks on a discrete gradient: facet incidence and V-path
// acyclicity, resolved through the block index rather than the workload code
// under test.
#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <vector>

#include "actopo/block_index.hpp"
#include "actopo/mesh.hpp"
#include "actopo/workloads.hpp"

namespace actopo::testing {

// Facets of a simplex as global ids, resolved through the index.
inline std::vector<SimplexRef> facets_of(const Mesh& mesh, const BlockIndex& index,
                                         SimplexRef s) {
  std::vector<SimplexRef> out;
  switch (s.dim) {
    case 1: {
      const auto& e = index.edges[std::size_t(s.id)];
      out = {vertex_ref(e[0]), vertex_ref(e[1])};
      break;
    }
    case 2: {
      const auto& f = index.triangles[std::size_t(s.id)];
      out = {edge_ref(index.find_edge(f[0], f[1])), edge_ref(index.find_edge(f[0], f[2])),
             edge_ref(index.find_edge(f[1], f[2]))};
      break;
    }
    case 3: {
      std::array<VertexId, 4> q = mesh.tets[std::size_t(s.id)];
      std::sort(q.begin(), q.end());
      out = {triangle_ref(index.find_triangle(q[0], q[1], q[2])),
             triangle_ref(index.find_triangle(q[0], q[1], q[3])),
             triangle_ref(index.find_triangle(q[0], q[2], q[3])),
             triangle_ref(index.find_triangle(q[1], q[2], q[3]))};
      break;
    }
    default: break;
  }
  return out;
}

inline bool is_facet(const Mesh& mesh, const BlockIndex& index, SimplexRef low,
                     SimplexRef high) {
  const auto fs = facets_of(mesh, index, high);
  return std::find(fs.begin(), fs.end(), low) != fs.end();
}

// Walks every V-path of the gradient (all dimensions) and reports whether one
// closes into a cycle: arrows are pairs (low -> high); from an arrow, a path
// continues through every other facet of `high` that is itself paired upward.
inline bool has_vpath_cycle(const Mesh& mesh, const BlockIndex& index,
                            const GradientField& g) {
  std::vector<SimplexRef> arrows;
  std::vector<std::vector<Id>> arrow_of(4);  // [dim][id] -> arrow index or invalid
  const Id counts[4] = {mesh.n_vertices(), index.n_edges(), index.n_triangles(),
                        mesh.n_tets()};
  for (int d = 0; d < 3; ++d) {
    arrow_of[std::size_t(d)].assign(std::size_t(counts[d]), kInvalidId);
    for (Id i = 0; i < counts[d]; ++i)
      if (g.up[std::size_t(d)][std::size_t(i)] != kInvalidId) {
        arrow_of[std::size_t(d)][std::size_t(i)] = Id(arrows.size());
        arrows.push_back({d, i});
      }
  }
  // 0 = unvisited, 1 = on the current path, 2 = done.
  std::vector<std::uint8_t> color(arrows.size(), 0);
  bool cycle = false;
  const std::function<void(Id)> visit = [&](Id a) {
    if (color[std::size_t(a)] == 1) {  // a back edge closes a V-path cycle
      cycle = true;
      return;
    }
    if (color[std::size_t(a)] == 2 || cycle) return;
    color[std::size_t(a)] = 1;
    const SimplexRef low = arrows[std::size_t(a)];
    const SimplexRef high = {low.dim + 1, g.up[std::size_t(low.dim)][std::size_t(low.id)]};
    for (const SimplexRef next : facets_of(mesh, index, high)) {
      if (next == low) continue;
      const Id b = arrow_of[std::size_t(next.dim)][std::size_t(next.id)];
      if (b != kInvalidId) visit(b);
    }
    color[std::size_t(a)] = 2;
  };
  for (Id a = 0; a < Id(arrows.size()) && !cycle; ++a) visit(a);
  return cycle;
}

}  // namespace actopo::testing
