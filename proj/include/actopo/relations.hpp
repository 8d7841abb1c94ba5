// actopo: the 16 topological relations, computed one block at a time.
//
// A RelationTable holds one relation kind restricted to the source simplices
// internal to one block, with complete rows: targets internal to other
// blocks are included.  Boundary kinds read only static data; coboundary
// kinds scan the block's internal + external tetrahedra; the face-sharing
// adjacency kinds (EE, FF, TT) additionally scan the tetrahedra of the
// block's graph neighbors, because an adjacent simplex need not touch the
// source's block at all — every vertex of the shared face does lie in the
// block or one of its neighbors, which bounds the scan.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "actopo/block_index.hpp"
#include "actopo/ids.hpp"
#include "actopo/mesh.hpp"

namespace actopo {

enum class RelationKind : std::uint8_t {
  // boundary
  EV, FV, TV, FE, TE, TF,
  // coboundary
  VE, VF, VT, EF, ET, FT,
  // adjacency
  VV, EE, FF, TT,
};

constexpr int kRelationKindCount = 16;

constexpr std::array<RelationKind, 16> all_relation_kinds() {
  return {RelationKind::EV, RelationKind::FV, RelationKind::TV, RelationKind::FE,
          RelationKind::TE, RelationKind::TF, RelationKind::VE, RelationKind::VF,
          RelationKind::VT, RelationKind::EF, RelationKind::ET, RelationKind::FT,
          RelationKind::VV, RelationKind::EE, RelationKind::FF, RelationKind::TT};
}

inline const char* kind_name(RelationKind k) {
  static constexpr const char* names[16] = {"EV", "FV", "TV", "FE", "TE", "TF", "VE", "VF",
                                            "VT", "EF", "ET", "FT", "VV", "EE", "FF", "TT"};
  return names[static_cast<int>(k)];
}

inline RelationKind parse_relation_kind(const std::string& name) {
  for (RelationKind k : all_relation_kinds())
    if (name == kind_name(k)) return k;
  throw std::invalid_argument("unknown relation kind '" + name + "'");
}

inline bool is_boundary_kind(RelationKind k) { return static_cast<int>(k) < 6; }
inline bool is_coboundary_kind(RelationKind k) {
  return static_cast<int>(k) >= 6 && static_cast<int>(k) < 12;
}
inline bool is_adjacency_kind(RelationKind k) { return static_cast<int>(k) >= 12; }

inline int source_dim(RelationKind k) {
  static constexpr int dims[16] = {1, 2, 3, 2, 3, 3, 0, 0, 0, 1, 1, 2, 0, 1, 2, 3};
  return dims[static_cast<int>(k)];
}

inline int target_dim(RelationKind k) {
  static constexpr int dims[16] = {0, 0, 0, 1, 1, 2, 1, 2, 3, 2, 3, 3, 0, 1, 2, 3};
  return dims[static_cast<int>(k)];
}

// Fixed row sizes of the boundary relations.
inline int boundary_arity(RelationKind k) {
  static constexpr int arity[6] = {2, 3, 4, 3, 6, 4};
  return arity[static_cast<int>(k)];
}

// One relation kind over one block's internal source simplices, stored as
// offsets/targets.  Row i corresponds to the i-th internal source simplex of
// the block: global id first_source + i for dims 0..2, internal_tets[b][i]
// for tet-sourced kinds.
struct RelationTable {
  RelationKind kind = RelationKind::EV;
  BlockId block = 0;
  Id first_source = 0;
  std::vector<Id> offsets;  // size n_rows + 1
  std::vector<Id> targets;

  Id n_rows() const { return static_cast<Id>(offsets.empty() ? 0 : offsets.size() - 1); }

  std::span<const Id> row(Id i) const {
    const Id lo = offsets[static_cast<std::size_t>(i)];
    const Id hi = offsets[static_cast<std::size_t>(i) + 1];
    return {targets.data() + lo, static_cast<std::size_t>(hi - lo)};
  }

  std::int64_t bytes() const {
    return static_cast<std::int64_t>(offsets.size() + targets.size()) * sizeof(Id) +
           static_cast<std::int64_t>(sizeof(RelationTable));
  }

  friend bool operator==(const RelationTable&, const RelationTable&) = default;
};

// Position of simplex s among the internal sources of its block, i.e. the
// row index of s in any RelationTable of (block, kind) with matching source
// dimension.
inline Id relation_row_index(const BlockIndex& index, BlockId b, SimplexRef s) {
  switch (s.dim) {
    case 0:
      return s.id - index.vertex_range(b).first;
    case 1:
      return s.id - index.edge_range(b).first;
    case 2:
      return s.id - index.triangle_range(b).first;
    default: {
      const auto& tets = index.internal_tets[static_cast<std::size_t>(b)];
      const auto it = std::lower_bound(tets.begin(), tets.end(), s.id);
      if (it == tets.end() || *it != s.id)
        throw std::logic_error("tet " + std::to_string(s.id) + " is not internal to block " +
                               std::to_string(b));
      return static_cast<Id>(it - tets.begin());
    }
  }
}

namespace detail {

inline std::uint64_t pair_key(VertexId u, VertexId v) {
  return (static_cast<std::uint64_t>(std::uint32_t(u)) << 32) | std::uint32_t(v);
}

struct TripleHash {
  std::size_t operator()(const std::array<VertexId, 3>& t) const noexcept {
    std::uint64_t h = std::uint32_t(t[0]);
    h = h * 0x9e3779b97f4a7c15ull + std::uint32_t(t[1]);
    h = h * 0x9e3779b97f4a7c15ull + std::uint32_t(t[2]);
    return static_cast<std::size_t>(h ^ (h >> 32));
  }
};

inline EdgeId need_edge(const BlockIndex& index, VertexId u, VertexId v) {
  const EdgeId e = index.find_edge(u, v);
  if (e == kInvalidId)
    throw std::logic_error("edge {" + std::to_string(u) + "," + std::to_string(v) +
                           "} missing from the block index");
  return e;
}

inline TriangleId need_triangle(const BlockIndex& index, VertexId u, VertexId v, VertexId w) {
  const TriangleId f = index.find_triangle(u, v, w);
  if (f == kInvalidId)
    throw std::logic_error("triangle {" + std::to_string(u) + "," + std::to_string(v) + "," +
                           std::to_string(w) + "} missing from the block index");
  return f;
}

// Tets intersecting block b, optionally together with those of its graph
// neighbors, each listed once.
inline std::vector<TetId> candidate_tets(const BlockIndex& index, BlockId b,
                                         bool include_neighbors) {
  const auto& internal = index.internal_tets[static_cast<std::size_t>(b)];
  const auto& external = index.external_tets[static_cast<std::size_t>(b)];
  std::vector<TetId> tets;
  tets.reserve(internal.size() + external.size());
  tets.insert(tets.end(), internal.begin(), internal.end());
  tets.insert(tets.end(), external.begin(), external.end());
  if (include_neighbors) {
    for (BlockId nb : index.neighbors[static_cast<std::size_t>(b)]) {
      const auto& ni = index.internal_tets[static_cast<std::size_t>(nb)];
      const auto& ne = index.external_tets[static_cast<std::size_t>(nb)];
      tets.insert(tets.end(), ni.begin(), ni.end());
      tets.insert(tets.end(), ne.begin(), ne.end());
    }
    std::sort(tets.begin(), tets.end());
    tets.erase(std::unique(tets.begin(), tets.end()), tets.end());
  }
  return tets;
}

}  // namespace detail

inline RelationTable compute_relation(const Mesh& mesh, const BlockIndex& index, BlockId b,
                                      RelationKind kind) {
  RelationTable table;
  table.kind = kind;
  table.block = b;

  const auto& internal = index.internal_tets[static_cast<std::size_t>(b)];
  const auto [vlo, vhi] = index.vertex_range(b);
  const auto [elo, ehi] = index.edge_range(b);
  const auto [flo, fhi] = index.triangle_range(b);

  Id n_rows = 0;
  switch (source_dim(kind)) {
    case 0:
      n_rows = vhi - vlo;
      table.first_source = vlo;
      break;
    case 1:
      n_rows = ehi - elo;
      table.first_source = elo;
      break;
    case 2:
      n_rows = fhi - flo;
      table.first_source = flo;
      break;
    default:
      n_rows = static_cast<Id>(internal.size());
      table.first_source = internal.empty() ? 0 : internal.front();
      break;
  }
  std::vector<std::vector<Id>> rows(static_cast<std::size_t>(n_rows));

  const auto sorted_tet = [&](TetId t) {
    std::array<VertexId, 4> q = mesh.tets[static_cast<std::size_t>(t)];
    std::sort(q.begin(), q.end());
    return q;
  };
  const auto in_b = [&](VertexId v) { return index.block_of_vertex(v) == b; };

  switch (kind) {
    case RelationKind::EV:
      for (Id e = elo; e < ehi; ++e) {
        const auto& pair = index.edges[static_cast<std::size_t>(e)];
        rows[static_cast<std::size_t>(e - elo)] = {pair[0], pair[1]};
      }
      break;

    case RelationKind::FV:
      for (Id f = flo; f < fhi; ++f) {
        const auto& tri = index.triangles[static_cast<std::size_t>(f)];
        rows[static_cast<std::size_t>(f - flo)] = {tri[0], tri[1], tri[2]};
      }
      break;

    case RelationKind::TV:
      for (Id i = 0; i < n_rows; ++i) {
        const auto q = sorted_tet(internal[static_cast<std::size_t>(i)]);
        rows[static_cast<std::size_t>(i)] = {q[0], q[1], q[2], q[3]};
      }
      break;

    case RelationKind::FE:
      for (Id f = flo; f < fhi; ++f) {
        const auto& tri = index.triangles[static_cast<std::size_t>(f)];
        rows[static_cast<std::size_t>(f - flo)] = {detail::need_edge(index, tri[0], tri[1]),
                                                   detail::need_edge(index, tri[0], tri[2]),
                                                   detail::need_edge(index, tri[1], tri[2])};
      }
      break;

    case RelationKind::TE:
      for (Id i = 0; i < n_rows; ++i) {
        const auto q = sorted_tet(internal[static_cast<std::size_t>(i)]);
        auto& row = rows[static_cast<std::size_t>(i)];
        for (int x = 0; x < 4; ++x)
          for (int y = x + 1; y < 4; ++y)
            row.push_back(detail::need_edge(index, q[static_cast<std::size_t>(x)],
                                            q[static_cast<std::size_t>(y)]));
      }
      break;

    case RelationKind::TF:
      for (Id i = 0; i < n_rows; ++i) {
        const auto q = sorted_tet(internal[static_cast<std::size_t>(i)]);
        auto& row = rows[static_cast<std::size_t>(i)];
        for (int skip = 0; skip < 4; ++skip) {
          VertexId tri[3];
          int n = 0;
          for (int x = 0; x < 4; ++x)
            if (x != skip) tri[n++] = q[static_cast<std::size_t>(x)];
          row.push_back(detail::need_triangle(index, tri[0], tri[1], tri[2]));
        }
      }
      break;

    case RelationKind::VE:
    case RelationKind::VF:
    case RelationKind::VT:
    case RelationKind::EF:
    case RelationKind::ET:
    case RelationKind::FT:
    case RelationKind::VV: {
      // One pass over the tets intersecting b; every coface of an internal
      // source contains a vertex of b, so this scan is complete.
      for (const TetId t : detail::candidate_tets(index, b, false)) {
        const auto q = sorted_tet(t);
        switch (kind) {
          case RelationKind::VT:
            for (int x = 0; x < 4; ++x)
              if (in_b(q[static_cast<std::size_t>(x)]))
                rows[static_cast<std::size_t>(q[static_cast<std::size_t>(x)] - vlo)].push_back(t);
            break;
          case RelationKind::VE:
          case RelationKind::VV:
            for (int x = 0; x < 4; ++x)
              for (int y = x + 1; y < 4; ++y) {
                const VertexId u = q[static_cast<std::size_t>(x)];
                const VertexId v = q[static_cast<std::size_t>(y)];
                if (!in_b(u) && !in_b(v)) continue;
                if (kind == RelationKind::VV) {
                  if (in_b(u)) rows[static_cast<std::size_t>(u - vlo)].push_back(v);
                  if (in_b(v)) rows[static_cast<std::size_t>(v - vlo)].push_back(u);
                } else {
                  const EdgeId e = detail::need_edge(index, u, v);
                  if (in_b(u)) rows[static_cast<std::size_t>(u - vlo)].push_back(e);
                  if (in_b(v)) rows[static_cast<std::size_t>(v - vlo)].push_back(e);
                }
              }
            break;
          case RelationKind::ET:
            for (int x = 0; x < 4; ++x) {
              if (!in_b(q[static_cast<std::size_t>(x)])) continue;
              for (int y = x + 1; y < 4; ++y)
                rows[static_cast<std::size_t>(
                         detail::need_edge(index, q[static_cast<std::size_t>(x)],
                                           q[static_cast<std::size_t>(y)]) -
                         elo)]
                    .push_back(t);
            }
            break;
          case RelationKind::VF:
          case RelationKind::EF:
            for (int x = 0; x < 4; ++x)
              for (int y = x + 1; y < 4; ++y)
                for (int z = y + 1; z < 4; ++z) {
                  const VertexId u = q[static_cast<std::size_t>(x)];
                  const VertexId v = q[static_cast<std::size_t>(y)];
                  const VertexId w = q[static_cast<std::size_t>(z)];
                  if (kind == RelationKind::VF) {
                    if (!in_b(u) && !in_b(v) && !in_b(w)) continue;
                    const TriangleId f = detail::need_triangle(index, u, v, w);
                    if (in_b(u)) rows[static_cast<std::size_t>(u - vlo)].push_back(f);
                    if (in_b(v)) rows[static_cast<std::size_t>(v - vlo)].push_back(f);
                    if (in_b(w)) rows[static_cast<std::size_t>(w - vlo)].push_back(f);
                  } else {
                    // EF: the triangle's edges led by a vertex of b.
                    if (!in_b(u) && !in_b(v)) continue;
                    const TriangleId f = detail::need_triangle(index, u, v, w);
                    if (in_b(u)) {
                      rows[static_cast<std::size_t>(detail::need_edge(index, u, v) - elo)]
                          .push_back(f);
                      rows[static_cast<std::size_t>(detail::need_edge(index, u, w) - elo)]
                          .push_back(f);
                    }
                    if (in_b(v))
                      rows[static_cast<std::size_t>(detail::need_edge(index, v, w) - elo)]
                          .push_back(f);
                  }
                }
            break;
          case RelationKind::FT:
            for (int x = 0; x < 4; ++x) {
              if (!in_b(q[static_cast<std::size_t>(x)])) continue;
              for (int y = x + 1; y < 4; ++y)
                for (int z = y + 1; z < 4; ++z)
                  rows[static_cast<std::size_t>(
                           detail::need_triangle(index, q[static_cast<std::size_t>(x)],
                                                 q[static_cast<std::size_t>(y)],
                                                 q[static_cast<std::size_t>(z)]) -
                           flo)]
                      .push_back(t);
            }
            break;
          default:
            break;
        }
      }
      break;
    }

    case RelationKind::EE: {
      std::unordered_map<VertexId, std::vector<Id>> edges_at;
      for (Id e = elo; e < ehi; ++e) {
        const auto& pair = index.edges[static_cast<std::size_t>(e)];
        edges_at[pair[0]].push_back(e);
        edges_at[pair[1]].push_back(e);
      }
      for (const TetId t : detail::candidate_tets(index, b, true)) {
        const auto q = sorted_tet(t);
        for (int x = 0; x < 4; ++x)
          for (int y = x + 1; y < 4; ++y) {
            const VertexId u = q[static_cast<std::size_t>(x)];
            const VertexId v = q[static_cast<std::size_t>(y)];
            const auto iu = edges_at.find(u);
            const auto iv = edges_at.find(v);
            if (iu == edges_at.end() && iv == edges_at.end()) continue;
            const EdgeId g = detail::need_edge(index, u, v);
            for (const auto* hit : {iu != edges_at.end() ? &iu->second : nullptr,
                                    iv != edges_at.end() ? &iv->second : nullptr})
              if (hit)
                for (Id src : *hit)
                  if (src != g) rows[static_cast<std::size_t>(src - elo)].push_back(g);
          }
      }
      break;
    }

    case RelationKind::FF: {
      std::unordered_map<std::uint64_t, std::vector<Id>> tris_at_edge;
      for (Id f = flo; f < fhi; ++f) {
        const auto& tri = index.triangles[static_cast<std::size_t>(f)];
        tris_at_edge[detail::pair_key(tri[0], tri[1])].push_back(f);
        tris_at_edge[detail::pair_key(tri[0], tri[2])].push_back(f);
        tris_at_edge[detail::pair_key(tri[1], tri[2])].push_back(f);
      }
      for (const TetId t : detail::candidate_tets(index, b, true)) {
        const auto q = sorted_tet(t);
        for (int x = 0; x < 4; ++x)
          for (int y = x + 1; y < 4; ++y)
            for (int z = y + 1; z < 4; ++z) {
              const VertexId u = q[static_cast<std::size_t>(x)];
              const VertexId v = q[static_cast<std::size_t>(y)];
              const VertexId w = q[static_cast<std::size_t>(z)];
              TriangleId g = kInvalidId;
              for (const std::uint64_t key : {detail::pair_key(u, v), detail::pair_key(u, w),
                                              detail::pair_key(v, w)}) {
                const auto it = tris_at_edge.find(key);
                if (it == tris_at_edge.end()) continue;
                if (g == kInvalidId) g = detail::need_triangle(index, u, v, w);
                for (Id src : it->second)
                  if (src != g) rows[static_cast<std::size_t>(src - flo)].push_back(g);
              }
            }
      }
      break;
    }

    case RelationKind::TT: {
      std::unordered_map<std::array<VertexId, 3>, std::vector<Id>, detail::TripleHash> face_rows;
      for (Id i = 0; i < n_rows; ++i) {
        const auto q = sorted_tet(internal[static_cast<std::size_t>(i)]);
        for (int skip = 0; skip < 4; ++skip) {
          std::array<VertexId, 3> tri;
          int n = 0;
          for (int x = 0; x < 4; ++x)
            if (x != skip) tri[static_cast<std::size_t>(n++)] = q[static_cast<std::size_t>(x)];
          face_rows[tri].push_back(i);
        }
      }
      for (const TetId t : detail::candidate_tets(index, b, true)) {
        const auto q = sorted_tet(t);
        for (int skip = 0; skip < 4; ++skip) {
          std::array<VertexId, 3> tri;
          int n = 0;
          for (int x = 0; x < 4; ++x)
            if (x != skip) tri[static_cast<std::size_t>(n++)] = q[static_cast<std::size_t>(x)];
          const auto it = face_rows.find(tri);
          if (it == face_rows.end()) continue;
          for (Id src : it->second)
            if (internal[static_cast<std::size_t>(src)] != t)
              rows[static_cast<std::size_t>(src)].push_back(t);
        }
      }
      break;
    }
  }

  Id total = 0;
  for (auto& row : rows) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    total += static_cast<Id>(row.size());
  }
  table.offsets.reserve(rows.size() + 1);
  table.targets.reserve(static_cast<std::size_t>(total));
  table.offsets.push_back(0);
  for (const auto& row : rows) {
    table.targets.insert(table.targets.end(), row.begin(), row.end());
    table.offsets.push_back(static_cast<Id>(table.targets.size()));
  }
  return table;
}

// A triangle is on the mesh boundary iff it has exactly one cotetrahedron.
inline bool is_boundary_triangle(const Mesh& mesh, const BlockIndex& index, TriangleId f) {
  const auto& tri = index.triangles[static_cast<std::size_t>(f)];
  const BlockId b = index.block_of_vertex(tri[0]);
  int cotets = 0;
  for (const TetId t : detail::candidate_tets(index, b, false)) {
    const auto& q = mesh.tets[static_cast<std::size_t>(t)];
    int found = 0;
    for (VertexId v : q) found += (v == tri[0] || v == tri[1] || v == tri[2]);
    cotets += (found == 3);
  }
  return cotets == 1;
}

}  // namespace actopo
