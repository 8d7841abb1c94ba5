// actopo: identifiers for mesh entities.
//
// All ids are zero-based indices into the corresponding global list.
// Edge and triangle ids only become meaningful once the block index has
// been built (they index the canonical global E / F lists).
#pragma once

#include <cstdint>
#include <functional>

namespace actopo {

using Id = std::int32_t;

using VertexId = Id;
using EdgeId = Id;
using TriangleId = Id;
using TetId = Id;
using BlockId = Id;

constexpr Id kInvalidId = -1;

// Uniform handle over the four per-dimension id spaces.
struct SimplexRef {
  int dim = 0;  // 0 vertex, 1 edge, 2 triangle, 3 tetrahedron
  Id id = kInvalidId;

  friend bool operator==(const SimplexRef&, const SimplexRef&) = default;
};

inline SimplexRef vertex_ref(VertexId v) { return {0, v}; }
inline SimplexRef edge_ref(EdgeId e) { return {1, e}; }
inline SimplexRef triangle_ref(TriangleId f) { return {2, f}; }
inline SimplexRef tet_ref(TetId t) { return {3, t}; }

}  // namespace actopo

template <>
struct std::hash<actopo::SimplexRef> {
  std::size_t operator()(const actopo::SimplexRef& s) const noexcept {
    return std::hash<std::int64_t>()((std::int64_t(s.dim) << 32) | std::uint32_t(s.id));
  }
};
