// actopo: the consumer algorithms used for evaluation.
//
// Every workload is written against the abstract topology access (relation()
// plus the static identification data) and exposes the same shape: a list of
// declared relation kinds, an iteration domain of source simplices split
// into contiguous ranges by the engine, run_range, and a mergeable Output.
// Outputs depend only on relation content, never on structure, mode or
// thread count.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <queue>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "actopo/block_index.hpp"
#include "actopo/ids.hpp"
#include "actopo/mesh.hpp"
#include "actopo/metrics.hpp"
#include "actopo/relations.hpp"
#include "actopo/topology_access.hpp"

namespace actopo {

// ---------------------------------------------------------------------------
// Scalar fields

// Per-vertex values with the usual simulation-of-simplicity total order:
// ties broken by vertex id, so the induced vertex order is strict.
struct ScalarField {
  std::vector<double> values;

  bool precedes(VertexId a, VertexId b) const {
    const double fa = values[static_cast<std::size_t>(a)];
    const double fb = values[static_cast<std::size_t>(b)];
    return fa < fb || (fa == fb && a < b);
  }
};

inline ScalarField make_index_field(Id n) {
  ScalarField field;
  field.values.resize(static_cast<std::size_t>(n));
  for (Id v = 0; v < n; ++v) field.values[static_cast<std::size_t>(v)] = double(v);
  return field;
}

inline ScalarField make_axis_field(const Mesh& mesh, int axis) {
  ScalarField field;
  field.values.reserve(mesh.coords.size());
  for (const auto& c : mesh.coords) field.values.push_back(c[static_cast<std::size_t>(axis)]);
  return field;
}

inline ScalarField make_random_field(Id n, std::uint64_t seed) {
  ScalarField field;
  field.values.resize(static_cast<std::size_t>(n));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (auto& v : field.values) v = uniform(rng);
  return field;
}

// CLI field selector: "index", "x", "random:<seed>", or "" meaning "the
// mesh's scalars section if present, index otherwise".
inline ScalarField field_from_spec(const Mesh& mesh, const std::string& spec) {
  if (spec.empty()) {
    if (mesh.has_scalars()) return ScalarField{mesh.scalars};
    return make_index_field(mesh.n_vertices());
  }
  if (spec == "index") return make_index_field(mesh.n_vertices());
  if (spec == "x") return make_axis_field(mesh, 0);
  if (spec.rfind("random:", 0) == 0) {
    const std::uint64_t seed = std::stoull(spec.substr(7));
    return make_random_field(mesh.n_vertices(), seed);
  }
  throw std::invalid_argument("unknown field spec '" + spec + "'");
}

// ---------------------------------------------------------------------------
// Relation sweep

struct SweepOutput {
  std::int64_t rows = 0;
  std::int64_t targets = 0;
  std::uint64_t hash_sum = 0;

  void merge(SweepOutput&& other) {
    rows += other.rows;
    targets += other.targets;
    hash_sum += other.hash_sum;
  }

  std::uint64_t checksum() const {
    return mix64(mix64(hash_sum) ^ mix64(static_cast<std::uint64_t>(rows)) ^
                 mix64(static_cast<std::uint64_t>(targets) + 1));
  }

  friend bool operator==(const SweepOutput&, const SweepOutput&) = default;
};

// Visits every simplex in ascending id order per dimension, vertices first,
// and requests each boundary and coboundary relation of its dimension.  The
// checksum is a sum of per-(kind, source, target) hashes, so it is invariant
// to visit order and thread split.
struct SweepWorkload {
  using Output = SweepOutput;

  static const char* name() { return "relations"; }

  std::vector<RelationKind> required_kinds() const {
    return {RelationKind::VE, RelationKind::VF, RelationKind::VT, RelationKind::EV,
            RelationKind::EF, RelationKind::ET, RelationKind::FV, RelationKind::FE,
            RelationKind::FT, RelationKind::TV, RelationKind::TE, RelationKind::TF};
  }

  Id domain_size(const Mesh& mesh, const BlockIndex& index) const {
    return mesh.n_vertices() + index.n_edges() + index.n_triangles() + mesh.n_tets();
  }

  SimplexRef domain_anchor(const Mesh& mesh, const BlockIndex& index, Id i) const {
    if (i < mesh.n_vertices()) return vertex_ref(i);
    i -= mesh.n_vertices();
    if (i < index.n_edges()) return edge_ref(i);
    i -= index.n_edges();
    if (i < index.n_triangles()) return triangle_ref(i);
    return tet_ref(i - index.n_triangles());
  }

  template <class Access>
  void run_range(Access& access, Id lo, Id hi, Output& out) const {
    static constexpr RelationKind kKindsOfDim[4][3] = {
        {RelationKind::VE, RelationKind::VF, RelationKind::VT},
        {RelationKind::EV, RelationKind::EF, RelationKind::ET},
        {RelationKind::FV, RelationKind::FE, RelationKind::FT},
        {RelationKind::TV, RelationKind::TE, RelationKind::TF},
    };
    const Mesh& mesh = access.mesh();
    const BlockIndex& index = access.index();
    for (Id i = lo; i < hi; ++i) {
      const SimplexRef s = domain_anchor(mesh, index, i);
      for (const RelationKind kind : kKindsOfDim[s.dim]) {
        const RelationRow row = access.relation(s, kind);
        ++out.rows;
        out.targets += static_cast<std::int64_t>(row.size());
        const std::uint64_t src =
            mix64((static_cast<std::uint64_t>(kind) << 32) | std::uint32_t(s.id));
        for (const Id target : row) out.hash_sum += mix64(src + std::uint32_t(target));
      }
    }
  }
};

// ---------------------------------------------------------------------------
// PL critical points

enum class VertexType : std::uint8_t { Unset = 0, Minimum, Maximum, Saddle, Regular };

constexpr std::uint8_t kBoundaryBit = 0x08;

struct CriticalPointReport {
  std::vector<std::uint8_t> labels;  // low 3 bits VertexType, bit 3 boundary

  void merge(CriticalPointReport&& other) {
    if (other.labels.size() > labels.size()) labels.resize(other.labels.size(), 0);
    for (std::size_t v = 0; v < other.labels.size(); ++v)
      if (other.labels[v]) labels[v] = other.labels[v];
  }

  VertexType type(VertexId v) const {
    return static_cast<VertexType>(labels[static_cast<std::size_t>(v)] & 0x07);
  }
  bool on_boundary(VertexId v) const {
    return (labels[static_cast<std::size_t>(v)] & kBoundaryBit) != 0;
  }

  Id count(VertexType t) const {
    Id n = 0;
    for (std::size_t v = 0; v < labels.size(); ++v)
      if ((labels[v] & 0x07) == static_cast<std::uint8_t>(t)) ++n;
    return n;
  }

  Id boundary_count() const {
    Id n = 0;
    for (const std::uint8_t label : labels) n += (label & kBoundaryBit) ? 1 : 0;
    return n;
  }

  std::uint64_t checksum() const {
    std::uint64_t h = 0;
    for (std::size_t v = 0; v < labels.size(); ++v)
      h += mix64((static_cast<std::uint64_t>(v) << 8) | labels[v]);
    return mix64(h ^ labels.size());
  }

  friend bool operator==(const CriticalPointReport&, const CriticalPointReport&) = default;
};

// Classifies every vertex by the connectivity of its lower and upper link:
// empty lower link = minimum, empty upper link = maximum, one component on
// each side = regular, anything else = saddle.  The link is assembled from
// VT (each tet contributes the triangle opposite the vertex), neighbors come
// from VV, and the boundary flag is VF + FT (a triangle with one cotet is a
// boundary triangle).
class CriticalPointsWorkload {
 public:
  using Output = CriticalPointReport;

  explicit CriticalPointsWorkload(const ScalarField& field) : field_(&field) {}

  static const char* name() { return "critical-points"; }

  std::vector<RelationKind> required_kinds() const {
    return {RelationKind::VV, RelationKind::VF, RelationKind::VT, RelationKind::FT};
  }

  Id domain_size(const Mesh& mesh, const BlockIndex&) const { return mesh.n_vertices(); }

  SimplexRef domain_anchor(const Mesh&, const BlockIndex&, Id i) const { return vertex_ref(i); }

  template <class Access>
  void run_range(Access& access, Id lo, Id hi, Output& out) const {
    if (out.labels.size() < static_cast<std::size_t>(access.mesh().n_vertices()))
      out.labels.resize(static_cast<std::size_t>(access.mesh().n_vertices()), 0);
    // scratch reused across vertices
    std::unordered_map<VertexId, int> slot;
    std::vector<int> parent;
    std::vector<std::uint8_t> side;  // 0 lower, 1 upper

    const auto find = [&](int a) {
      while (parent[static_cast<std::size_t>(a)] != a) {
        parent[static_cast<std::size_t>(a)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
        a = parent[static_cast<std::size_t>(a)];
      }
      return a;
    };

    for (VertexId v = lo; v < hi; ++v) {
      slot.clear();
      parent.clear();
      side.clear();

      const RelationRow neighbors = access.relation(vertex_ref(v), RelationKind::VV);
      for (const VertexId w : neighbors) {
        slot.emplace(w, static_cast<int>(parent.size()));
        parent.push_back(static_cast<int>(parent.size()));
        side.push_back(field_->precedes(w, v) ? 0 : 1);
      }

      // Link edges: every incident tet contributes the triangle opposite v;
      // its three vertex pairs are link edges.  Union only same-side pairs.
      const RelationRow tets = access.relation(vertex_ref(v), RelationKind::VT);
      for (const TetId t : tets) {
        const auto q = access.tet_vertices(t);
        VertexId link[3];
        int n = 0;
        for (const VertexId u : q)
          if (u != v) link[n++] = u;
        for (int a = 0; a < 3; ++a)
          for (int b = a + 1; b < 3; ++b) {
            const int ia = slot.at(link[a]);
            const int ib = slot.at(link[b]);
            if (side[static_cast<std::size_t>(ia)] != side[static_cast<std::size_t>(ib)]) continue;
            const int ra = find(ia);
            const int rb = find(ib);
            if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb;
          }
      }

      Id lower = 0, upper = 0, lower_comps = 0, upper_comps = 0;
      for (std::size_t i = 0; i < parent.size(); ++i) {
        const bool is_lower = side[i] == 0;
        (is_lower ? lower : upper) += 1;
        if (find(static_cast<int>(i)) == static_cast<int>(i))
          (is_lower ? lower_comps : upper_comps) += 1;
      }

      VertexType type;
      if (lower == 0)
        type = VertexType::Minimum;
      else if (upper == 0)
        type = VertexType::Maximum;
      else if (lower_comps == 1 && upper_comps == 1)
        type = VertexType::Regular;
      else
        type = VertexType::Saddle;

      bool boundary = false;
      const RelationRow triangles = access.relation(vertex_ref(v), RelationKind::VF);
      for (const TriangleId f : triangles) {
        const RelationRow cotets = access.relation(triangle_ref(f), RelationKind::FT);
        if (cotets.size() == 1) {
          boundary = true;
          break;
        }
      }

      out.labels[static_cast<std::size_t>(v)] =
          static_cast<std::uint8_t>(type) | (boundary ? kBoundaryBit : 0);
    }
  }

 private:
  const ScalarField* field_;
};

// ---------------------------------------------------------------------------
// Discrete gradient (lower-star pairing)

struct GradientPair {
  SimplexRef low;
  SimplexRef high;

  friend bool operator==(const GradientPair&, const GradientPair&) = default;
};

struct GradientOutput {
  std::vector<GradientPair> pairs;
  std::vector<SimplexRef> criticals;

  void merge(GradientOutput&& other) {
    pairs.insert(pairs.end(), other.pairs.begin(), other.pairs.end());
    criticals.insert(criticals.end(), other.criticals.begin(), other.criticals.end());
  }

  Id critical_count(int dim) const {
    Id n = 0;
    for (const SimplexRef s : criticals) n += (s.dim == dim);
    return n;
  }

  std::uint64_t checksum() const {
    std::uint64_t h = 0;
    for (const GradientPair& p : pairs)
      h += mix64((static_cast<std::uint64_t>(p.low.dim) << 62) ^
                 (static_cast<std::uint64_t>(std::uint32_t(p.low.id)) << 31) ^
                 (static_cast<std::uint64_t>(p.high.dim) << 58) ^
                 std::uint32_t(p.high.id));
    for (const SimplexRef s : criticals)
      h += mix64(0x5ca1ab1eull ^ (static_cast<std::uint64_t>(s.dim) << 32) ^
                 std::uint32_t(s.id));
    return mix64(h ^ (pairs.size() * 0x10001ull) ^ criticals.size());
  }

  friend bool operator==(const GradientOutput&, const GradientOutput&) = default;
};

// Lower-star pairing: each simplex belongs to exactly one vertex's lower
// star (that of its order-maximal vertex), so processing vertices
// independently yields a complete discrete gradient.  Within a lower star,
// simplices are ordered by their vertex-order tuples sorted descending;
// the vertex pairs with the minimal edge, then two priority queues greedily
// pair simplices having exactly one unpaired face, exactly in that order.
class DiscreteGradientWorkload {
 public:
  using Output = GradientOutput;

  explicit DiscreteGradientWorkload(const ScalarField& field) : field_(&field) {}

  static const char* name() { return "discrete-gradient"; }

  std::vector<RelationKind> required_kinds() const {
    // The full precondition profile of the algorithm family; ET is declared
    // for prefetch parity although this pairing variant resolves edge
    // cofacets through EF/FT only.
    return {RelationKind::VE, RelationKind::VF, RelationKind::VT, RelationKind::EF,
            RelationKind::ET, RelationKind::FE, RelationKind::FT, RelationKind::TF};
  }

  Id domain_size(const Mesh& mesh, const BlockIndex&) const { return mesh.n_vertices(); }

  SimplexRef domain_anchor(const Mesh&, const BlockIndex&, Id i) const { return vertex_ref(i); }

  template <class Access>
  void run_range(Access& access, Id lo, Id hi, Output& out) const {
    for (VertexId v = lo; v < hi; ++v) process_lower_star(access, v, out);
  }

 private:
  // One cell of the lower star of v: the simplex, its other vertices sorted
  // descending by field order (the comparison tuple), and pairing state.
  struct Cell {
    SimplexRef ref;
    std::array<VertexId, 3> others{};  // others[0..dim-1] valid
    int unpaired_faces = 0;
    bool paired = false;
  };

  struct QueueEntry {
    int cell;
  };

  template <class Access>
  void process_lower_star(Access& access, VertexId v, Output& out) const {
    const ScalarField& field = *field_;

    std::vector<Cell> cells;
    std::unordered_map<Id, int> edge_cell, tri_cell, tet_cell;

    const auto others_of = [&](std::span<const VertexId> verts, int dim) {
      std::array<VertexId, 3> others{};
      int n = 0;
      for (const VertexId u : verts)
        if (u != v) others[static_cast<std::size_t>(n++)] = u;
      std::sort(others.begin(), others.begin() + dim,
                [&](VertexId a, VertexId b) { return field.precedes(b, a); });
      return others;
    };

    // Gather the lower star: cofaces of v whose other vertices all precede v.
    const RelationRow edges = access.relation(vertex_ref(v), RelationKind::VE);
    for (const EdgeId e : edges) {
      const auto verts = access.edge_vertices(e);
      const VertexId other = verts[0] == v ? verts[1] : verts[0];
      if (!field.precedes(other, v)) continue;
      edge_cell.emplace(e, static_cast<int>(cells.size()));
      Cell cell;
      cell.ref = edge_ref(e);
      cell.others[0] = other;
      cell.unpaired_faces = 1;  // the vertex v itself
      cells.push_back(cell);
    }

    if (cells.empty()) {
      out.criticals.push_back(vertex_ref(v));  // lower star is {v}: a minimum
      return;
    }

    const RelationRow triangles = access.relation(vertex_ref(v), RelationKind::VF);
    for (const TriangleId f : triangles) {
      const auto verts = access.triangle_vertices(f);
      bool in_star = true;
      for (const VertexId u : verts) in_star &= (u == v || field.precedes(u, v));
      if (!in_star) continue;
      tri_cell.emplace(f, static_cast<int>(cells.size()));
      Cell cell;
      cell.ref = triangle_ref(f);
      cell.others = others_of({verts.data(), verts.size()}, 2);
      cell.unpaired_faces = 2;  // its two lower-star edges
      cells.push_back(cell);
    }

    const RelationRow tets = access.relation(vertex_ref(v), RelationKind::VT);
    for (const TetId t : tets) {
      const auto verts = access.tet_vertices(t);
      bool in_star = true;
      for (const VertexId u : verts) in_star &= (u == v || field.precedes(u, v));
      if (!in_star) continue;
      tet_cell.emplace(t, static_cast<int>(cells.size()));
      Cell cell;
      cell.ref = tet_ref(t);
      cell.others = others_of({verts.data(), verts.size()}, 3);
      cell.unpaired_faces = 3;  // its three lower-star triangles
      cells.push_back(cell);
    }

    // Tuple order: lexicographic on the descending vertex tuples, shorter
    // tuple first on a tie (an edge precedes its cofaces).
    const auto tuple_less = [&](int a, int b) {
      const Cell& ca = cells[static_cast<std::size_t>(a)];
      const Cell& cb = cells[static_cast<std::size_t>(b)];
      const int na = ca.ref.dim, nb = cb.ref.dim;
      for (int i = 0; i < std::min(na, nb); ++i) {
        const VertexId ua = ca.others[static_cast<std::size_t>(i)];
        const VertexId ub = cb.others[static_cast<std::size_t>(i)];
        if (ua != ub) return field.precedes(ua, ub);
      }
      if (na != nb) return na < nb;
      return ca.ref.id < cb.ref.id;  // unreachable for distinct simplices
    };
    const auto queue_greater = [&](const QueueEntry& a, const QueueEntry& b) {
      return tuple_less(b.cell, a.cell);
    };
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, decltype(queue_greater)> pq_one(
        queue_greater),
        pq_zero(queue_greater);

    // Facets of a cell inside the lower star (the ones containing v): at
    // most two edges of a triangle, three triangles of a tet.
    std::vector<int> facet_scratch, cofacet_scratch, wake_scratch;
    const auto facets_in_star = [&](const Cell& cell, std::vector<int>& out_cells) {
      out_cells.clear();
      if (cell.ref.dim == 2) {
        const RelationRow fes = access.relation(cell.ref, RelationKind::FE);
        for (const EdgeId e : fes) {
          const auto it = edge_cell.find(e);
          if (it != edge_cell.end()) out_cells.push_back(it->second);
        }
      } else if (cell.ref.dim == 3) {
        const RelationRow tfs = access.relation(cell.ref, RelationKind::TF);
        for (const TriangleId f : tfs) {
          const auto it = tri_cell.find(f);
          if (it != tri_cell.end()) out_cells.push_back(it->second);
        }
      }
    };

    // Cofacets of a cell inside the lower star.  An edge can have
    // arbitrarily many lower-star triangles around it, so this is a vector.
    const auto cofacets_in_star = [&](const Cell& cell, std::vector<int>& out_cells) {
      out_cells.clear();
      if (cell.ref.dim == 1) {
        const RelationRow efs = access.relation(cell.ref, RelationKind::EF);
        for (const TriangleId f : efs) {
          const auto it = tri_cell.find(f);
          if (it != tri_cell.end()) out_cells.push_back(it->second);
        }
      } else if (cell.ref.dim == 2) {
        const RelationRow fts = access.relation(cell.ref, RelationKind::FT);
        for (const TetId t : fts) {
          const auto it = tet_cell.find(t);
          if (it != tet_cell.end()) out_cells.push_back(it->second);
        }
      }
    };

    const auto push_ready_cofacets = [&](int cell) {
      cofacets_in_star(cells[static_cast<std::size_t>(cell)], wake_scratch);
      for (const int i : wake_scratch) {
        const Cell& c = cells[static_cast<std::size_t>(i)];
        if (!c.paired && c.unpaired_faces == 1) pq_one.push({i});
      }
    };

    // A cell was just paired: its cofacets lose one unpaired face.
    const auto mark_paired = [&](int cell) {
      cells[static_cast<std::size_t>(cell)].paired = true;
      cofacets_in_star(cells[static_cast<std::size_t>(cell)], cofacet_scratch);
      for (const int i : cofacet_scratch) --cells[static_cast<std::size_t>(i)].unpaired_faces;
    };

    // Pair v with its minimal lower-star edge.
    int delta = -1;
    for (int i = 0; i < static_cast<int>(cells.size()); ++i) {
      if (cells[static_cast<std::size_t>(i)].ref.dim != 1) continue;
      if (delta < 0 || tuple_less(i, delta)) delta = i;
    }
    for (auto& cell : cells)
      if (cell.ref.dim == 1) --cell.unpaired_faces;  // v is now paired
    mark_paired(delta);
    out.pairs.push_back({vertex_ref(v), cells[static_cast<std::size_t>(delta)].ref});

    for (int i = 0; i < static_cast<int>(cells.size()); ++i)
      if (cells[static_cast<std::size_t>(i)].ref.dim == 1 && i != delta) pq_zero.push({i});
    push_ready_cofacets(delta);

    while (!pq_one.empty() || !pq_zero.empty()) {
      while (!pq_one.empty()) {
        const int a = pq_one.top().cell;
        pq_one.pop();
        Cell& alpha = cells[static_cast<std::size_t>(a)];
        if (alpha.paired) continue;  // stale queue entry
        if (alpha.unpaired_faces == 0) {
          pq_zero.push({a});
          continue;
        }
        facets_in_star(alpha, facet_scratch);
        int lambda = -1;
        for (const int i : facet_scratch)
          if (!cells[static_cast<std::size_t>(i)].paired) lambda = i;
        if (lambda < 0) throw std::logic_error("lower-star pairing lost track of a facet");
        mark_paired(lambda);
        mark_paired(a);
        out.pairs.push_back(
            {cells[static_cast<std::size_t>(lambda)].ref, cells[static_cast<std::size_t>(a)].ref});
        push_ready_cofacets(a);
        push_ready_cofacets(lambda);
      }
      if (!pq_zero.empty()) {
        const int g = pq_zero.top().cell;
        pq_zero.pop();
        Cell& gamma = cells[static_cast<std::size_t>(g)];
        if (gamma.paired) continue;
        gamma.paired = true;  // critical: closed to future pairing
        cofacets_in_star(gamma, cofacet_scratch);
        for (const int i : cofacet_scratch) --cells[static_cast<std::size_t>(i)].unpaired_faces;
        out.criticals.push_back(gamma.ref);
        for (const int i : cofacet_scratch) {
          const Cell& c = cells[static_cast<std::size_t>(i)];
          if (!c.paired && c.unpaired_faces == 1) pq_one.push({i});
        }
      }
    }
  }

  const ScalarField* field_;
};

// ---------------------------------------------------------------------------
// Gradient assembly and V-path traversal

// Per-dimension pairing arrays assembled from a GradientOutput; validates
// the at-most-one-pair and incidence-of-record invariants structurally.
struct GradientField {
  std::array<std::vector<Id>, 4> up;    // dim d -> partner of dimension d+1
  std::array<std::vector<Id>, 4> down;  // dim d -> partner of dimension d-1
  std::array<std::vector<std::uint8_t>, 4> critical;

  static GradientField assemble(const Mesh& mesh, const BlockIndex& index,
                                const GradientOutput& out) {
    GradientField g;
    const Id counts[4] = {mesh.n_vertices(), index.n_edges(), index.n_triangles(),
                          mesh.n_tets()};
    for (int d = 0; d < 4; ++d) {
      g.up[static_cast<std::size_t>(d)].assign(static_cast<std::size_t>(counts[d]), kInvalidId);
      g.down[static_cast<std::size_t>(d)].assign(static_cast<std::size_t>(counts[d]), kInvalidId);
      g.critical[static_cast<std::size_t>(d)].assign(static_cast<std::size_t>(counts[d]), 0);
    }
    for (const GradientPair& p : out.pairs) {
      if (p.high.dim != p.low.dim + 1)
        throw std::logic_error("gradient pair is not an incident (p, p+1) pair");
      auto& up_slot = g.up[static_cast<std::size_t>(p.low.dim)][static_cast<std::size_t>(p.low.id)];
      auto& down_slot =
          g.down[static_cast<std::size_t>(p.high.dim)][static_cast<std::size_t>(p.high.id)];
      if (up_slot != kInvalidId || down_slot != kInvalidId)
        throw std::logic_error("simplex appears in two gradient pairs");
      up_slot = p.high.id;
      down_slot = p.low.id;
    }
    for (const SimplexRef s : out.criticals)
      g.critical[static_cast<std::size_t>(s.dim)][static_cast<std::size_t>(s.id)] = 1;
    return g;
  }
};

struct VPathOutput {
  std::int64_t paths = 0;
  std::int64_t steps = 0;
  std::uint64_t hash_sum = 0;

  void merge(VPathOutput&& other) {
    paths += other.paths;
    steps += other.steps;
    hash_sum += other.hash_sum;
  }

  std::uint64_t checksum() const {
    return mix64(hash_sum ^ mix64(static_cast<std::uint64_t>(steps)) ^
                 static_cast<std::uint64_t>(paths));
  }

  friend bool operator==(const VPathOutput&, const VPathOutput&) = default;
};

// Descending V-path traversal from every critical edge: take the edge's
// order-lower endpoint, stop if it is critical, otherwise hop to the edge it
// is paired with and repeat.  Vertex values strictly decrease along the
// walk, so it terminates; exceeding the vertex count signals a broken
// gradient and aborts.  Unlike the other workloads this visits blocks in
// gradient order, not id order.
class VPathWorkload {
 public:
  using Output = VPathOutput;

  VPathWorkload(const Mesh& mesh, const BlockIndex& index, const ScalarField& field,
                const GradientOutput& gradient)
      : field_(&field) {
    pair_edge_of_vertex_.assign(static_cast<std::size_t>(mesh.n_vertices()), kInvalidId);
    vertex_critical_.assign(static_cast<std::size_t>(mesh.n_vertices()), 0);
    for (const GradientPair& p : gradient.pairs)
      if (p.low.dim == 0) pair_edge_of_vertex_[static_cast<std::size_t>(p.low.id)] = p.high.id;
    for (const SimplexRef s : gradient.criticals) {
      if (s.dim == 0) vertex_critical_[static_cast<std::size_t>(s.id)] = 1;
      if (s.dim == 1) critical_edges_.push_back(s.id);
    }
    std::sort(critical_edges_.begin(), critical_edges_.end());
    (void)index;
  }

  static const char* name() { return "vpath"; }

  std::vector<RelationKind> required_kinds() const { return {RelationKind::VE}; }

  Id domain_size(const Mesh&, const BlockIndex&) const {
    return static_cast<Id>(critical_edges_.size());
  }

  SimplexRef domain_anchor(const Mesh&, const BlockIndex&, Id i) const {
    return edge_ref(critical_edges_[static_cast<std::size_t>(i)]);
  }

  template <class Access>
  void run_range(Access& access, Id lo, Id hi, Output& out) const {
    const Id step_limit = access.mesh().n_vertices() + 2;
    for (Id i = lo; i < hi; ++i) {
      EdgeId edge = critical_edges_[static_cast<std::size_t>(i)];
      std::uint64_t h = mix64(0xDECEA5Edull ^ std::uint32_t(edge));
      Id steps = 0;
      for (;;) {
        const auto verts = access.edge_vertices(edge);
        const VertexId v = field_->precedes(verts[0], verts[1]) ? verts[0] : verts[1];
        // The traversal's topology touch: the star edges of the vertex we
        // descend through.
        const RelationRow star = access.relation(vertex_ref(v), RelationKind::VE);
        (void)star;
        ++steps;
        h = mix64(h, (static_cast<std::uint64_t>(std::uint32_t(edge)) << 32) ^ std::uint32_t(v));
        if (vertex_critical_[static_cast<std::size_t>(v)]) break;
        const EdgeId next = pair_edge_of_vertex_[static_cast<std::size_t>(v)];
        if (next == kInvalidId)
          throw std::logic_error("vertex " + std::to_string(v) +
                                 " is neither critical nor paired with an edge");
        if (steps > step_limit)
          throw std::runtime_error("V-path exceeded the step bound: the gradient has a cycle");
        edge = next;
      }
      ++out.paths;
      out.steps += steps;
      out.hash_sum += h;
    }
  }

 private:
  const ScalarField* field_;
  std::vector<EdgeId> pair_edge_of_vertex_;
  std::vector<std::uint8_t> vertex_critical_;
  std::vector<EdgeId> critical_edges_;
};

}  // namespace actopo
