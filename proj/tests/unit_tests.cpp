// Mesh container, .tmsh grammar, grid generator, partitioners, block index,
// and the small metrics utilities.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "actopo/block_index.hpp"
#include "actopo/mesh.hpp"
#include "actopo/mesh_gen.hpp"
#include "actopo/metrics.hpp"
#include "actopo/partition.hpp"
#include "support/meshes.hpp"
#include "support/oracle.hpp"

using namespace actopo;
using testing::single_tet_mesh;
using testing::two_tet_mesh;

namespace {

// Euler characteristic |V| - |E| + |F| - |T| via the block index.
std::int64_t euler(const Mesh& mesh, const BlockIndex& index) {
  return std::int64_t(mesh.n_vertices()) - index.n_edges() + index.n_triangles() -
         mesh.n_tets();
}

Mesh indexed(Mesh mesh, BlockId n_blocks) {
  return apply_partition(mesh, partition_by_index(mesh, n_blocks));
}

}  // namespace

TEST_CASE("mesh validation rejects malformed input", "[mesh]") {
  Mesh mesh = two_tet_mesh();

  SECTION("out-of-range vertex") {
    mesh.tets[0] = {0, 1, 2, 9};
    REQUIRE_THROWS_AS(validate_mesh(mesh), MeshError);
  }
  SECTION("repeated vertex in a tet") {
    mesh.tets[0] = {0, 1, 2, 2};
    REQUIRE_THROWS_AS(validate_mesh(mesh), MeshError);
  }
  SECTION("duplicate tet under permutation") {
    mesh.tets.push_back({4, 2, 1, 0});
    REQUIRE_THROWS_AS(validate_mesh(mesh), MeshError);
  }
  SECTION("isolated vertex") {
    mesh.coords.push_back({9, 9, 9});
    mesh.block_of.push_back(1);
    REQUIRE_THROWS_AS(validate_mesh(mesh), MeshError);
  }
  SECTION("non-monotone labels") {
    mesh.block_of = {0, 1, 0, 1, 1};
    REQUIRE_THROWS_WITH(validate_mesh(mesh),
                        Catch::Matchers::ContainsSubstring("renumber vertices block by block"));
  }
  SECTION("empty block") {
    mesh.n_blocks = 3;  // nothing labeled 2
    REQUIRE_THROWS_AS(validate_mesh(mesh), MeshError);
  }
  SECTION("label count mismatch") {
    mesh.block_of.pop_back();
    REQUIRE_THROWS_AS(validate_mesh(mesh), MeshError);
  }
  SECTION("scalar count mismatch") {
    mesh.scalars = {1.0, 2.0};
    REQUIRE_THROWS_AS(validate_mesh(mesh), MeshError);
  }
}

TEST_CASE("tmsh round-trip preserves every section", "[mesh][io]") {
  Mesh mesh = two_tet_mesh();
  mesh.scalars = {0.5, -1.25, 3.0, 0.1 + 0.2, 1e-17};

  std::ostringstream out;
  save_mesh(out, mesh);
  std::istringstream in(out.str());
  const Mesh back = load_mesh(in);

  REQUIRE(back.coords == mesh.coords);
  REQUIRE(back.tets == mesh.tets);
  REQUIRE(back.block_of == mesh.block_of);
  REQUIRE(back.n_blocks == mesh.n_blocks);
  REQUIRE(back.scalars == mesh.scalars);  // %.17g survives exactly
}

TEST_CASE("tmsh parser accepts comments and optional sections", "[mesh][io]") {
  std::istringstream in(
      "tmsh 1\n"
      "# a comment line\n"
      "vertices 4\n"
      "0 0 0\n1 0 0\n0 1 0\n0 0 1   # trailing comment\n"
      "tets 1\n"
      "0 1 2 3\n");
  const Mesh mesh = load_mesh(in);
  REQUIRE(mesh.n_vertices() == 4);
  REQUIRE(mesh.n_tets() == 1);
  REQUIRE_FALSE(mesh.has_blocks());
  REQUIRE_FALSE(mesh.has_scalars());
}

TEST_CASE("tmsh parser reports the offending line", "[mesh][io]") {
  SECTION("bad magic") {
    std::istringstream in("tmsh 2\n");
    REQUIRE_THROWS_WITH(load_mesh(in), Catch::Matchers::ContainsSubstring("line 1"));
  }
  SECTION("truncated vertex section") {
    std::istringstream in("tmsh 1\nvertices 2\n0 0 0\n");
    REQUIRE_THROWS_AS(load_mesh(in), MeshError);
  }
  SECTION("garbage token") {
    std::istringstream in("tmsh 1\nvertices 1\n0 zero 0\ntets 1\n0 0 0 0\n");
    REQUIRE_THROWS_WITH(load_mesh(in), Catch::Matchers::ContainsSubstring("line 3"));
  }
}

TEST_CASE("grid generator matches hand counts", "[gen]") {
  const Mesh g2 = generate_grid(2, 2, 2);
  REQUIRE(g2.n_vertices() == 8);
  REQUIRE(g2.n_tets() == 6);

  const Mesh g3 = generate_grid(3, 3, 3);
  REQUIRE(g3.n_vertices() == 27);
  REQUIRE(g3.n_tets() == 48);

  // A solid ball has Euler characteristic 1; that fails if the six-tet cube
  // split were non-conforming across cube boundaries.
  for (const Mesh* m : {&g2, &g3}) {
    const Mesh p = indexed(*m, 2);
    const BlockIndex index = build_block_index(p);
    REQUIRE(euler(p, index) == 1);
  }
}

TEST_CASE("grid generator rejects degenerate extents", "[gen]") {
  REQUIRE_THROWS_WITH(generate_grid(1, 4, 4),
                      Catch::Matchers::ContainsSubstring("empty tetrahedralization"));
  REQUIRE_THROWS_AS(generate_grid_spec("3,3"), std::invalid_argument);
  REQUIRE_THROWS_AS(generate_grid_spec("3,3,x"), std::invalid_argument);
}

TEST_CASE("index partitioner produces the documented labelings", "[partition]") {
  Mesh mesh = generate_grid(2, 2, 2);  // 8 vertices
  REQUIRE(partition_by_index(mesh, 2) == std::vector<BlockId>{0, 0, 0, 0, 1, 1, 1, 1});

  Mesh small = single_tet_mesh();
  small.coords.push_back({2, 2, 2});
  small.tets.push_back({1, 2, 3, 4});
  small.block_of.clear();
  small.n_blocks = 0;  // 5 vertices now
  REQUIRE(partition_by_index(small, 5) == std::vector<BlockId>{0, 1, 2, 3, 4});
  REQUIRE(partition_by_index(small, 1) == std::vector<BlockId>{0, 0, 0, 0, 0});
  REQUIRE_THROWS_AS(partition_by_index(small, 0), MeshError);
  REQUIRE_THROWS_AS(partition_by_index(small, 6), MeshError);
}

TEST_CASE("grid partitioner bins spatially and renumbers densely", "[partition]") {
  const Mesh mesh = generate_grid(9, 9, 2);
  const std::vector<BlockId> labels = partition_grid(mesh, 9);

  BlockId max_label = 0;
  for (const BlockId b : labels) max_label = std::max(max_label, b);
  REQUIRE(max_label == 8);  // 3x3x1 bins over a flat slab

  // Dense renumbering by first occurrence: label 0 appears before 1, etc.
  std::set<BlockId> seen;
  for (const BlockId b : labels) {
    if (seen.insert(b).second) REQUIRE(b == BlockId(seen.size()) - 1);
  }

  // After reordering, the mesh is valid and the center block of the 3x3
  // arrangement touches all eight in-plane neighbors.
  const Mesh part = apply_partition(mesh, labels);
  const BlockGraph graph = build_block_graph(part);
  std::size_t eight = 0;
  for (const auto& nb : graph.neighbors) eight += (nb.size() == 8);
  REQUIRE(eight == 1);  // exactly the center block
}

TEST_CASE("apply_partition reorders vertices and remaps tets", "[partition]") {
  std::mt19937_64 rng(20260819);
  for (int trial = 0; trial < 20; ++trial) {
    const Mesh soup = testing::random_tet_soup(rng);
    std::uniform_int_distribution<BlockId> nb(1, std::min<Id>(8, soup.n_vertices()));
    const Mesh part = apply_partition(soup, partition_grid(soup, nb(rng)));
    REQUIRE_NOTHROW(validate_mesh(part));
    REQUIRE(part.n_tets() == soup.n_tets());
    // Multisets of coordinates agree (the permutation loses nothing).
    auto a = soup.coords, b = part.coords;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    REQUIRE(a == b);
  }
}

TEST_CASE("block graph is symmetric and loop-free", "[partition]") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const Mesh mesh = testing::with_random_blocks(rng, testing::random_grid_subset(rng));
    const BlockGraph graph = build_block_graph(mesh);
    for (BlockId a = 0; a < graph.n_blocks; ++a) {
      for (const BlockId b : graph.neighbors[std::size_t(a)]) {
        REQUIRE(a != b);
        const auto& back = graph.neighbors[std::size_t(b)];
        REQUIRE(std::binary_search(back.begin(), back.end(), a));
      }
    }
  }
}

TEST_CASE("block index matches the worked two-tet decomposition", "[index]") {
  const Mesh mesh = two_tet_mesh();
  const BlockIndex index = build_block_index(mesh);

  REQUIRE(index.n_blocks == 2);
  REQUIRE(index.n_edges() == 9);
  REQUIRE(index.n_triangles() == 7);

  // Block 0 owns every simplex whose lowest vertex is v0 or v1; the edge
  // list is lexicographic within the block.
  const std::vector<std::array<VertexId, 2>> expect_edges = {
      {0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4},  // block 0
      {2, 3}, {2, 4}};                                         // block 1
  REQUIRE(index.edges == expect_edges);
  REQUIRE(index.s_edge == std::vector<Id>{7, 9});
  REQUIRE(index.s_tri == std::vector<Id>{7, 7});

  REQUIRE(index.internal_tets[0] == std::vector<TetId>{0, 1});
  REQUIRE(index.internal_tets[1].empty());
  REQUIRE(index.external_tets[0].empty());
  REQUIRE(index.external_tets[1] == std::vector<TetId>{0, 1});

  REQUIRE(index.find_edge(0, 3) == 2);
  REQUIRE(index.find_edge(3, 0) == 2);
  REQUIRE(index.find_edge(2, 4) == 8);
  REQUIRE(index.find_edge(3, 4) == kInvalidId);
  REQUIRE(index.find_triangle(0, 1, 2) == 0);
  REQUIRE(index.find_triangle(2, 3, 4) == kInvalidId);

  REQUIRE(index.neighbors[0] == std::vector<BlockId>{1});
  REQUIRE(index.neighbors[1] == std::vector<BlockId>{0});
}

TEST_CASE("block index identifications agree with the oracle", "[index]") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const Mesh mesh = testing::with_random_blocks(
        rng, trial % 2 ? testing::random_tet_soup(rng) : testing::random_grid_subset(rng));
    const BlockIndex index = build_block_index(mesh);
    const testing::RelationOracle oracle(mesh);

    REQUIRE(index.edges == oracle.edges);
    REQUIRE(index.triangles == oracle.triangles);
    for (BlockId b = 0; b < index.n_blocks; ++b) {
      REQUIRE(index.internal_tets[std::size_t(b)] == oracle.sources(b, 3));
      const auto [elo, ehi] = index.edge_range(b);
      REQUIRE(oracle.sources(b, 1) ==
              [&] {
                std::vector<Id> ids;
                for (Id e = elo; e < ehi; ++e) ids.push_back(e);
                return ids;
              }());
    }
    // Every edge/triangle resolves through the block-sliced binary search.
    for (Id e = 0; e < index.n_edges(); ++e)
      REQUIRE(index.find_edge(index.edges[std::size_t(e)][0], index.edges[std::size_t(e)][1]) == e);
    for (Id f = 0; f < index.n_triangles(); ++f) {
      const auto& tri = index.triangles[std::size_t(f)];
      REQUIRE(index.find_triangle(tri[0], tri[1], tri[2]) == f);
    }
  }
}

TEST_CASE("memory meter tracks a high-water mark", "[metrics]") {
  MemoryMeter meter;
  meter.add(100);
  meter.add(50);
  meter.sub(120);
  meter.add(10);
  REQUIRE(meter.current_bytes() == 40);
  REQUIRE(meter.peak_bytes() == 150);
  meter.reset();
  REQUIRE(meter.peak_bytes() == 0);
}

TEST_CASE("mix64 is order-sensitive and nonzero on small ids", "[metrics]") {
  REQUIRE(mix64(1, 2) != mix64(2, 1));
  REQUIRE(mix64(0) != 0);
  std::set<std::uint64_t> values;
  for (std::uint64_t i = 0; i < 1000; ++i) values.insert(mix64(i));
  REQUIRE(values.size() == 1000);
}
