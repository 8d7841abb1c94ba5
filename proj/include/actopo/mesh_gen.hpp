// actopo: synthetic test meshes.
//
// generate_grid builds a structured nx x ny x nz vertex grid and splits each
// cubical cell into 6 tetrahedra.  The subdivision is the reflected variant:
// each cell's local corner frame is mirrored along every axis on which the
// cell index is odd, so face diagonals of adjacent cells coincide and the
// result is a conforming triangulation of the box.  Mirroring also spreads
// the diagonal directions, which gives interior blocks of a grid partition
// the full set of in-plane neighbors.
#pragma once

#include <array>
#include <stdexcept>
#include <string>

#include "actopo/mesh.hpp"

namespace actopo {

inline Mesh generate_grid(Id nx, Id ny, Id nz) {
  if (nx < 2 || ny < 2 || nz < 2)
    throw MeshError("empty tetrahedralization: a " + std::to_string(nx) + "x" +
                    std::to_string(ny) + "x" + std::to_string(nz) +
                    " vertex grid has no cubes to split");

  Mesh mesh;
  mesh.coords.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
                      static_cast<std::size_t>(nz));
  for (Id z = 0; z < nz; ++z)
    for (Id y = 0; y < ny; ++y)
      for (Id x = 0; x < nx; ++x)
        mesh.coords.push_back({double(x), double(y), double(z)});

  const auto vertex = [&](Id x, Id y, Id z) { return x + nx * (y + ny * z); };

  // The 6 Kuhn tets of a unit cube: each follows a monotone corner path
  // (0,0,0) -> (1,1,1), one per permutation of the three axis steps.
  static constexpr int kAxisOrder[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

  mesh.tets.reserve(static_cast<std::size_t>(nx - 1) * static_cast<std::size_t>(ny - 1) *
                    static_cast<std::size_t>(nz - 1) * 6);
  for (Id cz = 0; cz + 1 < nz; ++cz)
    for (Id cy = 0; cy + 1 < ny; ++cy)
      for (Id cx = 0; cx + 1 < nx; ++cx) {
        const bool flip[3] = {(cx & 1) != 0, (cy & 1) != 0, (cz & 1) != 0};
        const auto corner = [&](const int local[3]) {
          const Id x = cx + (flip[0] ? 1 - local[0] : local[0]);
          const Id y = cy + (flip[1] ? 1 - local[1] : local[1]);
          const Id z = cz + (flip[2] ? 1 - local[2] : local[2]);
          return vertex(x, y, z);
        };
        for (const auto& order : kAxisOrder) {
          int p[3] = {0, 0, 0};
          std::array<VertexId, 4> tet;
          tet[0] = corner(p);
          for (int step = 0; step < 3; ++step) {
            p[order[step]] = 1;
            tet[static_cast<std::size_t>(step) + 1] = corner(p);
          }
          mesh.tets.push_back(tet);
        }
      }

  return mesh;
}

// Parses "NX,NY,NZ" as used by the command line's gen: mesh source.
inline Mesh generate_grid_spec(const std::string& dims) {
  std::array<Id, 3> n{};
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t used = 0;
    try {
      n[static_cast<std::size_t>(i)] = static_cast<Id>(std::stol(dims.substr(pos), &used));
    } catch (const std::exception&) {
      throw std::invalid_argument("bad grid spec '" + dims + "', expected NX,NY,NZ");
    }
    pos += used;
    if (i < 2) {
      if (pos >= dims.size() || dims[pos] != ',')
        throw std::invalid_argument("bad grid spec '" + dims + "', expected NX,NY,NZ");
      ++pos;
    }
  }
  if (pos != dims.size()) throw std::invalid_argument("bad grid spec '" + dims + "', expected NX,NY,NZ");
  return generate_grid(n[0], n[1], n[2]);
}

}  // namespace actopo
