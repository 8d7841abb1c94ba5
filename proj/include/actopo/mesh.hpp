// actopo: tetrahedral mesh container and the .tmsh text format.
//
// A mesh is a vertex-indexed tetrahedron soup plus optional per-vertex block
// labels and an optional per-vertex scalar field.  Edges and triangles are
// not stored; they are derived by the block index.
//
// .tmsh is line oriented:
//
//   tmsh 1
//   vertices <nV>
//   <x> <y> <z>          (nV lines)
//   tets <nT>
//   <a> <b> <c> <d>      (nT lines)
//   blocks <nB>          (optional section)
//   <label>              (nV lines)
//   scalars              (optional section)
//   <value>              (nV lines)
//
// Blank lines and lines starting with '#' are ignored everywhere.
#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "actopo/ids.hpp"

namespace actopo {

struct Mesh {
  std::vector<std::array<double, 3>> coords;
  std::vector<std::array<VertexId, 4>> tets;
  std::vector<BlockId> block_of;  // empty until a partition is applied
  BlockId n_blocks = 0;
  std::vector<double> scalars;  // optional per-vertex field

  Id n_vertices() const { return static_cast<Id>(coords.size()); }
  Id n_tets() const { return static_cast<Id>(tets.size()); }
  bool has_blocks() const { return !block_of.empty(); }
  bool has_scalars() const { return !scalars.empty(); }
};

struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::uint64_t tet_key(std::array<VertexId, 4> q) {
  // Order-independent tet identity: sort the quad, pack 4 x 16-bit ranks is
  // too small for large meshes, so hash the sorted ids instead.
  if (q[0] > q[1]) std::swap(q[0], q[1]);
  if (q[2] > q[3]) std::swap(q[2], q[3]);
  if (q[0] > q[2]) std::swap(q[0], q[2]);
  if (q[1] > q[3]) std::swap(q[1], q[3]);
  if (q[1] > q[2]) std::swap(q[1], q[2]);
  std::uint64_t h = 1469598103934665603ull;
  for (VertexId v : q) {
    h ^= static_cast<std::uint64_t>(std::uint32_t(v));
    h *= 1099511628211ull;
    h ^= h >> 29;
  }
  return h;
}

}  // namespace detail

// Checks the structural invariants every mesh must satisfy before any index
// is built on top of it.  Throws MeshError naming the first violation.
inline void validate_mesh(const Mesh& mesh) {
  const Id nv = mesh.n_vertices();
  if (mesh.n_tets() == 0) throw MeshError("mesh has no tetrahedra");

  std::vector<char> used(static_cast<std::size_t>(nv), 0);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(mesh.tets.size() * 2);
  for (Id t = 0; t < mesh.n_tets(); ++t) {
    const auto& q = mesh.tets[static_cast<std::size_t>(t)];
    for (VertexId v : q) {
      if (v < 0 || v >= nv)
        throw MeshError("tet " + std::to_string(t) + ": vertex id " + std::to_string(v) +
                        " out of range [0, " + std::to_string(nv) + ")");
      used[static_cast<std::size_t>(v)] = 1;
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (q[static_cast<std::size_t>(i)] == q[static_cast<std::size_t>(j)])
          throw MeshError("tet " + std::to_string(t) + ": repeated vertex " +
                          std::to_string(q[static_cast<std::size_t>(i)]));
    if (!seen.insert(detail::tet_key(q)).second)
      throw MeshError("tet " + std::to_string(t) + ": duplicate of an earlier tetrahedron");
  }
  for (Id v = 0; v < nv; ++v)
    if (!used[static_cast<std::size_t>(v)])
      throw MeshError("vertex " + std::to_string(v) + " belongs to no tetrahedron");

  if (mesh.has_blocks()) {
    if (static_cast<Id>(mesh.block_of.size()) != nv)
      throw MeshError("block labels cover " + std::to_string(mesh.block_of.size()) +
                      " vertices, mesh has " + std::to_string(nv));
    if (mesh.n_blocks <= 0) throw MeshError("block count must be positive");
    std::vector<char> nonempty(static_cast<std::size_t>(mesh.n_blocks), 0);
    BlockId prev = 0;
    for (Id v = 0; v < nv; ++v) {
      const BlockId b = mesh.block_of[static_cast<std::size_t>(v)];
      if (b < 0 || b >= mesh.n_blocks)
        throw MeshError("vertex " + std::to_string(v) + ": block label " + std::to_string(b) +
                        " out of range [0, " + std::to_string(mesh.n_blocks) + ")");
      if (b < prev)
        throw MeshError("block labels must be non-decreasing in vertex id (vertex " +
                        std::to_string(v) + " has label " + std::to_string(b) + " after " +
                        std::to_string(prev) + "); renumber vertices block by block");
      prev = b;
      nonempty[static_cast<std::size_t>(b)] = 1;
    }
    for (BlockId b = 0; b < mesh.n_blocks; ++b)
      if (!nonempty[static_cast<std::size_t>(b)])
        throw MeshError("block " + std::to_string(b) + " is empty");
  }

  if (mesh.has_scalars() && static_cast<Id>(mesh.scalars.size()) != nv)
    throw MeshError("scalar field covers " + std::to_string(mesh.scalars.size()) +
                    " vertices, mesh has " + std::to_string(nv));
}

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank, non-comment line split into whitespace tokens.
  bool next(std::vector<std::string>& tokens) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      tokens.clear();
      std::istringstream ss(line);
      std::string tok;
      while (ss >> tok) {
        if (tok[0] == '#') break;
        tokens.push_back(tok);
      }
      if (!tokens.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw MeshError("line " + std::to_string(line_no_) + ": " + what);
  }

  long line() const { return line_no_; }

 private:
  std::istream& in_;
  long line_no_ = 0;
};

inline long long parse_int(const std::string& tok, LineReader& r) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    r.fail("expected an integer, got '" + tok + "'");
  return value;
}

inline double parse_double(const std::string& tok, LineReader& r) {
  try {
    std::size_t pos = 0;
    const double value = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return value;
  } catch (const std::exception&) {
    r.fail("expected a number, got '" + tok + "'");
  }
}

}  // namespace detail

inline Mesh load_mesh(std::istream& in) {
  detail::LineReader reader(in);
  std::vector<std::string> tok;

  if (!reader.next(tok)) throw MeshError("empty input, expected 'tmsh 1' header");
  if (tok.size() != 2 || tok[0] != "tmsh" || tok[1] != "1")
    reader.fail("expected 'tmsh 1' header");

  if (!reader.next(tok) || tok.size() != 2 || tok[0] != "vertices")
    reader.fail("expected 'vertices <count>'");
  const long long nv = detail::parse_int(tok[1], reader);
  if (nv <= 0) reader.fail("vertex count must be positive");

  Mesh mesh;
  mesh.coords.reserve(static_cast<std::size_t>(nv));
  for (long long i = 0; i < nv; ++i) {
    if (!reader.next(tok)) throw MeshError("unexpected end of input in vertex section");
    if (tok.size() != 3) reader.fail("expected 3 coordinates");
    mesh.coords.push_back({detail::parse_double(tok[0], reader),
                           detail::parse_double(tok[1], reader),
                           detail::parse_double(tok[2], reader)});
  }

  if (!reader.next(tok) || tok.size() != 2 || tok[0] != "tets")
    reader.fail("expected 'tets <count>'");
  const long long nt = detail::parse_int(tok[1], reader);
  if (nt <= 0) reader.fail("tet count must be positive");
  mesh.tets.reserve(static_cast<std::size_t>(nt));
  for (long long i = 0; i < nt; ++i) {
    if (!reader.next(tok)) throw MeshError("unexpected end of input in tet section");
    if (tok.size() != 4) reader.fail("expected 4 vertex ids");
    std::array<VertexId, 4> q;
    for (int k = 0; k < 4; ++k) {
      const long long v = detail::parse_int(tok[static_cast<std::size_t>(k)], reader);
      if (v < 0 || v >= nv)
        reader.fail("vertex id " + std::to_string(v) + " out of range [0, " + std::to_string(nv) +
                    ")");
      q[static_cast<std::size_t>(k)] = static_cast<VertexId>(v);
    }
    mesh.tets.push_back(q);
  }

  bool more = reader.next(tok);
  if (more && tok[0] == "blocks") {
    if (tok.size() != 2) reader.fail("expected 'blocks <count>'");
    const long long nb = detail::parse_int(tok[1], reader);
    if (nb <= 0) reader.fail("block count must be positive");
    mesh.n_blocks = static_cast<BlockId>(nb);
    mesh.block_of.reserve(static_cast<std::size_t>(nv));
    for (long long i = 0; i < nv; ++i) {
      if (!reader.next(tok)) throw MeshError("unexpected end of input in block section");
      if (tok.size() != 1) reader.fail("expected one block label per line");
      mesh.block_of.push_back(static_cast<BlockId>(detail::parse_int(tok[0], reader)));
    }
    more = reader.next(tok);
  }
  if (more && tok[0] == "scalars") {
    if (tok.size() != 1) reader.fail("expected bare 'scalars'");
    mesh.scalars.reserve(static_cast<std::size_t>(nv));
    for (long long i = 0; i < nv; ++i) {
      if (!reader.next(tok)) throw MeshError("unexpected end of input in scalar section");
      if (tok.size() != 1) reader.fail("expected one scalar value per line");
      mesh.scalars.push_back(detail::parse_double(tok[0], reader));
    }
    more = reader.next(tok);
  }
  if (more) reader.fail("unexpected content after mesh sections: '" + tok[0] + "'");

  validate_mesh(mesh);
  return mesh;
}

inline void save_mesh(std::ostream& out, const Mesh& mesh) {
  char buf[96];
  out << "tmsh 1\n";
  out << "vertices " << mesh.n_vertices() << "\n";
  for (const auto& c : mesh.coords) {
    // %.17g preserves doubles exactly across a save/load round trip.
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", c[0], c[1], c[2]);
    out << buf;
  }
  out << "tets " << mesh.n_tets() << "\n";
  for (const auto& q : mesh.tets) out << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << "\n";
  if (mesh.has_blocks()) {
    out << "blocks " << mesh.n_blocks << "\n";
    for (BlockId b : mesh.block_of) out << b << "\n";
  }
  if (mesh.has_scalars()) {
    out << "scalars\n";
    for (double s : mesh.scalars) {
      std::snprintf(buf, sizeof buf, "%.17g\n", s);
      out << buf;
    }
  }
}

inline Mesh load_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open '" + path + "'");
  try {
    return load_mesh(in);
  } catch (const MeshError& e) {
    throw MeshError(path + ": " + e.what());
  }
}

inline void save_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot open '" + path + "' for writing");
  save_mesh(out, mesh);
  out.flush();
  if (!out) throw MeshError("write to '" + path + "' failed");
}

}  // namespace actopo
