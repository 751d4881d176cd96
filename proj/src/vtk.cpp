#include "gcfv/vtk.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "gcfv/errors.hpp"

namespace gcfv {

namespace {

constexpr int kTetra = 10;
constexpr int kHexahedron = 12;
constexpr int kWedge = 13;
constexpr int kPolyhedron = 42;

// Face loop of `f` oriented out of `cell`.
std::vector<Index> outward_loop(const Mesh& mesh, Index cell, Index f) {
  const auto v = mesh.face_vertices(f);
  std::vector<Index> loop(v.begin(), v.end());
  if (mesh.owner(f) != cell) std::reverse(loop.begin(), loop.end());
  return loop;
}

// Vertex ordering for a native cell type, or empty if the cell does not fit.
std::vector<Index> native_connectivity(const Mesh& mesh, Index cell, int& type) {
  const auto faces = mesh.cell_faces(cell);
  const auto verts = mesh.cell_vertices(cell);
  std::size_t tris = 0, quads = 0;
  for (Index f : faces) {
    const std::size_t k = mesh.face_vertices(f).size();
    tris += k == 3;
    quads += k == 4;
  }
  const Index base_size = [&] {
    if (faces.size() == 4 && tris == 4 && verts.size() == 4) return Index{3};
    if (faces.size() == 6 && quads == 6 && verts.size() == 8) return Index{4};
    if (faces.size() == 5 && tris == 2 && quads == 3 && verts.size() == 6) return Index{3};
    return Index{0};
  }();
  if (base_size == 0) return {};
  type = verts.size() == 4 ? kTetra : verts.size() == 8 ? kHexahedron : kWedge;

  Index base_face = faces[0];
  for (Index f : faces)
    if (mesh.face_vertices(f).size() == base_size) {
      base_face = f;
      break;
    }
  std::vector<Index> order = outward_loop(mesh, cell, base_face);
  // Tetra and hexahedron bases face inwards, the wedge base outwards.
  if (type != kWedge) std::reverse(order.begin(), order.end());

  if (type == kTetra) {
    for (Index v : verts)
      if (std::find(order.begin(), order.end(), v) == order.end()) order.push_back(v);
    return order;
  }

  // Pair each base vertex with its neighbour along an edge leaving the base.
  std::map<Index, std::vector<Index>> adjacent;
  for (Index f : faces) {
    const auto loop = mesh.face_vertices(f);
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Index a = loop[i], b = loop[(i + 1) % loop.size()];
      adjacent[a].push_back(b);
      adjacent[b].push_back(a);
    }
  }
  const std::vector<Index> base = order;
  for (Index v : base) {
    Index partner = static_cast<Index>(-1);
    for (Index w : adjacent[v])
      if (std::find(base.begin(), base.end(), w) == base.end()) {
        if (partner != static_cast<Index>(-1) && partner != w) return {};
        partner = w;
      }
    if (partner == static_cast<Index>(-1)) return {};
    order.push_back(partner);
  }
  std::vector<Index> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return {};
  return order;
}

void check_fields(const Mesh& mesh, const std::vector<NamedField>& fields) {
  for (const auto& [name, values] : fields) {
    if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos)
      throw std::invalid_argument("VTK field names must be non-empty without whitespace: '" + name + "'");
    if (values.size() != mesh.n_cells())
      throw std::invalid_argument("field '" + name + "' does not have one value per cell");
  }
}

void append_number(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

int vtk_cell_type(const Mesh& mesh, Index cell) {
  int type = kPolyhedron;
  if (native_connectivity(mesh, cell, type).empty()) return kPolyhedron;
  return type;
}

std::string vtk_string(const Mesh& mesh, const std::vector<NamedField>& fields) {
  check_fields(mesh, fields);
  std::string out = "# vtk DataFile Version 4.2\ngcfv mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out += "POINTS " + std::to_string(mesh.n_points()) + " double\n";
  for (const Vec3& p : mesh.points()) {
    append_number(out, p.x);
    out += ' ';
    append_number(out, p.y);
    out += ' ';
    append_number(out, p.z);
    out += '\n';
  }

  std::vector<std::vector<Index>> entries(mesh.n_cells());
  std::vector<int> types(mesh.n_cells());
  std::size_t total = 0;
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    int type = kPolyhedron;
    std::vector<Index> conn = native_connectivity(mesh, c, type);
    if (conn.empty()) {
      type = kPolyhedron;
      const auto faces = mesh.cell_faces(c);
      conn.push_back(faces.size());
      for (Index f : faces) {
        const auto loop = outward_loop(mesh, c, f);
        conn.push_back(loop.size());
        conn.insert(conn.end(), loop.begin(), loop.end());
      }
    }
    types[c] = type;
    total += conn.size() + 1;
    entries[c] = std::move(conn);
  }
  out += "CELLS " + std::to_string(mesh.n_cells()) + ' ' + std::to_string(total) + '\n';
  for (const auto& e : entries) {
    out += std::to_string(e.size());
    for (Index v : e) out += ' ' + std::to_string(v);
    out += '\n';
  }
  out += "CELL_TYPES " + std::to_string(mesh.n_cells()) + '\n';
  for (int t : types) out += std::to_string(t) + '\n';

  if (!fields.empty()) {
    out += "CELL_DATA " + std::to_string(mesh.n_cells()) + '\n';
    for (const auto& [name, values] : fields) {
      out += "SCALARS " + name + " double 1\nLOOKUP_TABLE default\n";
      for (double v : values) {
        append_number(out, v);
        out += '\n';
      }
    }
  }
  return out;
}

void export_vtk(const Mesh& mesh, const std::vector<NamedField>& fields, const std::filesystem::path& path) {
  const std::string text = vtk_string(mesh, fields);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw Error("failed writing " + path.string());
}

}  // namespace gcfv
