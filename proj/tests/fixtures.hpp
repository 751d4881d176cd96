#pragma once

#include <random>
#include <vector>

#include "gcfv/mesh.hpp"
#include "gcfv/mesh_builder.hpp"

namespace fixtures {

using gcfv::Index;
using gcfv::Vec3;

// Faces of the box with corner ids c[i + 2j + 4k], outward.
inline gcfv::CellFaceLoops box_faces(const Index c[8]) {
  auto v = [&](int i, int j, int k) { return c[i + 2 * j + 4 * k]; };
  return {
      {v(0, 0, 0), v(0, 0, 1), v(0, 1, 1), v(0, 1, 0)}, {v(1, 0, 0), v(1, 1, 0), v(1, 1, 1), v(1, 0, 1)},
      {v(0, 0, 0), v(1, 0, 0), v(1, 0, 1), v(0, 0, 1)}, {v(0, 1, 0), v(0, 1, 1), v(1, 1, 1), v(1, 1, 0)},
      {v(0, 0, 0), v(0, 1, 0), v(1, 1, 0), v(1, 0, 0)}, {v(0, 0, 1), v(1, 0, 1), v(1, 1, 1), v(0, 1, 1)},
  };
}

// One hexahedron from eight corners ordered i + 2j + 4k.
inline gcfv::MeshData single_hex(const std::vector<Vec3>& corners) {
  const Index c[8] = {0, 1, 2, 3, 4, 5, 6, 7};
  return gcfv::assemble_mesh(corners, {box_faces(c)});
}

inline gcfv::MeshData unit_cube() {
  std::vector<Vec3> p;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) p.push_back({double(i), double(j), double(k)});
  return single_hex(p);
}

inline gcfv::MeshData box(double lx, double ly, double lz) {
  std::vector<Vec3> p;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) p.push_back({i * lx, j * ly, k * lz});
  return single_hex(p);
}

// Two unit cubes side by side along x: 12 points, 11 faces, 1 internal.
inline gcfv::MeshData two_cubes() {
  std::vector<Vec3> p;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 3; ++i) p.push_back({double(i), double(j), double(k)});
  auto id = [](int i, int j, int k) { return static_cast<Index>(i + 3 * (j + 2 * k)); };
  const Index a[8] = {id(0, 0, 0), id(1, 0, 0), id(0, 1, 0), id(1, 1, 0),
                      id(0, 0, 1), id(1, 0, 1), id(0, 1, 1), id(1, 1, 1)};
  const Index b[8] = {id(1, 0, 0), id(2, 0, 0), id(1, 1, 0), id(2, 1, 0),
                      id(1, 0, 1), id(2, 0, 1), id(1, 1, 1), id(2, 1, 1)};
  return gcfv::assemble_mesh(p, {box_faces(a), box_faces(b)});
}

inline gcfv::MeshData reference_tet() {
  std::vector<Vec3> p = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  return gcfv::assemble_mesh(p, {{{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}}});
}

// Signed volume of the tetrahedron (a, b, c, d).
inline double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return gcfv::dot(gcfv::cross(b - a, c - a), d - a) / 6.0;
}

}  // namespace fixtures
