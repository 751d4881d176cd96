#pragma once

// Independent reference evaluations shared by the unit and acceptance tests.

#include <cmath>
#include <random>
#include <vector>

#include "gcfv/mesh.hpp"
#include "gcfv/operators.hpp"

namespace oracles {

using gcfv::CellField;
using gcfv::CellVectorField;
using gcfv::Index;
using gcfv::Mesh;
using gcfv::Vec3;

inline CellField random_field(const Mesh& mesh, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CellField u(mesh.n_cells());
  for (double& x : u) x = dist(rng);
  return u;
}

// Internal-face flux written with the J tensor and the b-vectors, using the
// cell diffusivities. Geometry is recomputed from the mesh primitives.
inline double special_vector_flux(const Mesh& mesh, const CellField& alpha, const CellField& u,
                                  const CellVectorField& grad, Index f) {
  const Index k = mesh.owner(f), l = mesh.neighbour(f);
  const Vec3 n = mesh.face_normal(f);
  const double area = mesh.face_area(f);
  const Vec3 xs = mesh.face_centroid(f);
  const double dk = gcfv::dot(xs - mesh.cell_center(k), n);
  const double dl = gcfv::dot(mesh.cell_center(l) - xs, n);
  const double lam = dl / (dk + dl);
  const Vec3 delta = mesh.cell_center(l) - mesh.cell_center(k);
  const Vec3 i = delta / gcfv::norm(delta);
  const double ni = gcfv::dot(i, n);
  // J n = n - i (i.n) / (i.n)^2
  const Vec3 jn = n - i / ni;
  const Vec3 b_kl = area * lam * lam * jn;
  const Vec3 b_lk = area * (1 - lam) * (1 - lam) * (-1.0 * jn);
  const double alpha_face = lam * alpha[k] + (1 - lam) * alpha[l];
  const double tau = area / (dk + dl);
  return alpha_face * tau * (u[k] - u[l]) - alpha[k] * gcfv::dot(grad[k], b_kl) +
         alpha[l] * gcfv::dot(grad[l], b_lk) -
         area * gcfv::dot(alpha[k] * grad[l] + alpha[l] * grad[k], lam * (1 - lam) * jn);
}

// [u, v] with unit diffusivity, face by face.
inline double parallel_product_unit(const Mesh& mesh, const CellField& u, const CellField& v) {
  double s = 0.0;
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    const Index k = mesh.owner(f);
    const Vec3 n = mesh.face_normal(f);
    const double dk = gcfv::dot(mesh.face_centroid(f) - mesh.cell_center(k), n);
    if (mesh.is_internal(f)) {
      const Index l = mesh.neighbour(f);
      const double dl = gcfv::dot(mesh.cell_center(l) - mesh.face_centroid(f), n);
      s += mesh.face_area(f) / (dk + dl) * (u[k] - u[l]) * (v[k] - v[l]);
    } else {
      s += mesh.face_area(f) / dk * u[k] * v[k];
    }
  }
  return s;
}

}  // namespace oracles
