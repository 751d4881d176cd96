#include "gcfv/operators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gcfv/errors.hpp"

namespace gcfv {

namespace {

constexpr double kMinNormalAlignment = 1e-12;
constexpr double kSingularStencil = 1e-14;

void require_cells(const Mesh& mesh, std::size_t size, const char* what) {
  if (size != mesh.n_cells()) {
    std::ostringstream os;
    os << what << " has " << size << " entries, mesh has " << mesh.n_cells() << " cells";
    throw std::invalid_argument(os.str());
  }
}

void require_faces(const Mesh& mesh, std::size_t size, const char* what) {
  if (size != mesh.n_faces()) {
    std::ostringstream os;
    os << what << " has " << size << " entries, mesh has " << mesh.n_faces() << " faces";
    throw std::invalid_argument(os.str());
  }
}

double owner_weight(const Mesh& mesh, Index f) {
  if (!mesh.is_internal(f)) return 1.0;
  return mesh.d_neighbour(f) / (mesh.d_owner(f) + mesh.d_neighbour(f));
}

}  // namespace

Vec3 FaceCoefficients::a_owner(const Mesh& mesh, Index f) const {
  return mesh.face_area(f) * lambda[f] * mesh.face_normal(f);
}

Vec3 FaceCoefficients::a_neighbour(const Mesh& mesh, Index f) const {
  return -mesh.face_area(f) * (1.0 - lambda[f]) * mesh.face_normal(f);
}

Mat3 FaceCoefficients::j_tensor(Index f) const {
  return Mat3::identity() - Mat3::outer(i[f], i[f]) * (1.0 / (n_dot_i[f] * n_dot_i[f]));
}

Mat3 FaceCoefficients::gamma_parallel(Index f) const {
  return Mat3::outer(i[f], i[f]) * (alpha[f] / (n_dot_i[f] * n_dot_i[f]));
}

Mat3 FaceCoefficients::gamma_nonparallel(Index f) const { return alpha[f] * j_tensor(f); }

Vec3 FaceCoefficients::b_owner(const Mesh& mesh, Index f) const {
  return mesh.face_area(f) * lambda[f] * lambda[f] * (j_tensor(f) * mesh.face_normal(f));
}

Vec3 FaceCoefficients::b_neighbour(const Mesh& mesh, Index f) const {
  const double w = 1.0 - lambda[f];
  return mesh.face_area(f) * w * w * (j_tensor(f) * -mesh.face_normal(f));
}

FaceCoefficients face_coefficients(const Mesh& mesh, const CellField& alpha, FaceDiffusivity mode) {
  require_cells(mesh, alpha.size(), "diffusivity");
  for (double a : alpha)
    if (!(a > 0.0)) throw std::invalid_argument("diffusivity must be positive");

  const Index nf = mesh.n_faces();
  FaceCoefficients fc;
  fc.tau.resize(nf);
  fc.lambda.resize(nf);
  fc.alpha.resize(nf);
  fc.n_dot_i.resize(nf);
  fc.i.resize(nf);
  fc.k.resize(nf);

  for (Index f = 0; f < nf; ++f) {
    const Index k = mesh.owner(f);
    const Vec3& n = mesh.face_normal(f);
    const double dk = mesh.d_owner(f);
    Vec3 delta;
    if (mesh.is_internal(f)) {
      const Index l = mesh.neighbour(f);
      const double dl = mesh.d_neighbour(f);
      const double d = dk + dl;
      fc.tau[f] = mesh.face_area(f) / d;
      fc.lambda[f] = dl / d;
      fc.alpha[f] = mode == FaceDiffusivity::linear ? fc.lambda[f] * alpha[k] + (1.0 - fc.lambda[f]) * alpha[l]
                                                    : (dk * alpha[k] + dl * alpha[l]) / d;
      delta = mesh.cell_center(l) - mesh.cell_center(k);
    } else {
      fc.tau[f] = mesh.face_area(f) / dk;
      fc.lambda[f] = 1.0;
      fc.alpha[f] = alpha[k];
      delta = mesh.face_centroid(f) - mesh.cell_center(k);
    }
    fc.i[f] = delta / norm(delta);
    fc.n_dot_i[f] = dot(n, fc.i[f]);
    if (!(fc.n_dot_i[f] > kMinNormalAlignment)) {
      std::ostringstream os;
      os << "face " << f << ": n.i = " << fc.n_dot_i[f];
      throw FaceDegenerate(os.str());
    }
    fc.k[f] = n - fc.i[f] / fc.n_dot_i[f];
  }
  return fc;
}

FaceCoefficients face_coefficients(const Mesh& mesh) {
  return face_coefficients(mesh, CellField(mesh.n_cells(), 1.0));
}

CellVectorField gauss_gradient(const Mesh& mesh, const CellField& u) {
  require_cells(mesh, u.size(), "field");
  CellVectorField g(mesh.n_cells());
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    const Index k = mesh.owner(f);
    const Vec3 sn = mesh.face_area(f) * mesh.face_normal(f);
    if (mesh.is_internal(f)) {
      const Index l = mesh.neighbour(f);
      const double w = owner_weight(mesh, f);
      const double uf = w * u[k] + (1.0 - w) * u[l];
      g[k] += (uf - u[k]) * sn;
      g[l] -= (uf - u[l]) * sn;
    } else {
      g[k] -= u[k] * sn;
    }
  }
  for (Index c = 0; c < mesh.n_cells(); ++c) g[c] /= mesh.cell_volume(c);
  return g;
}

LeastSquaresGradient::LeastSquaresGradient(const Mesh& mesh)
    : mesh_(&mesh), v_owner_(mesh.n_faces()), v_neighbour_(mesh.n_internal_faces()) {
  std::vector<Mat3> w(mesh.n_cells());
  std::vector<double> wk(mesh.n_faces()), wl(mesh.n_internal_faces());
  std::vector<Vec3> dx(mesh.n_faces());
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    const Index k = mesh.owner(f);
    if (mesh.is_internal(f)) {
      const Index l = mesh.neighbour(f);
      dx[f] = mesh.cell_center(l) - mesh.cell_center(k);
      const double base = mesh.face_area(f) / norm2(dx[f]);
      const double d = mesh.d_owner(f) + mesh.d_neighbour(f);
      wk[f] = mesh.d_owner(f) / d * base;
      wl[f] = mesh.d_neighbour(f) / d * base;
      const Mat3 xx = Mat3::outer(dx[f], dx[f]);
      w[k] += wk[f] * xx;
      w[l] += wl[f] * xx;
    } else {
      dx[f] = mesh.face_centroid(f) - mesh.cell_center(k);
      wk[f] = mesh.face_area(f) / norm2(dx[f]);
      w[k] += wk[f] * Mat3::outer(dx[f], dx[f]);
    }
  }
  std::vector<Mat3> inv(mesh.n_cells());
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    const double tr = w[c](0, 0) + w[c](1, 1) + w[c](2, 2);
    const double scale = tr * tr * tr / 27.0;
    if (!(w[c].det() > kSingularStencil * scale)) {
      std::ostringstream os;
      os << "cell " << c << ": singular least-squares weighting tensor";
      throw SingularStencil(os.str(), c);
    }
    inv[c] = w[c].inverse();
  }
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    v_owner_[f] = wk[f] * (inv[mesh.owner(f)] * dx[f]);
    if (mesh.is_internal(f)) v_neighbour_[f] = wl[f] * (inv[mesh.neighbour(f)] * -dx[f]);
  }
}

const Vec3& LeastSquaresGradient::stencil(Index c, Index f) const {
  if (mesh_->owner(f) == c) return v_owner_[f];
  if (mesh_->is_internal(f) && mesh_->neighbour(f) == c) return v_neighbour_[f];
  throw std::invalid_argument("face is not on the cell");
}

CellVectorField LeastSquaresGradient::operator()(const CellField& u,
                                                 std::optional<std::span<const double>> boundary_values) const {
  const Mesh& mesh = *mesh_;
  require_cells(mesh, u.size(), "field");
  if (boundary_values) require_faces(mesh, boundary_values->size(), "boundary values");
  CellVectorField g(mesh.n_cells());
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    const Index k = mesh.owner(f);
    if (mesh.is_internal(f)) {
      const Index l = mesh.neighbour(f);
      g[k] += (u[l] - u[k]) * v_owner_[f];
      g[l] += (u[k] - u[l]) * v_neighbour_[f];
    } else {
      const double us = boundary_values ? (*boundary_values)[f] : 0.0;
      g[k] += (us - u[k]) * v_owner_[f];
    }
  }
  return g;
}

CellVectorField least_squares_gradient(const Mesh& mesh, const CellField& u) {
  return LeastSquaresGradient(mesh)(u);
}

CellVectorField cell_gradient(const Mesh& mesh, const CellField& u, GradScheme scheme) {
  return scheme == GradScheme::gauss ? gauss_gradient(mesh, u) : least_squares_gradient(mesh, u);
}

Vec3 face_gradient(const Mesh& mesh, const FaceCoefficients& fc, const CellVectorField& grad,
                   const CellField& u, Index f, FaceGradient rule) {
  const Index k = mesh.owner(f);
  if (mesh.is_internal(f)) {
    const Index l = mesh.neighbour(f);
    const double w = rule == FaceGradient::linear ? fc.lambda[f] : 0.5;
    return w * grad[k] + (1.0 - w) * grad[l];
  }
  const Vec3& n = mesh.face_normal(f);
  return (-u[k] / mesh.d_owner(f)) * n + (grad[k] - dot(n, grad[k]) * n);
}

FaceField two_point_fluxes(const Mesh& mesh, const FaceCoefficients& fc, const CellField& u) {
  require_cells(mesh, u.size(), "field");
  FaceField flux(mesh.n_faces());
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    const double jump = mesh.is_internal(f) ? u[mesh.owner(f)] - u[mesh.neighbour(f)] : u[mesh.owner(f)];
    flux[f] = fc.alpha[f] * fc.tau[f] * jump;
  }
  return flux;
}

FaceField correction_fluxes(const Mesh& mesh, const FaceCoefficients& fc, const CellVectorField& grad,
                            const CellField& u, FaceGradient rule) {
  require_cells(mesh, u.size(), "field");
  require_cells(mesh, grad.size(), "gradient");
  FaceField flux(mesh.n_faces());
  for (Index f = 0; f < mesh.n_faces(); ++f)
    flux[f] = -fc.alpha[f] * mesh.face_area(f) * dot(fc.k[f], face_gradient(mesh, fc, grad, u, f, rule));
  return flux;
}

FaceField corrected_fluxes(const Mesh& mesh, const FaceCoefficients& fc, const CellVectorField& grad,
                           const CellField& u, FaceGradient rule) {
  FaceField flux = two_point_fluxes(mesh, fc, u);
  const FaceField corr = correction_fluxes(mesh, fc, grad, u, rule);
  for (Index f = 0; f < mesh.n_faces(); ++f) flux[f] += corr[f];
  return flux;
}

FaceField corrected_fluxes(const Mesh& mesh, const FaceCoefficients& fc, const CellField& u, GradScheme scheme) {
  return corrected_fluxes(mesh, fc, cell_gradient(mesh, u, scheme), u);
}

CellField flux_divergence(const Mesh& mesh, const FaceField& flux) {
  require_faces(mesh, flux.size(), "flux");
  CellField div(mesh.n_cells(), 0.0);
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    div[mesh.owner(f)] += flux[f];
    if (mesh.is_internal(f)) div[mesh.neighbour(f)] -= flux[f];
  }
  return div;
}

double parallel_inner_product(const Mesh& mesh, const FaceCoefficients& fc, const CellField& u,
                              const CellField& v) {
  require_cells(mesh, u.size(), "field");
  require_cells(mesh, v.size(), "field");
  double s = 0.0;
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    const Index k = mesh.owner(f);
    if (mesh.is_internal(f)) {
      const Index l = mesh.neighbour(f);
      s += fc.alpha[f] * fc.tau[f] * (u[k] - u[l]) * (v[k] - v[l]);
    } else {
      s += fc.alpha[f] * fc.tau[f] * u[k] * v[k];
    }
  }
  return s;
}

double discrete_norm(const Mesh& mesh, const CellField& u) {
  require_cells(mesh, u.size(), "field");
  double s = 0.0;
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    const Index k = mesh.owner(f);
    if (mesh.is_internal(f)) {
      const double jump = u[k] - u[mesh.neighbour(f)];
      s += mesh.face_area(f) / (mesh.d_owner(f) + mesh.d_neighbour(f)) * jump * jump;
    } else {
      s += mesh.face_area(f) / mesh.d_owner(f) * u[k] * u[k];
    }
  }
  return std::sqrt(s);
}

double l2_norm(const Mesh& mesh, const CellField& u) {
  require_cells(mesh, u.size(), "field");
  double s = 0.0;
  for (Index c = 0; c < mesh.n_cells(); ++c) s += mesh.cell_volume(c) * u[c] * u[c];
  return std::sqrt(s);
}

double l2_norm(const Mesh& mesh, const CellVectorField& g) {
  require_cells(mesh, g.size(), "vector field");
  double s = 0.0;
  for (Index c = 0; c < mesh.n_cells(); ++c) s += mesh.cell_volume(c) * norm2(g[c]);
  return std::sqrt(s);
}

BiasedGradients biased_gradients(const Mesh& mesh, const FaceCoefficients& fc, const CellField& u) {
  require_cells(mesh, u.size(), "field");
  const Index nc = mesh.n_cells();
  BiasedGradients bg{CellVectorField(nc), CellVectorField(nc), CellVectorField(nc)};
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    const Index k = mesh.owner(f);
    const double a = fc.alpha[f];
    const Vec3 along = fc.i[f] / fc.n_dot_i[f];
    const Mat3 gn = fc.gamma_nonparallel(f);
    const Vec3 ak = fc.a_owner(mesh, f);
    const double area = mesh.face_area(f);
    if (mesh.is_internal(f)) {
      const Index l = mesh.neighbour(f);
      const double jump = u[l] - u[k];
      bg.full[k] += a * jump * ak;
      bg.parallel[k] += a * area * fc.lambda[f] * jump * along;
      bg.nonparallel[k] += jump * (gn * ak);
      const Vec3 al = fc.a_neighbour(mesh, f);
      bg.full[l] -= a * jump * al;
      bg.parallel[l] += a * area * (1.0 - fc.lambda[f]) * jump * along;
      bg.nonparallel[l] -= jump * (gn * al);
    } else {
      bg.full[k] -= a * u[k] * ak;
      bg.parallel[k] -= a * area * u[k] * along;
      bg.nonparallel[k] -= u[k] * (gn * ak);
    }
  }
  for (Index c = 0; c < nc; ++c) {
    const double inv = 1.0 / mesh.cell_volume(c);
    bg.full[c] *= inv;
    bg.parallel[c] *= inv;
    bg.nonparallel[c] *= inv;
  }
  return bg;
}

CellVectorField gamma_nonparallel_gradient(const Mesh& mesh, const FaceCoefficients& fc, const CellField& v) {
  return biased_gradients(mesh, fc, v).nonparallel;
}

double nonparallel_bilinear(const Mesh& mesh, const FaceCoefficients& fc, const CellVectorField& grad_u,
                            const CellField& v) {
  require_cells(mesh, grad_u.size(), "gradient");
  const CellVectorField gv = gamma_nonparallel_gradient(mesh, fc, v);
  double s = 0.0;
  for (Index c = 0; c < mesh.n_cells(); ++c) s += mesh.cell_volume(c) * dot(grad_u[c], gv[c]);
  return s;
}

DistortionCheck distortion_condition(const Mesh& mesh, const CellField& u) {
  const FaceCoefficients fc = face_coefficients(mesh);
  const CellVectorField gd = gauss_gradient(mesh, u);
  const BiasedGradients bg = biased_gradients(mesh, fc, u);
  DistortionCheck d;
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    d.lhs += mesh.cell_volume(c) * dot(gd[c], bg.full[c]);
    d.rhs += mesh.cell_volume(c) * dot(gd[c], bg.parallel[c]);
  }
  d.margin = d.lhs - d.rhs;
  d.satisfied = d.lhs >= d.rhs - 1e-12 * std::fabs(d.lhs);
  return d;
}

}  // namespace gcfv
