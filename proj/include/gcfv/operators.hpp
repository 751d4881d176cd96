#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gcfv/mesh.hpp"

namespace gcfv {

/// One scalar per cell.
using CellField = std::vector<double>;
/// One 3-vector per cell.
using CellVectorField = std::vector<Vec3>;
/// One scalar per face, oriented owner to neighbour.
using FaceField = std::vector<double>;

enum class GradScheme { gauss, least_squares };
enum class FaceDiffusivity { linear, diamond };
enum class FaceGradient { linear, midpoint };

/// Per-face quantities of the corrected scheme.
///
/// `i` is the unit vector from the owner centre to the neighbour centre
/// (boundary: to the face centroid), `k = n - i / (n.i)` the correction
/// vector and `lambda = d_L / (d_K + d_L)` the owner weight of the linear
/// interpolation (1 on boundary faces).
struct FaceCoefficients {
  std::vector<double> tau;
  std::vector<double> lambda;
  std::vector<double> alpha;
  std::vector<double> n_dot_i;
  std::vector<Vec3> i;
  std::vector<Vec3> k;

  /// a_{K,L} (a_{K,sigma} on the boundary) for the owner side.
  Vec3 a_owner(const Mesh& mesh, Index f) const;
  /// a_{L,K}, expressed with the neighbour's outward normal.
  Vec3 a_neighbour(const Mesh& mesh, Index f) const;
  /// J = I - i i^T / (i.n)^2.
  Mat3 j_tensor(Index f) const;
  Mat3 gamma_parallel(Index f) const;
  Mat3 gamma_nonparallel(Index f) const;
  /// b_{K,L} = |sigma| lambda^2 J n_K and b_{L,K} = |sigma| (1 - lambda)^2 J n_L.
  Vec3 b_owner(const Mesh& mesh, Index f) const;
  Vec3 b_neighbour(const Mesh& mesh, Index f) const;
};

/// Throws FaceDegenerate when n.i <= 1e-12 and std::invalid_argument for a
/// non-positive diffusivity or a size mismatch.
FaceCoefficients face_coefficients(const Mesh& mesh, const CellField& alpha,
                                   FaceDiffusivity mode = FaceDiffusivity::linear);
/// Unit diffusivity.
FaceCoefficients face_coefficients(const Mesh& mesh);

/// Gauss gradient with linearly interpolated face values and I_sigma u = 0 on
/// the boundary.
CellVectorField gauss_gradient(const Mesh& mesh, const CellField& u);

/// Weighted least-squares gradient with precomputed stencil vectors.
class LeastSquaresGradient {
 public:
  /// Throws SingularStencil for a cell whose weighting tensor is singular.
  explicit LeastSquaresGradient(const Mesh& mesh);

  /// Boundary values default to zero; `boundary_values`, when given, holds
  /// one value per face (internal entries are ignored).
  CellVectorField operator()(const CellField& u,
                             std::optional<std::span<const double>> boundary_values = std::nullopt) const;

  /// Stencil vector v_{K,sigma} of cell `c` on face `f`.
  const Vec3& stencil(Index c, Index f) const;

 private:
  const Mesh* mesh_;
  std::vector<Vec3> v_owner_;
  std::vector<Vec3> v_neighbour_;
};

CellVectorField least_squares_gradient(const Mesh& mesh, const CellField& u);

CellVectorField cell_gradient(const Mesh& mesh, const CellField& u, GradScheme scheme);

/// Face gradient from cell gradients. On boundary faces the normal part is
/// replaced by -u_K / d_{K,sigma}.
Vec3 face_gradient(const Mesh& mesh, const FaceCoefficients& fc, const CellVectorField& grad,
                   const CellField& u, Index f, FaceGradient rule = FaceGradient::linear);

/// alpha tau (u_K - u_L), boundary alpha tau u_K.
FaceField two_point_fluxes(const Mesh& mesh, const FaceCoefficients& fc, const CellField& u);
/// -alpha |sigma| k . grad_sigma u.
FaceField correction_fluxes(const Mesh& mesh, const FaceCoefficients& fc, const CellVectorField& grad,
                            const CellField& u, FaceGradient rule = FaceGradient::linear);
/// Two-point plus correction part.
FaceField corrected_fluxes(const Mesh& mesh, const FaceCoefficients& fc, const CellVectorField& grad,
                           const CellField& u, FaceGradient rule = FaceGradient::linear);
FaceField corrected_fluxes(const Mesh& mesh, const FaceCoefficients& fc, const CellField& u,
                           GradScheme scheme);

/// Sum of outgoing fluxes per cell.
CellField flux_divergence(const Mesh& mesh, const FaceField& flux);

/// [u, v]_{D,alpha,par}.
double parallel_inner_product(const Mesh& mesh, const FaceCoefficients& fc, const CellField& u,
                              const CellField& v);
/// ||u||_D, the parallel product with unit diffusivity.
double discrete_norm(const Mesh& mesh, const CellField& u);
/// sqrt(sum |K| u_K^2).
double l2_norm(const Mesh& mesh, const CellField& u);
double l2_norm(const Mesh& mesh, const CellVectorField& g);

struct BiasedGradients {
  CellVectorField full;
  CellVectorField parallel;
  CellVectorField nonparallel;
};

/// grad_{D,alpha}, grad_{D,alpha,par} and grad_{D,alpha,npar} from the
/// a-vectors. The non-parallel part applies the Gamma^npar tensors directly.
BiasedGradients biased_gradients(const Mesh& mesh, const FaceCoefficients& fc, const CellField& u);

/// (Gamma^npar grad v)_K.
CellVectorField gamma_nonparallel_gradient(const Mesh& mesh, const FaceCoefficients& fc, const CellField& v);

/// sum_K |K| grad_K u . (Gamma^npar grad v)_K for any cell gradient of u.
double nonparallel_bilinear(const Mesh& mesh, const FaceCoefficients& fc, const CellVectorField& grad_u,
                            const CellField& v);

struct DistortionCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool satisfied = false;
};

/// Compares sum |K| grad_D u . grad_{D,1} u against the parallel version.
DistortionCheck distortion_condition(const Mesh& mesh, const CellField& u);

}  // namespace gcfv
