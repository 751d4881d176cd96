#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "gcfv/mesh.hpp"
#include "gcfv/operators.hpp"

namespace gcfv {

/// Symmetric matrix in compressed-row layout with ascending columns, plus a
/// right-hand side.
struct SparseSystem {
  std::vector<std::size_t> row_offsets;
  std::vector<Index> columns;
  std::vector<double> values;
  std::vector<double> rhs;

  Index size() const { return rhs.size(); }
  double at(Index row, Index col) const;
  /// y = A x
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
};

using Source = std::function<double(const Vec3&)>;

enum class Quadrature { midpoint, subdivided };

/// Two-point operator with homogeneous Dirichlet boundaries and the cell
/// integrals of `f`. The subdivided rule samples f at the centroid of each
/// face pyramid.
SparseSystem assemble_tpfa(const Mesh& mesh, const FaceCoefficients& fc, const Source& f,
                           Quadrature quadrature = Quadrature::midpoint);

/// Cell integrals of `f` only.
std::vector<double> integrate_source(const Mesh& mesh, const Source& f, Quadrature quadrature);

struct PcgResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  /// ||b - A x|| / ||b|| of the iterate as accumulated in extended precision.
  double residual = 0.0;
  /// The same quantity for the returned double-precision vector.
  double rounded_residual = 0.0;
  bool converged = false;
  /// The incomplete factor had a non-positive pivot; Jacobi was used instead.
  bool preconditioner_breakdown = false;
};

/// Conjugate gradients with the diagonal incomplete Cholesky preconditioner.
///
/// The factor keeps the off-diagonal entries of A and only modifies the
/// diagonal. Double-precision CG sweeps are wrapped in a refinement loop whose
/// residual and solution are carried in double-double arithmetic, so the stopping test
/// on the true residual can be met below the double-precision floor. Throws
/// Error if a search direction has non-positive curvature.
PcgResult dic_pcg(const SparseSystem& system, const std::vector<double>& x0, double tol, std::size_t max_it);

enum class OuterMetric { increment, residual };

struct SolverOptions {
  GradScheme grad = GradScheme::gauss;
  FaceGradient face_gradient = FaceGradient::linear;
  FaceDiffusivity diffusivity = FaceDiffusivity::linear;
  Quadrature quadrature = Quadrature::midpoint;
  OuterMetric metric = OuterMetric::increment;
  double outer_tol = 1e-4;
  std::size_t max_outer = 1000;
  double inner_tol = 1e-16;
  std::size_t max_inner = 20000;
};

struct SolveLog {
  std::size_t outer_iterations = 0;
  std::vector<std::size_t> inner_iterations;
  /// Outer convergence metric after each outer step.
  std::vector<double> change_norms;
  std::vector<double> inner_residuals;
  double final_residual = 0.0;
  double final_rounded_residual = 0.0;
  bool converged = false;
  /// max_outer was reached without meeting the outer tolerance.
  bool stagnated = false;
  /// The iterates stopped being finite or grew without bound.
  bool diverged = false;
  bool preconditioner_breakdown = false;
  bool inner_not_converged = false;
};

struct Solution {
  CellField u;
  SolveLog log;
};

/// Deferred correction: the two-point operator is implicit and the
/// non-orthogonal correction is evaluated from the previous iterate, starting
/// from zero. Stops when the metric drops to outer_tol or the correction no
/// longer changes.
Solution solve_deferred(const Mesh& mesh, const CellField& alpha, const Source& f,
                        const SolverOptions& options = {});

}  // namespace gcfv
