#include "gcfv/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "gcfv/errors.hpp"

namespace gcfv {

namespace {

// Stop refining once a sweep fails to halve the residual this many times.
constexpr int kMaxIdleSweeps = 3;
// Inner sweeps never ask for more than this recurrence reduction.
constexpr double kInnerFloor = 1e-12;
// Relative change of the correction below which the outer iteration is at a
// fixed point.
constexpr double kFixedPoint = 1e-10;
// Growth of the iterate that counts as divergence.
constexpr double kDivergence = 1e8;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

// Double-double arithmetic for the refinement residual and iterate.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;
};

DoubleDouble two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

// Dekker's exact product.
DoubleDouble two_product(double a, double b) {
  constexpr double kSplit = 134217729.0;  // 2^27 + 1
  const double p = a * b;
  const double ca = kSplit * a, cb = kSplit * b;
  const double a_hi = ca - (ca - a), a_lo = a - a_hi;
  const double b_hi = cb - (cb - b), b_lo = b - b_hi;
  return {p, ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo};
}

void add(DoubleDouble& acc, double v) {
  const DoubleDouble s = two_sum(acc.hi, v);
  acc.hi = s.hi;
  acc.lo += s.lo;
}

void normalize(DoubleDouble& v) { v = two_sum(v.hi, v.lo); }

// r = b - A x with x = hi + lo; returns ||r|| / ||b||.
double refined_residual(const SparseSystem& s, const std::vector<double>& hi, const std::vector<double>& lo,
                        double b_norm, std::vector<double>& r) {
  double sum = 0.0;
  for (Index i = 0; i < s.size(); ++i) {
    DoubleDouble acc{s.rhs[i], 0.0};
    for (std::size_t p = s.row_offsets[i]; p < s.row_offsets[i + 1]; ++p) {
      const DoubleDouble prod = two_product(s.values[p], hi[s.columns[p]]);
      add(acc, -prod.hi);
      acc.lo -= prod.lo + s.values[p] * lo[s.columns[p]];
    }
    r[i] = acc.hi + acc.lo;
    sum += r[i] * r[i];
  }
  return std::sqrt(sum) / b_norm;
}

class Preconditioner {
 public:
  explicit Preconditioner(const SparseSystem& s) : s_(s), inv_diag_(s.size()) {
    for (Index i = 0; i < s.size(); ++i) {
      double d = s.at(i, i);
      for (std::size_t p = s.row_offsets[i]; p < s.row_offsets[i + 1] && s.columns[p] < i; ++p)
        d -= s.values[p] * s.values[p] * inv_diag_[s.columns[p]];
      if (!(d > 0.0)) {
        jacobi_ = true;
        break;
      }
      inv_diag_[i] = 1.0 / d;
    }
    if (jacobi_)
      for (Index i = 0; i < s.size(); ++i) inv_diag_[i] = 1.0 / s.at(i, i);
  }

  bool jacobi() const { return jacobi_; }

  void apply(const std::vector<double>& r, std::vector<double>& z) const {
    const Index n = s_.size();
    if (jacobi_) {
      for (Index i = 0; i < n; ++i) z[i] = inv_diag_[i] * r[i];
      return;
    }
    for (Index i = 0; i < n; ++i) {
      double y = r[i];
      for (std::size_t p = s_.row_offsets[i]; p < s_.row_offsets[i + 1] && s_.columns[p] < i; ++p)
        y -= s_.values[p] * z[s_.columns[p]];
      z[i] = y * inv_diag_[i];
    }
    for (Index i = n; i-- > 0;) {
      double t = 0.0;
      for (std::size_t p = s_.row_offsets[i + 1]; p-- > s_.row_offsets[i] && s_.columns[p] > i;)
        t += s_.values[p] * z[s_.columns[p]];
      z[i] -= inv_diag_[i] * t;
    }
  }

 private:
  const SparseSystem& s_;
  std::vector<double> inv_diag_;
  bool jacobi_ = false;
};

// Plain PCG on A d = r from d = 0 until the recurrence residual drops by
// `reduction` or the budget runs out. Returns the iterations used.
std::size_t pcg_sweep(const SparseSystem& s, const Preconditioner& m, const std::vector<double>& r0,
                      double reduction, std::size_t budget, std::vector<double>& d) {
  const Index n = s.size();
  std::vector<double> r = r0, z(n), p(n), q(n);
  std::fill(d.begin(), d.end(), 0.0);
  m.apply(r, z);
  p = z;
  double rz = dot(r, z);
  const double target = reduction * std::sqrt(dot(r0, r0));
  std::size_t it = 0;
  while (it < budget && std::sqrt(dot(r, r)) > target) {
    s.multiply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) throw Error("conjugate gradients: non-positive curvature, matrix is not SPD");
    const double a = rz / pq;
    for (Index i = 0; i < n; ++i) {
      d[i] += a * p[i];
      r[i] -= a * q[i];
    }
    ++it;
    m.apply(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (Index i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return it;
}

}  // namespace

double SparseSystem::at(Index row, Index col) const {
  const auto first = columns.begin() + static_cast<std::ptrdiff_t>(row_offsets[row]);
  const auto last = columns.begin() + static_cast<std::ptrdiff_t>(row_offsets[row + 1]);
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return values[static_cast<std::size_t>(it - columns.begin())];
}

void SparseSystem::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  for (Index i = 0; i < size(); ++i) {
    double s = 0.0;
    for (std::size_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p) s += values[p] * x[columns[p]];
    y[i] = s;
  }
}

std::vector<double> integrate_source(const Mesh& mesh, const Source& f, Quadrature quadrature) {
  std::vector<double> b(mesh.n_cells());
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    const Vec3& xc = mesh.cell_center(c);
    if (quadrature == Quadrature::midpoint) {
      b[c] = f(xc) * mesh.cell_volume(c);
      continue;
    }
    double s = 0.0;
    for (Index face : mesh.cell_faces(c))
      s += mesh.half_diamond_volume(c, face) * f(xc + 0.75 * (mesh.face_centroid(face) - xc));
    b[c] = s;
  }
  return b;
}

SparseSystem assemble_tpfa(const Mesh& mesh, const FaceCoefficients& fc, const Source& f, Quadrature quadrature) {
  const Index n = mesh.n_cells();
  std::vector<double> diag(n, 0.0);
  for (Index face = 0; face < mesh.n_faces(); ++face) {
    const double t = fc.alpha[face] * fc.tau[face];
    diag[mesh.owner(face)] += t;
    if (mesh.is_internal(face)) diag[mesh.neighbour(face)] += t;
  }

  SparseSystem s;
  s.row_offsets.reserve(n + 1);
  s.row_offsets.push_back(0);
  std::vector<std::pair<Index, double>> row;
  for (Index c = 0; c < n; ++c) {
    row.clear();
    row.emplace_back(c, diag[c]);
    for (Index face : mesh.cell_faces(c)) {
      if (!mesh.is_internal(face)) continue;
      const Index other = mesh.owner(face) == c ? mesh.neighbour(face) : mesh.owner(face);
      row.emplace_back(other, -fc.alpha[face] * fc.tau[face]);
    }
    std::sort(row.begin(), row.end());
    for (const auto& [col, v] : row) {
      s.columns.push_back(col);
      s.values.push_back(v);
    }
    s.row_offsets.push_back(s.columns.size());
  }
  s.rhs = integrate_source(mesh, f, quadrature);
  return s;
}

PcgResult dic_pcg(const SparseSystem& system, const std::vector<double>& x0, double tol, std::size_t max_it) {
  const Index n = system.size();
  if (x0.size() != n) throw std::invalid_argument("initial guess size does not match the system");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  PcgResult out;
  const double b_norm = std::sqrt(dot(system.rhs, system.rhs));
  if (b_norm == 0.0) {
    out.x.assign(n, 0.0);
    out.converged = true;
    return out;
  }

  const Preconditioner m(system);
  out.preconditioner_breakdown = m.jacobi();

  std::vector<double> hi = x0, lo(n, 0.0), r(n), d(n);
  double rel = refined_residual(system, hi, lo, b_norm, r);
  int idle = 0;
  while (rel > tol && out.iterations < max_it && idle < kMaxIdleSweeps) {
    const double reduction = std::max(0.5 * tol / rel, kInnerFloor);
    out.iterations += pcg_sweep(system, m, r, reduction, max_it - out.iterations, d);
    for (Index i = 0; i < n; ++i) {
      DoubleDouble x{hi[i], lo[i]};
      add(x, d[i]);
      normalize(x);
      hi[i] = x.hi;
      lo[i] = x.lo;
    }
    const double next = refined_residual(system, hi, lo, b_norm, r);
    idle = next > 0.5 * rel ? idle + 1 : 0;
    rel = next;
  }
  out.residual = rel;
  out.converged = rel <= tol;
  const std::vector<double> zero(n, 0.0);
  out.rounded_residual = refined_residual(system, hi, zero, b_norm, d);
  out.x = std::move(hi);
  return out;
}

Solution solve_deferred(const Mesh& mesh, const CellField& alpha, const Source& f, const SolverOptions& options) {
  const FaceCoefficients fc = face_coefficients(mesh, alpha, options.diffusivity);
  SparseSystem system = assemble_tpfa(mesh, fc, f, options.quadrature);
  const std::vector<double> b = system.rhs;
  const double b_max = std::max(max_abs(b), std::numeric_limits<double>::min());

  std::optional<LeastSquaresGradient> ls;
  if (options.grad == GradScheme::least_squares) ls.emplace(mesh);
  auto correction = [&](const CellField& u) {
    const CellVectorField g = ls ? (*ls)(u) : gauss_gradient(mesh, u);
    CellField c = flux_divergence(mesh, correction_fluxes(mesh, fc, g, u, options.face_gradient));
    for (double& v : c) v = -v;
    return c;
  };

  Solution sol;
  SolveLog& log = sol.log;
  sol.u.assign(mesh.n_cells(), 0.0);
  CellField c = correction(sol.u);
  double first_scale = 0.0;

  while (log.outer_iterations < options.max_outer) {
    for (Index i = 0; i < system.size(); ++i) system.rhs[i] = b[i] + c[i];
    const PcgResult inner = dic_pcg(system, sol.u, options.inner_tol, options.max_inner);
    ++log.outer_iterations;
    log.inner_iterations.push_back(inner.iterations);
    log.inner_residuals.push_back(inner.residual);
    log.final_residual = inner.residual;
    log.final_rounded_residual = inner.rounded_residual;
    log.preconditioner_breakdown = log.preconditioner_breakdown || inner.preconditioner_breakdown;
    log.inner_not_converged = log.inner_not_converged || !inner.converged;

    const CellField c_next = correction(inner.x);
    double du = 0.0, dc = 0.0;
    for (Index i = 0; i < inner.x.size(); ++i) {
      du = std::max(du, std::fabs(inner.x[i] - sol.u[i]));
      dc = std::max(dc, std::fabs(c_next[i] - c[i]));
    }
    const double u_max = max_abs(inner.x);
    if (first_scale == 0.0) first_scale = u_max;
    const double increment = du / std::max(u_max, std::numeric_limits<double>::min());
    const double residual = dc / b_max;
    const double metric = options.metric == OuterMetric::increment ? increment : residual;
    log.change_norms.push_back(metric);

    if (!std::isfinite(metric) || !std::isfinite(u_max) || u_max > kDivergence * first_scale) {
      log.diverged = true;
      break;
    }
    sol.u = inner.x;
    c = c_next;
    if (metric <= options.outer_tol || residual <= kFixedPoint) {
      log.converged = true;
      break;
    }
  }
  log.stagnated = !log.converged;
  return sol;
}

}  // namespace gcfv
