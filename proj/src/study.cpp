#include "gcfv/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "gcfv/errors.hpp"
#include "gcfv/quality.hpp"

namespace gcfv {

namespace {

constexpr double kWeakFormTolerance = 1e-12;

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

bool weak_form_holds(const Mesh& mesh, const FaceCoefficients& fc, GradScheme scheme, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CellField u(mesh.n_cells()), v(mesh.n_cells());
  for (double& x : u) x = dist(rng);
  for (double& x : v) x = dist(rng);
  const CellVectorField grad = cell_gradient(mesh, u, scheme);
  const CellField div = flux_divergence(mesh, corrected_fluxes(mesh, fc, grad, u));
  double lhs = 0.0, scale = 0.0;
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    lhs += v[c] * div[c];
    scale += std::fabs(v[c] * div[c]);
  }
  const double rhs = parallel_inner_product(mesh, fc, u, v) + nonparallel_bilinear(mesh, fc, grad, v);
  return std::fabs(lhs - rhs) <= kWeakFormTolerance * scale;
}

StudyRow run_level(const StudyConfig& config, int n, const ManufacturedProblem& problem) {
  StudyRow row;
  row.family = config.family;
  row.level = n;
  row.e2 = row.einf = row.e_rms = std::numeric_limits<double>::quiet_NaN();

  GenSpec spec = reference_spec(config.family, n, config.seed);
  if (config.skew) spec.skew = *config.skew;
  if (config.jitter) spec.jitter = *config.jitter;

  try {
    const Mesh mesh = generate(spec);
    const QualityReport q = quality_report(mesh);
    row.mean_d = q.mean_d;
    row.mean_theta = q.mean_theta;
    row.theta_max = q.theta_max;
    row.ar_max = q.ar_max;
    row.s_max = q.s_max;

    const CellField alpha(mesh.n_cells(), problem.alpha);
    const Solution sol = solve_deferred(mesh, alpha, problem.f, config.solver);
    const ErrorNorms e = error_norms(mesh, sol.u, problem.u);
    row.e2 = e.l2;
    row.einf = e.linf;
    row.e_rms = e.rms;
    row.outer_iters = sol.log.outer_iterations;
    row.stagnated = sol.log.stagnated;
    for (double r : sol.log.inner_residuals) row.inner_residual = std::max(row.inner_residual, r);

    row.weak_form = weak_form_holds(mesh, face_coefficients(mesh, alpha), config.solver.grad,
                                    config.seed ^ static_cast<std::uint64_t>(n));
    row.distortion = distortion_condition(mesh, sol.u).satisfied;

    if (sol.log.diverged)
      row.status = "diverged";
    else if (sol.log.stagnated)
      row.status = "stagnated";
    else if (sol.log.inner_not_converged)
      row.status = "inner_not_converged";
  } catch (const GenerationFailed& e) {
    row.status = std::string("generation_failed: ") + e.what();
  } catch (const std::exception& e) {
    row.status = std::string("error: ") + e.what();
  }
  return row;
}

bool usable(double e, double d) { return std::isfinite(e) && e > 0.0 && d > 0.0; }

}  // namespace

ManufacturedProblem manufactured_problem() {
  ManufacturedProblem p;
  p.u = [](const Vec3& x) { return x.x * (1 - x.x) * x.y * (1 - x.y) * x.z * (1 - x.z); };
  p.f = [](const Vec3& x) {
    const double a = x.x * (1 - x.x), b = x.y * (1 - x.y), c = x.z * (1 - x.z);
    return 2.0 * (b * c + a * c + a * b);
  };
  return p;
}

ErrorNorms error_norms(const Mesh& mesh, const CellField& u, const std::function<double(const Vec3&)>& exact) {
  if (u.size() != mesh.n_cells()) throw std::invalid_argument("field size does not match the mesh");
  ErrorNorms out;
  double sum_sq = 0.0;
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    const double e = u[c] - exact(mesh.cell_center(c));
    out.l2 += mesh.cell_volume(c) * e * e;
    sum_sq += e * e;
    out.linf = std::max(out.linf, std::fabs(e));
  }
  out.l2 = std::sqrt(out.l2);
  out.rms = mesh.n_cells() > 0 ? std::sqrt(sum_sq / static_cast<double>(mesh.n_cells())) : 0.0;
  return out;
}

double eoc(double e_coarse, double e_fine, double d_coarse, double d_fine) {
  if (!(e_coarse > 0.0 && e_fine > 0.0 && d_coarse > 0.0 && d_fine > 0.0))
    throw std::invalid_argument("eoc needs positive errors and resolutions");
  if (d_coarse == d_fine) throw std::invalid_argument("eoc needs distinct resolutions");
  return std::log(e_coarse / e_fine) / std::log(d_coarse / d_fine);
}

std::vector<int> default_levels(Family family) {
  if (family == Family::tet || family == Family::poly) return {8, 12, 18, 27};
  return {10, 20, 40, 80};
}

StudyReport run_study(const StudyConfig& config) {
  if (config.levels.empty()) throw std::invalid_argument("study needs at least one level");
  for (std::size_t i = 1; i < config.levels.size(); ++i)
    if (config.levels[i] <= config.levels[i - 1]) throw std::invalid_argument("study levels must be ascending");

  const ManufacturedProblem problem = manufactured_problem();
  StudyReport report;
  for (int n : config.levels) {
    const auto start = std::chrono::steady_clock::now();
    report.rows.push_back(run_level(config, n, problem));
    if (config.progress)
      config.progress(report.rows.back(),
                      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  for (std::size_t i = 0; i + 1 < report.rows.size(); ++i) {
    StudyRow& a = report.rows[i];
    const StudyRow& b = report.rows[i + 1];
    if (usable(a.e2, a.mean_d) && usable(b.e2, b.mean_d) && a.mean_d != b.mean_d) {
      a.p2 = eoc(a.e2, b.e2, a.mean_d, b.mean_d);
      a.pinf = eoc(a.einf, b.einf, a.mean_d, b.mean_d);
    }
  }
  return report;
}

StudyReport run_study(Family family, const std::vector<int>& levels, GradScheme grad,
                      const std::optional<std::filesystem::path>& out_csv) {
  StudyConfig config;
  config.family = family;
  config.levels = levels;
  config.solver.grad = grad;
  StudyReport report = run_study(config);
  if (out_csv) report.write_csv(*out_csv);
  return report;
}

std::string StudyReport::to_csv(bool verbose) const {
  std::string out =
      "family,level,mean_d,mean_theta,theta_max,ar_max,s_max,e2,einf,p2,pinf,outer_iters,stagnated,"
      "weak_form,distortion,status";
  if (verbose) out += ",e_rms,inner_residual";
  out += '\n';
  for (const StudyRow& r : rows) {
    std::string status = r.status;
    for (char& ch : status)
      if (ch == ',' || ch == '\n') ch = ';';
    out += std::string(to_string(r.family)) + ',' + std::to_string(r.level) + ',' + number(r.mean_d) + ',' +
           number(r.mean_theta) + ',' + number(r.theta_max) + ',' + number(r.ar_max) + ',' + number(r.s_max) + ',' +
           number(r.e2) + ',' + number(r.einf) + ',' + optional_number(r.p2) + ',' + optional_number(r.pinf) + ',' +
           std::to_string(r.outer_iters) + ',' + (r.stagnated ? "1" : "0") + ',' + (r.weak_form ? "pass" : "fail") +
           ',' + (r.distortion ? "pass" : "fail") + ',' + status;
    if (verbose) out += ',' + number(r.e_rms) + ',' + number(r.inner_residual);
    out += '\n';
  }
  return out;
}

void StudyReport::write_csv(const std::filesystem::path& path, bool verbose) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << to_csv(verbose);
  if (!os) throw Error("failed writing " + path.string());
}

}  // namespace gcfv
