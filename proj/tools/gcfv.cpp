#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "gcfv/errors.hpp"
#include "gcfv/mesh_gen.hpp"
#include "gcfv/mesh_io.hpp"
#include "gcfv/quality.hpp"
#include "gcfv/solver.hpp"
#include "gcfv/study.hpp"
#include "gcfv/vtk.hpp"

using namespace gcfv;
using nlohmann::json;

namespace {

const std::vector<std::string> kFamilyNames = {"hex", "hexskew", "triprism", "polyprism", "tet", "poly"};
const std::map<std::string, GradScheme> kGrads = {{"gauss", GradScheme::gauss},
                                                  {"ls", GradScheme::least_squares}};
const std::map<std::string, FaceGradient> kFaceGrads = {{"linear", FaceGradient::linear},
                                                        {"midpoint", FaceGradient::midpoint}};
const std::map<std::string, FaceDiffusivity> kDiffusivities = {{"linear", FaceDiffusivity::linear},
                                                               {"diamond", FaceDiffusivity::diamond}};
const std::map<std::string, Quadrature> kQuadratures = {{"midpoint", Quadrature::midpoint},
                                                        {"subdivided", Quadrature::subdivided}};
const std::map<std::string, OuterMetric> kMetrics = {{"increment", OuterMetric::increment},
                                                     {"residual", OuterMetric::residual}};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void print_quality(const QualityReport& q) {
  std::printf("mean_d      %.6g\n", q.mean_d);
  std::printf("mean_theta  %.6g deg\n", q.mean_theta);
  std::printf("theta_max   %.6g deg\n", q.theta_max);
  std::printf("ar_max      %.6g\n", q.ar_max);
  std::printf("s_max       %.6g\n", q.s_max);
  std::printf("theta_tilde %.6g\n", q.theta_tilde);
  if (q.skew_undefined > 0) std::printf("skewness undefined on %zu faces\n", q.skew_undefined);
}

struct SolverFlags {
  SolverOptions options;

  void add(CLI::App* app) {
    app->add_option("--grad", options.grad, "Cell gradient in the correction")->transform(CLI::CheckedTransformer(kGrads));
    app->add_option("--face-gradient", options.face_gradient, "Face gradient rule")
        ->transform(CLI::CheckedTransformer(kFaceGrads));
    app->add_option("--diffusivity", options.diffusivity, "Face diffusivity")
        ->transform(CLI::CheckedTransformer(kDiffusivities));
    app->add_option("--quadrature", options.quadrature, "Source quadrature")
        ->transform(CLI::CheckedTransformer(kQuadratures));
    app->add_option("--metric", options.metric, "Outer stopping metric")->transform(CLI::CheckedTransformer(kMetrics));
    app->add_option("--outer-tol", options.outer_tol, "Outer tolerance")->capture_default_str();
    app->add_option("--max-outer", options.max_outer, "Outer iteration budget")->capture_default_str();
    app->add_option("--inner-tol", options.inner_tol, "Inner relative residual")->capture_default_str();
    app->add_option("--max-inner", options.max_inner, "Inner iteration budget per outer step")->capture_default_str();
  }

};

CellField read_solution(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  const json j = json::parse(is, nullptr, false);
  if (j.is_discarded() || !j.contains("u") || !j["u"].is_array()) throw ParseError(path + ": expected {\"u\": [...]}");
  return j["u"].get<CellField>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauss corrected finite volume diffusion on polyhedral meshes"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a mesh family member");
  std::string family_name, out;
  int n = 10;
  std::optional<double> skew, jitter, target_theta;
  std::uint64_t seed = 1;
  gen->add_option("--family", family_name, "Mesh family")->required()->check(CLI::IsMember(kFamilyNames));
  gen->add_option("--n", n, "Cells per edge")->required();
  gen->add_option("--skew", skew, "Smooth-map amplitude");
  gen->add_option("--jitter", jitter, "Random displacement amplitude");
  gen->add_option("--seed", seed, "Random seed");
  gen->add_option("--target-theta", target_theta, "Calibrate the amplitude to this theta_max in degrees");
  gen->add_option("--out", out, "Mesh JSON path")->required();

  // quality
  auto* quality = app.add_subcommand("quality", "Print mesh quality statistics");
  std::string mesh_path;
  bool as_json = false;
  quality->add_option("--mesh", mesh_path, "Mesh JSON path")->required();
  quality->add_flag("--json", as_json, "Print JSON");

  // check
  auto* check = app.add_subcommand("check", "Audit mesh invariants");
  check->add_option("--mesh", mesh_path, "Mesh JSON path")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Solve the manufactured problem on a mesh");
  SolverFlags solve_flags;
  solve->add_option("--mesh", mesh_path, "Mesh JSON path")->required();
  solve->add_option("--out", out, "Solution JSON path");
  solve_flags.add(solve);

  // study
  auto* study = app.add_subcommand("study", "Convergence study on a mesh family");
  SolverFlags study_flags;
  std::vector<int> levels;
  bool verbose = false;
  study->add_option("--family", family_name, "Mesh family")->required()->check(CLI::IsMember(kFamilyNames));
  study->add_option("--levels", levels, "Ascending cells-per-edge levels")->delimiter(',');
  study->add_option("--seed", seed, "Random seed");
  study->add_option("--skew", skew, "Smooth-map amplitude override");
  study->add_option("--jitter", jitter, "Random displacement amplitude override");
  study->add_option("--out", out, "CSV path")->required();
  study->add_flag("--verbose", verbose, "Add RMS error and inner residual columns");
  study_flags.add(study);

  // export-vtk
  auto* vtk = app.add_subcommand("export-vtk", "Write a legacy VTK file");
  std::string solution_path;
  vtk->add_option("--mesh", mesh_path, "Mesh JSON path")->required();
  vtk->add_option("--solution", solution_path, "Solution JSON with a \"u\" array");
  vtk->add_option("--out", out, "VTK path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const Family family = family_name.empty() ? Family::hex : parse_family(family_name);
    if (*gen) {
      const auto t0 = std::chrono::steady_clock::now();
      GenSpec spec = reference_spec(family, n, seed);
      if (skew) spec.skew = *skew;
      if (jitter) spec.jitter = *jitter;
      if (target_theta) {
        const Calibration c = calibrate(spec.family, n, *target_theta, seed);
        (calibrated_amplitude(spec.family) == Amplitude::jitter ? spec.jitter : spec.skew) = c.amplitude;
        std::printf("calibrated amplitude %.6g (theta_max %.4g deg)\n", c.amplitude, c.theta_max);
      }
      const Mesh mesh = generate(spec);
      save_mesh(mesh, out);
      std::printf("%s n=%d skew=%g jitter=%g: %zu cells, %zu faces (%.2fs)\n", std::string(to_string(family)).c_str(), n, spec.skew,
                  spec.jitter, mesh.n_cells(), mesh.n_faces(), seconds_since(t0));
      return 0;
    }

    if (*quality) {
      const QualityReport q = quality_report(load_mesh(mesh_path));
      if (as_json) {
        const json j = {{"mean_d", q.mean_d},         {"mean_theta", q.mean_theta}, {"theta_max", q.theta_max},
                        {"ar_max", q.ar_max},         {"s_max", q.s_max},           {"theta_tilde", q.theta_tilde},
                        {"skew_undefined", q.skew_undefined}};
        std::cout << j.dump(2) << '\n';
      } else {
        print_quality(q);
      }
      return 0;
    }

    if (*check) {
      const AuditReport r = audit_mesh(load_mesh(mesh_path));
      for (const AuditItem& item : r.items)
        std::printf("%-4s %-24s max %.3e tol %.1e failing %zu\n", item.passed() ? "ok" : "FAIL", item.name.c_str(),
                    item.max_violation, item.tolerance, item.failing);
      return r.passed() ? 0 : 1;
    }

    if (*solve) {
      const auto t0 = std::chrono::steady_clock::now();
      const Mesh mesh = load_mesh(mesh_path);
      const ManufacturedProblem p = manufactured_problem();
      const Solution sol = solve_deferred(mesh, CellField(mesh.n_cells(), p.alpha), p.f, solve_flags.options);
      const ErrorNorms e = error_norms(mesh, sol.u, p.u);
      std::size_t inner = 0;
      for (std::size_t k : sol.log.inner_iterations) inner += k;
      std::printf("outer %zu, inner %zu, residual %.2e, e2 %.6e, einf %.6e%s%s (%.2fs)\n", sol.log.outer_iterations,
                  inner, sol.log.final_residual, e.l2, e.linf, sol.log.stagnated ? ", stagnated" : "",
                  sol.log.diverged ? ", diverged" : "", seconds_since(t0));
      if (!out.empty()) {
        std::ofstream os(out, std::ios::binary);
        if (!os) throw Error("cannot open " + out + " for writing");
        const json j = {{"u", sol.u}, {"outer_iters", sol.log.outer_iterations}, {"stagnated", sol.log.stagnated}};
        os << j.dump() << '\n';
      }
      return sol.log.converged ? 0 : 1;
    }

    if (*study) {
      StudyConfig cfg;
      cfg.family = family;
      cfg.levels = levels.empty() ? default_levels(cfg.family) : levels;
      cfg.solver = study_flags.options;
      cfg.seed = seed;
      cfg.skew = skew;
      cfg.jitter = jitter;
      cfg.progress = [](const StudyRow& r, double s) {
        std::fprintf(stderr, "%s n=%d: e2 %.4e einf %.4e outer %zu %s (%.1fs)\n", std::string(to_string(r.family)).c_str(),
                     r.level, r.e2, r.einf, r.outer_iters, r.status.c_str(), s);
      };
      const StudyReport report = run_study(cfg);
      report.write_csv(out, verbose);
      std::cout << report.to_csv(verbose);
      bool ok = true;
      for (const StudyRow& r : report.rows)
        ok = ok && r.weak_form && (r.status == "ok" || r.status == "stagnated");
      return ok ? 0 : 1;
    }

    if (*vtk) {
      const Mesh mesh = load_mesh(mesh_path);
      std::vector<NamedField> fields;
      if (!solution_path.empty()) {
        CellField u = read_solution(solution_path);
        if (u.size() != mesh.n_cells()) throw std::invalid_argument("solution size does not match the mesh");
        const ManufacturedProblem p = manufactured_problem();
        CellField err(mesh.n_cells());
        for (Index c = 0; c < mesh.n_cells(); ++c) err[c] = u[c] - p.u(mesh.cell_center(c));
        fields.emplace_back("u", std::move(u));
        fields.emplace_back("error", std::move(err));
      }
      export_vtk(mesh, fields, out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
