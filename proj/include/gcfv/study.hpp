#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gcfv/mesh_gen.hpp"
#include "gcfv/operators.hpp"
#include "gcfv/solver.hpp"

namespace gcfv {

/// u = x(1-x) y(1-y) z(1-z) on the unit cube with alpha = 1 and f = -Laplace u.
struct ManufacturedProblem {
  std::function<double(const Vec3&)> u;
  Source f;
  double alpha = 1.0;
};

ManufacturedProblem manufactured_problem();

struct ErrorNorms {
  /// sqrt(sum |K| e_K^2)
  double l2 = 0.0;
  double linf = 0.0;
  /// sqrt(mean e_K^2)
  double rms = 0.0;
};

/// Norms of e_K = u_K - u_exact(x_K).
ErrorNorms error_norms(const Mesh& mesh, const CellField& u, const std::function<double(const Vec3&)>& exact);

/// ln(e_coarse / e_fine) / ln(d_coarse / d_fine). Throws std::invalid_argument
/// unless all four values are positive and the resolutions differ.
double eoc(double e_coarse, double e_fine, double d_coarse, double d_fine);

struct StudyRow {
  Family family = Family::hex;
  int level = 0;
  double mean_d = 0.0;
  double mean_theta = 0.0;
  double theta_max = 0.0;
  double ar_max = 0.0;
  double s_max = 0.0;
  double e2 = 0.0;
  double einf = 0.0;
  double e_rms = 0.0;
  /// Orders towards the next level; empty on the last row of a study.
  std::optional<double> p2;
  std::optional<double> pinf;
  std::size_t outer_iters = 0;
  bool stagnated = false;
  /// Worst relative residual of the inner solves.
  double inner_residual = 0.0;
  bool weak_form = false;
  bool distortion = false;
  /// "ok", or the failure that stopped this level.
  std::string status = "ok";
};

struct StudyReport {
  std::vector<StudyRow> rows;
  /// One header line and one line per row. `verbose` adds the RMS error and
  /// the inner residual.
  std::string to_csv(bool verbose = false) const;
  void write_csv(const std::filesystem::path& path, bool verbose = false) const;
};

struct StudyConfig {
  Family family = Family::hex;
  std::vector<int> levels;
  SolverOptions solver;
  std::uint64_t seed = 1;
  /// Amplitude overrides; the reference amplitudes otherwise.
  std::optional<double> skew;
  std::optional<double> jitter;
  /// Called after each level with its wall-clock seconds.
  std::function<void(const StudyRow&, double)> progress;
};

/// Default levels: 10, 20, 40, 80, or 8, 12, 18, 27 for tet and poly.
std::vector<int> default_levels(Family family);

/// Generates, measures, solves and checks every level. Failures of a level
/// are recorded in its status and the study continues. Throws
/// std::invalid_argument if the levels are empty or not ascending.
StudyReport run_study(const StudyConfig& config);

StudyReport run_study(Family family, const std::vector<int>& levels, GradScheme grad,
                      const std::optional<std::filesystem::path>& out_csv = std::nullopt);

}  // namespace gcfv
