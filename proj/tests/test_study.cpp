#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "gcfv/errors.hpp"
#include "gcfv/mesh_gen.hpp"
#include "gcfv/study.hpp"
#include "gcfv/vtk.hpp"

using namespace gcfv;
using doctest::Approx;

namespace {

struct ParsedVtk {
  std::size_t n_points = 0;
  std::vector<std::vector<Index>> cells;
  std::vector<int> types;
  std::vector<std::string> fields;
  bool has_cell_data = false;
};

// Minimal reader for the legacy format written by export_vtk.
ParsedVtk parse_vtk(const std::string& text) {
  std::istringstream is(text);
  std::string line, word;
  ParsedVtk out;
  for (int i = 0; i < 4; ++i) std::getline(is, line);
  while (is >> word) {
    if (word == "POINTS") {
      std::string kind;
      is >> out.n_points >> kind;
      double x;
      for (std::size_t i = 0; i < 3 * out.n_points; ++i) is >> x;
    } else if (word == "CELLS") {
      std::size_t n, total, seen = 0;
      is >> n >> total;
      out.cells.resize(n);
      for (auto& c : out.cells) {
        std::size_t k;
        is >> k;
        c.resize(k);
        for (auto& v : c) is >> v;
        seen += k + 1;
      }
      REQUIRE(seen == total);
    } else if (word == "CELL_TYPES") {
      std::size_t n;
      is >> n;
      out.types.resize(n);
      for (auto& t : out.types) is >> t;
    } else if (word == "CELL_DATA") {
      std::size_t n;
      is >> n;
      out.has_cell_data = true;
    } else if (word == "SCALARS") {
      std::string name, kind, lookup, table;
      int comps;
      is >> name >> kind >> comps >> lookup >> table;
      out.fields.push_back(name);
      double x;
      for (std::size_t i = 0; i < out.cells.size(); ++i) is >> x;
    }
  }
  return out;
}

Vec3 point(const Mesh& m, Index v) { return m.points()[v]; }

Vec3 tri_normal(const Vec3& a, const Vec3& b, const Vec3& c) { return cross(b - a, c - a); }

}  // namespace

TEST_CASE("manufactured problem") {
  const auto p = manufactured_problem();
  CHECK(p.u({0.5, 0.5, 0.5}) == Approx(1.0 / 64.0).epsilon(1e-15));
  CHECK(p.f({0.5, 0.5, 0.5}) == Approx(0.375).epsilon(1e-15));
  CHECK(p.alpha == 1.0);
  for (const Vec3& b : {Vec3{0, 0.3, 0.7}, Vec3{1, 0.2, 0.9}, Vec3{0.4, 0, 0.5}, Vec3{0.6, 0.1, 1}})
    CHECK(p.u(b) == 0.0);
  // Central second differences of u.
  const double h = 1e-4;
  for (const Vec3& x : {Vec3{0.2, 0.7, 0.4}, Vec3{0.9, 0.35, 0.55}}) {
    double lap = 0.0;
    for (int d = 0; d < 3; ++d) {
      Vec3 e{0, 0, 0};
      e[d] = h;
      lap += (p.u(x + e) - 2 * p.u(x) + p.u(x - e)) / (h * h);
    }
    CHECK(std::fabs(p.f(x) + lap) <= 1e-6);
  }
}

TEST_CASE("error norms") {
  auto data = fixtures::two_cubes();
  for (auto& q : data.points) q.x *= 0.5;
  const Mesh m(data);
  REQUIRE(m.cell_volume(0) == Approx(0.5));
  const auto zero = [](const Vec3&) { return 0.0; };
  const auto e = error_norms(m, {0.1, -0.1}, zero);
  CHECK(e.l2 == Approx(0.1).epsilon(1e-15));
  CHECK(e.linf == Approx(0.1).epsilon(1e-15));
  CHECK(e.rms == Approx(0.1).epsilon(1e-15));

  const Mesh hex = generate({Family::tet, 3, 0, 0.2, 1});
  const auto p = manufactured_problem();
  CellField u(hex.n_cells());
  for (Index c = 0; c < hex.n_cells(); ++c) u[c] = p.u(hex.cell_center(c));
  const auto exact = error_norms(hex, u, p.u);
  CHECK(exact.l2 == 0.0);
  CHECK(exact.linf == 0.0);
  CHECK_THROWS_AS(error_norms(hex, {1.0}, p.u), std::invalid_argument);
}

TEST_CASE("empirical order") {
  CHECK(eoc(9.2721e-5, 2.3439e-5, 0.1, 0.05) == Approx(1.984).epsilon(5e-4));
  CHECK(eoc(3.0907e-4, 3.2172e-4, 2.1113e-2, 1.1023e-2) == Approx(-0.062).epsilon(5e-3));
  CHECK(eoc(1e-3, 1e-3, 0.2, 0.1) == 0.0);
  CHECK_THROWS_AS(eoc(0.0, 1e-3, 0.2, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(eoc(1e-3, 1e-3, 0.1, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(eoc(1e-3, std::nan(""), 0.2, 0.1), std::invalid_argument);
}

TEST_CASE("single-level study has no orders") {
  const auto r = run_study(Family::hex, {10}, GradScheme::gauss);
  REQUIRE(r.rows.size() == 1);
  const auto& row = r.rows[0];
  CHECK_FALSE(row.p2.has_value());
  CHECK_FALSE(row.pinf.has_value());
  CHECK(row.status == "ok");
  CHECK(row.outer_iters == 1);
  CHECK(row.e2 < 2 * 9.2721e-5);
  CHECK(row.e2 > 9.2721e-5 / 2);
  CHECK(row.e2 < row.einf);
  CHECK(row.weak_form);
  const std::string csv = r.to_csv();
  CHECK(csv.rfind("family,level,mean_d,mean_theta,theta_max,ar_max,s_max,e2,einf,p2,pinf,outer_iters,stagnated,", 0) == 0);
  CHECK(csv.find("\nhex,10,") != std::string::npos);
  // Empty order columns, one outer iteration, not stagnated.
  CHECK(csv.find(",,,1,0,pass,") != std::string::npos);
}

TEST_CASE("hex orders between two levels") {
  const auto r = run_study(Family::hex, {10, 20}, GradScheme::gauss);
  REQUIRE(r.rows.size() == 2);
  REQUIRE(r.rows[0].p2.has_value());
  CHECK(*r.rows[0].p2 == Approx(1.984).epsilon(0.01));
  CHECK(*r.rows[0].pinf >= 1.85);
  CHECK_FALSE(r.rows[1].p2.has_value());
}

TEST_CASE("study output is reproducible and records failures") {
  StudyConfig cfg;
  cfg.family = Family::hexskew;
  cfg.levels = {4, 8};
  const auto a = run_study(cfg).to_csv(true);
  const auto b = run_study(cfg).to_csv(true);
  CHECK(a == b);
  CHECK(a.find("e_rms,inner_residual") != std::string::npos);

  cfg.skew = 0.45;
  int calls = 0;
  cfg.progress = [&](const StudyRow&, double seconds) {
    ++calls;
    CHECK(seconds >= 0.0);
  };
  const auto r = run_study(cfg);
  CHECK(calls == 2);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[1].status.rfind("generation_failed", 0) == 0);
  CHECK_FALSE(r.rows[0].p2.has_value());

  cfg.levels = {8, 4};
  CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);
  cfg.levels = {};
  CHECK_THROWS_AS(run_study(cfg), std::invalid_argument);
}

TEST_CASE("csv file") {
  const auto path = std::filesystem::temp_directory_path() / "gcfv_study_test.csv";
  const auto r = run_study(Family::triprism, {3, 6}, GradScheme::least_squares, path);
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  CHECK(ss.str() == r.to_csv());
  std::filesystem::remove(path);
}

TEST_CASE("default levels") {
  CHECK(default_levels(Family::hex) == std::vector<int>{10, 20, 40, 80});
  CHECK(default_levels(Family::tet) == std::vector<int>{8, 12, 18, 27});
  CHECK(default_levels(Family::poly) == std::vector<int>{8, 12, 18, 27});
}

TEST_CASE("vtk export of native cells") {
  const Mesh hex = generate({Family::hex, 2, 0, 0, 1});
  CellField u(hex.n_cells());
  for (Index c = 0; c < hex.n_cells(); ++c) u[c] = c;
  const auto parsed = parse_vtk(vtk_string(hex, {{"u", u}}));
  CHECK(parsed.n_points == 27);
  REQUIRE(parsed.cells.size() == 8);
  for (Index c = 0; c < 8; ++c) {
    CHECK(parsed.types[c] == 12);
    const auto& v = parsed.cells[c];
    REQUIRE(v.size() == 8);
    // Base normal points towards the top face.
    Vec3 top{0, 0, 0}, bottom{0, 0, 0};
    for (int i = 0; i < 4; ++i) {
      bottom = bottom + point(hex, v[i]);
      top = top + point(hex, v[i + 4]);
    }
    CHECK(dot(tri_normal(point(hex, v[0]), point(hex, v[1]), point(hex, v[2])), top - bottom) > 0.0);
    for (int i = 0; i < 4; ++i) CHECK(norm(point(hex, v[i + 4]) - point(hex, v[i])) == Approx(0.5));
  }
  CHECK(parsed.fields == std::vector<std::string>{"u"});

  const Mesh tet = generate({Family::tet, 2, 0, 0.2, 3});
  const auto pt = parse_vtk(vtk_string(tet, {}));
  CHECK_FALSE(pt.has_cell_data);
  for (std::size_t c = 0; c < pt.cells.size(); ++c) {
    CHECK(pt.types[c] == 10);
    const auto& v = pt.cells[c];
    CHECK(fixtures::tet_volume(point(tet, v[0]), point(tet, v[1]), point(tet, v[2]), point(tet, v[3])) > 0.0);
  }

  const Mesh prism = generate({Family::triprism, 2, 0, 0, 1});
  const auto pp = parse_vtk(vtk_string(prism, {}));
  for (std::size_t c = 0; c < pp.cells.size(); ++c) {
    CHECK(pp.types[c] == 13);
    const auto& v = pp.cells[c];
    const Vec3 away = point(prism, v[0]) - point(prism, v[3]);
    CHECK(dot(tri_normal(point(prism, v[0]), point(prism, v[1]), point(prism, v[2])), away) > 0.0);
  }
}

TEST_CASE("vtk export of polyhedra") {
  const Mesh m = generate({Family::poly, 3, 0, 0.3, 1});
  const auto parsed = parse_vtk(vtk_string(m, {{"a", CellField(m.n_cells(), 1.0)}, {"b", CellField(m.n_cells(), 2.0)}}));
  REQUIRE(parsed.cells.size() == m.n_cells());
  CHECK(parsed.fields == std::vector<std::string>{"a", "b"});
  std::size_t polyhedra = 0;
  for (Index c = 0; c < m.n_cells(); ++c) {
    CAPTURE(c);
    CHECK(parsed.types[c] == vtk_cell_type(m, c));
    if (parsed.types[c] != 42) {
      CHECK(parsed.cells[c].size() == m.cell_vertices(c).size());
      continue;
    }
    ++polyhedra;
    const auto& s = parsed.cells[c];
    const auto faces = m.cell_faces(c);
    REQUIRE(s[0] == faces.size());
    std::size_t pos = 1;
    for (Index f : faces) {
      REQUIRE(pos < s.size());
      const std::size_t k = s[pos++];
      CHECK(k == m.face_vertices(f).size());
      // Outward orientation of every face in the stream.
      Vec3 area{0, 0, 0};
      for (std::size_t i = 0; i < k; ++i) {
        const Index a = s[pos + i], b = s[pos + (i + 1) % k];
        CHECK(a < m.n_points());
        area = area + cross(point(m, a), point(m, b));
      }
      CHECK(dot(area, m.outward_normal(c, f)) > 0.0);
      pos += k;
    }
    CHECK(pos == s.size());
  }
  CHECK(polyhedra > 0);
}

TEST_CASE("vtk export errors") {
  const Mesh m = generate({Family::hex, 2, 0, 0, 1});
  CHECK_THROWS_AS(vtk_string(m, {{"bad name", CellField(8, 0.0)}}), std::invalid_argument);
  CHECK_THROWS_AS(vtk_string(m, {{"u", CellField(3, 0.0)}}), std::invalid_argument);
  CHECK_THROWS_AS(export_vtk(m, {}, "/nonexistent-dir/x.vtk"), Error);
  const auto path = std::filesystem::temp_directory_path() / "gcfv_vtk_test.vtk";
  export_vtk(m, {}, path);
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  CHECK(ss.str() == vtk_string(m, {}));
  std::filesystem::remove(path);
}
