#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "gcfv/errors.hpp"
#include "gcfv/mesh_gen.hpp"
#include "gcfv/operators.hpp"
#include "gcfv/quality.hpp"
#include "oracles.hpp"

using namespace gcfv;
using doctest::Approx;

namespace {

constexpr Family kFamilies[] = {Family::hex,       Family::hexskew, Family::triprism,
                                Family::polyprism, Family::tet,     Family::poly};

Mesh family_mesh(Family f, int n = 4) { return Mesh(generate(reference_spec(f, n))); }

Mesh two_cubes_with_centers(const Vec3& a, const Vec3& b) {
  auto data = fixtures::two_cubes();
  data.cell_centers = std::vector<Vec3>{a, b};
  return Mesh(data);
}

double max_abs_diff(const Mat3& a, const Mat3& b) { return (a - b).max_abs(); }

bool touches_boundary(const Mesh& m, Index c) {
  for (Index f : m.cell_faces(c))
    if (!m.is_internal(f)) return true;
  return false;
}

Index face_with_normal(const Mesh& m, const Vec3& n) {
  for (Index f = 0; f < m.n_faces(); ++f)
    if (norm(m.face_normal(f) - n) < 1e-14) return f;
  FAIL("no face with that normal");
  return 0;
}

CellField sample(const Mesh& m, auto&& fn) {
  CellField u(m.n_cells());
  for (Index c = 0; c < m.n_cells(); ++c) u[c] = fn(m.cell_center(c));
  return u;
}

// Solves a 3x3 system by Gaussian elimination with partial pivoting.
Vec3 solve3(double a[3][3], double b[3]) {
  for (int c = 0; c < 3; ++c) {
    int p = c;
    for (int r = c + 1; r < 3; ++r)
      if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (int r = c + 1; r < 3; ++r) {
      const double m = a[r][c] / a[c][c];
      for (int k = c; k < 3; ++k) a[r][k] -= m * a[c][k];
      b[r] -= m * b[c];
    }
  }
  Vec3 x;
  for (int r = 2; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < 3; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

double ubar(const Vec3& x) { return x.x * (1 - x.x) * x.y * (1 - x.y) * x.z * (1 - x.z); }
Vec3 grad_ubar(const Vec3& x) {
  const double a = x.x * (1 - x.x), b = x.y * (1 - x.y), c = x.z * (1 - x.z);
  return {(1 - 2 * x.x) * b * c, a * (1 - 2 * x.y) * c, a * b * (1 - 2 * x.z)};
}

}  // namespace

TEST_CASE("orthogonal face coefficients") {
  const Mesh m(fixtures::two_cubes());
  const auto fc = face_coefficients(m);
  REQUIRE(m.n_internal_faces() == 1);
  CHECK(fc.tau[0] == Approx(1.0).epsilon(1e-15));
  CHECK(fc.lambda[0] == Approx(0.5).epsilon(1e-15));
  for (Index f = 0; f < m.n_faces(); ++f) {
    CHECK(norm(fc.k[f]) <= 1e-15);
    const Vec3 n = m.face_normal(f);
    CHECK(max_abs_diff(fc.gamma_parallel(f), Mat3::outer(n, n)) <= 1e-15);
    CHECK(max_abs_diff(fc.gamma_nonparallel(f), Mat3::identity() - Mat3::outer(n, n)) <= 1e-15);
    if (!m.is_internal(f)) CHECK(fc.tau[f] == Approx(2.0).epsilon(1e-15));
  }
}

TEST_CASE("tilted cell-to-cell direction") {
  // Two 1x2x1 boxes so that both centres stay inside their cells.
  auto data = fixtures::two_cubes();
  for (auto& p : data.points) p.y *= 2.0;
  data.cell_centers = std::vector<Vec3>{{0.5, 0.5, 0.5}, {1.5, 1.5, 0.5}};
  const Mesh m(data);
  const auto fc = face_coefficients(m);
  REQUIRE(norm(m.face_normal(0) - Vec3{1, 0, 0}) < 1e-15);
  CHECK(fc.n_dot_i[0] == Approx(1 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(norm(fc.k[0] - Vec3{0, -1, 0}) <= 1e-15);
  Mat3 expected;
  expected(0, 0) = expected(0, 1) = expected(1, 0) = expected(1, 1) = 1.0;
  CHECK(max_abs_diff(fc.gamma_parallel(0), expected) <= 1e-15);
  CHECK(max_abs_diff(fc.gamma_parallel(0) + fc.gamma_nonparallel(0), Mat3::identity()) <= 1e-15);
  // Gamma^par n = alpha i / (i.n)
  CHECK(norm(fc.gamma_parallel(0) * Vec3{1, 0, 0} - fc.i[0] / fc.n_dot_i[0]) <= 1e-15);
  CHECK(std::fabs(dot(fc.k[0], m.face_normal(0))) <= 1e-15);
}

TEST_CASE("face diffusivity") {
  const CellField alpha{1.0, 3.0};
  const Mesh sym(fixtures::two_cubes());
  CHECK(face_coefficients(sym, alpha).alpha[0] == Approx(2.0).epsilon(1e-15));
  CHECK(face_coefficients(sym, alpha, FaceDiffusivity::diamond).alpha[0] == Approx(2.0).epsilon(1e-15));

  // d_K = 0.25, d_L = 0.5
  const Mesh m = two_cubes_with_centers({0.75, 0.5, 0.5}, {1.5, 0.5, 0.5});
  const auto lin = face_coefficients(m, alpha);
  CHECK(lin.lambda[0] == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(lin.alpha[0] == Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(face_coefficients(m, alpha, FaceDiffusivity::diamond).alpha[0] == Approx(7.0 / 3.0).epsilon(1e-15));
  for (Index f = 1; f < m.n_faces(); ++f) CHECK(lin.alpha[f] == alpha[m.owner(f)]);

  CHECK_THROWS_AS(face_coefficients(m, CellField{1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(face_coefficients(m, CellField{1.0}), std::invalid_argument);
}

TEST_CASE("nearly tangential boundary direction is rejected") {
  auto data = fixtures::two_cubes();
  data.cell_centers = std::vector<Vec3>{{1e-13, 0.9, 0.5}, {1.5, 0.5, 0.5}};
  const Mesh m(data);
  CHECK_THROWS_AS(face_coefficients(m), FaceDegenerate);
}

TEST_CASE("tensor decomposition on every family") {
  for (Family fam : kFamilies) {
    CAPTURE(to_string(fam));
    const Mesh m = family_mesh(fam);
    const auto fc = face_coefficients(m);
    double worst = 0.0;
    for (Index f = 0; f < m.n_faces(); ++f) {
      const Mat3 gp = fc.gamma_parallel(f), gn = fc.gamma_nonparallel(f);
      worst = std::max({worst, max_abs_diff(gp + gn, fc.alpha[f] * Mat3::identity()),
                        max_abs_diff(gp, gp.transposed()), max_abs_diff(gn, gn.transposed()),
                        norm(gp * m.face_normal(f) - fc.alpha[f] * fc.i[f] / fc.n_dot_i[f]),
                        std::fabs(dot(fc.k[f], m.face_normal(f)))});
    }
    CHECK(worst <= 1e-13);
  }
}

TEST_CASE("Gauss gradient") {
  const Mesh m = family_mesh(Family::hex);
  const Vec3 g{0.3, -1.2, 2.5};
  const auto grad = gauss_gradient(m, sample(m, [&](const Vec3& x) { return dot(g, x) + 0.7; }));
  const auto flat = gauss_gradient(m, CellField(m.n_cells(), 4.0));
  for (Index c = 0; c < m.n_cells(); ++c) {
    if (touches_boundary(m, c)) continue;
    CHECK(norm(grad[c] - g) <= 1e-13);
    CHECK(norm(flat[c]) <= 1e-13);
  }

  const Mesh skew = family_mesh(Family::hexskew);
  std::mt19937_64 rng(7);
  const auto u = oracles::random_field(skew, rng);
  const auto gs = gauss_gradient(skew, u);
  for (Index c : {Index{0}, Index{21}, skew.n_cells() - 1}) {
    Vec3 sum;
    for (Index f : skew.cell_faces(c)) {
      const Vec3 n = skew.outward_normal(c, f);
      double face_value = 0.0;
      if (skew.is_internal(f)) {
        const Index o = skew.owner(f) == c ? skew.neighbour(f) : skew.owner(f);
        const double dc = skew.distance(c, f), d_o = skew.distance(o, f);
        face_value = (d_o * u[c] + dc * u[o]) / (dc + d_o);
      }
      sum += skew.face_area(f) * (face_value - u[c]) * n;
    }
    CHECK(norm(gs[c] - sum / skew.cell_volume(c)) <= 1e-12 * norm(gs[c]));
  }
}

TEST_CASE("least-squares gradient is exact for affine data") {
  const Vec3 g{-0.4, 1.1, 0.6};
  const double c0 = 0.25;
  for (Family fam : kFamilies) {
    CAPTURE(to_string(fam));
    const Mesh m = family_mesh(fam);
    const LeastSquaresGradient ls(m);
    const auto u = sample(m, [&](const Vec3& x) { return dot(g, x) + c0; });
    std::vector<double> bv(m.n_faces(), 0.0);
    for (Index f = m.n_internal_faces(); f < m.n_faces(); ++f) bv[f] = dot(g, m.face_centroid(f)) + c0;
    const auto grad = ls(u, bv);
    double worst = 0.0;
    for (const Vec3& v : grad) worst = std::max(worst, norm(v - g));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("least-squares gradient on orthogonal hex matches Gauss inside") {
  const Mesh m = family_mesh(Family::hex, 5);
  std::mt19937_64 rng(3);
  const auto u = oracles::random_field(m, rng);
  const auto a = least_squares_gradient(m, u), b = gauss_gradient(m, u);
  for (Index c = 0; c < m.n_cells(); ++c)
    if (!touches_boundary(m, c)) CHECK(norm(a[c] - b[c]) <= 1e-12 * std::max(1.0, norm(b[c])));
}

TEST_CASE("least-squares gradient solves the normal equations") {
  const Mesh m = family_mesh(Family::tet);
  std::mt19937_64 rng(11);
  const auto u = oracles::random_field(m, rng);
  const auto grad = least_squares_gradient(m, u);
  for (Index c : {Index{0}, Index{100}, Index{200}}) {
    double a[3][3] = {}, b[3] = {};
    for (Index f : m.cell_faces(c)) {
      Vec3 dx;
      double du, w;
      const Vec3 xs = m.face_centroid(f);
      if (m.is_internal(f)) {
        const Index o = m.owner(f) == c ? m.neighbour(f) : m.owner(f);
        dx = m.cell_center(o) - m.cell_center(c);
        du = u[o] - u[c];
        const double dc = dot(xs - m.cell_center(c), m.outward_normal(c, f));
        const double d_o = dot(m.cell_center(o) - xs, m.outward_normal(c, f));
        w = dc / (dc + d_o) * m.face_area(f) / norm2(dx);
      } else {
        dx = xs - m.cell_center(c);
        du = -u[c];
        w = m.face_area(f) / norm2(dx);
      }
      for (int r = 0; r < 3; ++r) {
        for (int s = 0; s < 3; ++s) a[r][s] += w * dx[r] * dx[s];
        b[r] += w * dx[r] * du;
      }
    }
    const Vec3 x = solve3(a, b);
    CHECK(norm(grad[c] - x) <= 1e-12 * norm(x));
  }
}

TEST_CASE("singular least-squares stencil") {
  // One flat cell: every neighbour offset lies in a plane only if the cell is
  // degenerate, so squash the box until the weighting tensor loses rank.
  const Mesh m(fixtures::box(1, 1, 1e-9));
  CHECK_THROWS_AS(LeastSquaresGradient{m}, SingularStencil);
}

TEST_CASE("face gradient") {
  const Mesh m = two_cubes_with_centers({0.25, 0.5, 0.5}, {1.25, 0.5, 0.5});
  const auto fc = face_coefficients(m);
  REQUIRE(fc.lambda[0] == Approx(0.25).epsilon(1e-15));
  const CellVectorField grad{{1, 0, 0}, {0, 1, 0}};
  const CellField u{0.0, 0.0};
  CHECK(norm(face_gradient(m, fc, grad, u, 0) - Vec3{0.25, 0.75, 0}) <= 1e-15);
  CHECK(norm(face_gradient(m, fc, grad, u, 0, FaceGradient::midpoint) - Vec3{0.5, 0.5, 0}) <= 1e-15);
  const CellVectorField same{{0.2, -3, 1}, {0.2, -3, 1}};
  CHECK(norm(face_gradient(m, fc, same, u, 0) - same[0]) <= 1e-15);

  const Mesh thin(fixtures::box(1, 1, 0.1));
  const Index top = face_with_normal(thin, {0, 0, 1});
  REQUIRE(thin.d_owner(top) == Approx(0.05).epsilon(1e-14));
  const auto tfc = face_coefficients(thin);
  const Vec3 gs = face_gradient(thin, tfc, CellVectorField{{1, 2, 3}}, CellField{0.3}, top);
  CHECK(norm(gs - Vec3{1, 2, -6}) <= 1e-12);
  CHECK(dot(gs, thin.face_normal(top)) == Approx(-6.0).epsilon(1e-13));
}

TEST_CASE("corrected flux reduces to two-point flux on hex") {
  const Mesh m = family_mesh(Family::hex, 5);
  const auto fc = face_coefficients(m);
  std::mt19937_64 rng(5);
  const auto u = oracles::random_field(m, rng);
  for (GradScheme s : {GradScheme::gauss, GradScheme::least_squares}) {
    const auto F = corrected_fluxes(m, fc, u, s);
    const auto T = two_point_fluxes(m, fc, u);
    double worst = 0.0;
    for (Index f = 0; f < m.n_faces(); ++f) worst = std::max(worst, std::fabs(F[f] - T[f]));
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("two-point part is the directional derivative along i") {
  const Mesh m = family_mesh(Family::poly);
  const CellField alpha = [&] {
    CellField a(m.n_cells());
    for (Index c = 0; c < m.n_cells(); ++c) a[c] = 1.0 + 0.5 * std::sin(double(c));
    return a;
  }();
  const auto fc = face_coefficients(m, alpha);
  std::mt19937_64 rng(9);
  const auto u = oracles::random_field(m, rng);
  const auto T = two_point_fluxes(m, fc, u);
  for (Index f = 0; f < m.n_internal_faces(); ++f) {
    const Vec3 delta = m.cell_center(m.neighbour(f)) - m.cell_center(m.owner(f));
    const double ni = dot(delta, m.face_normal(f)) / norm(delta);
    const double ref = fc.alpha[f] * m.face_area(f) / ni * (u[m.owner(f)] - u[m.neighbour(f)]) / norm(delta);
    CHECK(T[f] == Approx(ref).epsilon(1e-13));
  }
}

TEST_CASE("affine field gives the exact face flux") {
  const Vec3 g{1.5, -0.5, 0.75};
  for (Family fam : {Family::hexskew, Family::tet, Family::poly}) {
    CAPTURE(to_string(fam));
    const Mesh m = family_mesh(fam);
    const auto fc = face_coefficients(m);
    const auto u = sample(m, [&](const Vec3& x) { return dot(g, x); });
    std::vector<double> bv(m.n_faces());
    for (Index f = 0; f < m.n_faces(); ++f) bv[f] = dot(g, m.face_centroid(f));
    const auto grad = LeastSquaresGradient(m)(u, bv);
    const auto F = corrected_fluxes(m, fc, grad, u);
    for (Index f = 0; f < m.n_internal_faces(); ++f)
      CHECK(F[f] == Approx(-m.face_area(f) * dot(g, m.face_normal(f))).epsilon(1e-12).scale(m.face_area(f)));
  }
}

TEST_CASE("flux form with the special vectors") {
  for (Family fam : kFamilies) {
    CAPTURE(to_string(fam));
    const Mesh m = family_mesh(fam);
    std::mt19937_64 rng(13);
    CellField alpha = oracles::random_field(m, rng);
    for (double& a : alpha) a = 1.5 + a;
    const auto fc = face_coefficients(m, alpha);
    const auto u = oracles::random_field(m, rng);
    for (GradScheme s : {GradScheme::gauss, GradScheme::least_squares}) {
      const auto grad = cell_gradient(m, u, s);
      const auto F = corrected_fluxes(m, fc, grad, u);
      double worst = 0.0, scale = 0.0;
      for (Index f = 0; f < m.n_internal_faces(); ++f) {
        worst = std::max(worst, std::fabs(F[f] - oracles::special_vector_flux(m, alpha, u, grad, f)));
        scale = std::max(scale, std::fabs(F[f]));
      }
      CHECK(worst <= 1e-12 * scale);
    }
  }
}

TEST_CASE("flux divergence") {
  const Mesh m = family_mesh(Family::triprism);
  const auto fc = face_coefficients(m);
  std::mt19937_64 rng(17);
  const auto u = oracles::random_field(m, rng);
  const auto F = corrected_fluxes(m, fc, u, GradScheme::gauss);
  const auto div = flux_divergence(m, F);
  double total = 0.0, boundary = 0.0, scale = 0.0;
  for (double d : div) total += d;
  for (Index f = m.n_internal_faces(); f < m.n_faces(); ++f) boundary += F[f];
  for (double x : F) scale += std::fabs(x);
  CHECK(std::fabs(total - boundary) <= 1e-12 * scale);
  for (Index c = 0; c < m.n_cells(); c += 37) {
    double s = 0.0;
    for (Index f : m.cell_faces(c)) s += m.orientation(c, f) * F[f];
    CHECK(div[c] == Approx(s).epsilon(1e-14));
  }
  FaceField single(m.n_faces(), 0.0);
  single[3] = 2.5;
  const auto d1 = flux_divergence(m, single);
  CHECK(d1[m.owner(3)] == 2.5);
  CHECK(d1[m.neighbour(3)] == -2.5);
  CHECK(std::count_if(d1.begin(), d1.end(), [](double x) { return x != 0.0; }) == 2);
}

TEST_CASE("discrete norm") {
  const Mesh m(fixtures::two_cubes());
  CHECK(discrete_norm(m, {0.0, 0.0}) == 0.0);
  CHECK(discrete_norm(m, {1.0, 0.0}) == Approx(std::sqrt(11.0)).epsilon(1e-15));
  const Mesh p = family_mesh(Family::polyprism);
  std::mt19937_64 rng(19);
  const auto u = oracles::random_field(p, rng), v = oracles::random_field(p, rng);
  const auto fc = face_coefficients(p);
  CHECK(parallel_inner_product(p, fc, u, v) == Approx(oracles::parallel_product_unit(p, u, v)).epsilon(1e-12));
  CHECK(parallel_inner_product(p, fc, u, v) == Approx(parallel_inner_product(p, fc, v, u)).epsilon(1e-14));
}

TEST_CASE("biased gradients") {
  const Mesh hex = family_mesh(Family::hex);
  std::mt19937_64 rng(23);
  auto u = oracles::random_field(hex, rng);
  for (const Vec3& g : biased_gradients(hex, face_coefficients(hex), u).nonparallel) CHECK(norm(g) <= 1e-13);

  for (Family fam : kFamilies) {
    CAPTURE(to_string(fam));
    const Mesh m = family_mesh(fam);
    u = oracles::random_field(m, rng);
    const auto bg = biased_gradients(m, face_coefficients(m), u);
    double worst = 0.0, scale = 0.0;
    for (Index c = 0; c < m.n_cells(); ++c) {
      worst = std::max(worst, norm(bg.full[c] - bg.parallel[c] - bg.nonparallel[c]));
      scale = std::max(scale, norm(bg.full[c]));
    }
    CHECK(worst <= 1e-12 * scale);
  }
}

TEST_CASE("weak-form identity on every family") {
  std::mt19937_64 rng(29);
  for (Family fam : kFamilies) {
    CAPTURE(to_string(fam));
    const Mesh m = family_mesh(fam);
    CellField alpha = oracles::random_field(m, rng);
    for (double& a : alpha) a = 2.0 + a;
    const auto fc = face_coefficients(m, alpha);
    for (GradScheme s : {GradScheme::gauss, GradScheme::least_squares}) {
      const auto u = oracles::random_field(m, rng), v = oracles::random_field(m, rng);
      const auto grad = cell_gradient(m, u, s);
      const auto F = corrected_fluxes(m, fc, grad, u);
      const auto div = flux_divergence(m, F);
      double lhs = 0.0, scale = 0.0;
      for (Index c = 0; c < m.n_cells(); ++c) {
        lhs += v[c] * div[c];
        scale += std::fabs(v[c] * div[c]);
      }
      const double rhs = parallel_inner_product(m, fc, u, v) + nonparallel_bilinear(m, fc, grad, v);
      CHECK(std::fabs(lhs - rhs) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("non-parallel bilinear form") {
  const Mesh hex = family_mesh(Family::hex);
  std::mt19937_64 rng(31);
  const auto fc_hex = face_coefficients(hex);
  auto u = oracles::random_field(hex, rng), v = oracles::random_field(hex, rng);
  CHECK(std::fabs(nonparallel_bilinear(hex, fc_hex, gauss_gradient(hex, u), v)) <= 1e-12);

  const Mesh m = family_mesh(Family::hexskew);
  const auto fc = face_coefficients(m);
  u = oracles::random_field(m, rng);
  v = oracles::random_field(m, rng);
  const double uv = nonparallel_bilinear(m, fc, gauss_gradient(m, u), v);
  const double vu = nonparallel_bilinear(m, fc, gauss_gradient(m, v), u);
  CHECK(std::fabs(uv - vu) > 1e-6 * (std::fabs(uv) + std::fabs(vu)));
}

TEST_CASE("sampled inequalities") {
  std::mt19937_64 rng(37);
  for (Family fam : kFamilies) {
    CAPTURE(to_string(fam));
    const Mesh m = family_mesh(fam);
    const auto fc = face_coefficients(m);
    const double theta = regularity_factor(m);
    int violations = 0;
    for (int s = 0; s < 20; ++s) {
      const auto u = oracles::random_field(m, rng);
      const double nd = discrete_norm(m, u);
      if (l2_norm(m, u) > std::sqrt(3.0) * nd) ++violations;
      if (l2_norm(m, gauss_gradient(m, u)) > std::sqrt(6.0) * nd) ++violations;
      if (l2_norm(m, gamma_nonparallel_gradient(m, fc, u)) > std::sqrt(6.0) / theta * nd) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("Gauss gradient consistency") {
  for (Family fam : {Family::hex, Family::hexskew}) {
    CAPTURE(to_string(fam));
    double prev_e = 0.0, prev_h = 0.0;
    for (int n : {4, 8, 16}) {
      const Mesh m = family_mesh(fam, n);
      const auto grad = gauss_gradient(m, sample(m, ubar));
      CellVectorField err(m.n_cells());
      for (Index c = 0; c < m.n_cells(); ++c) err[c] = grad[c] - grad_ubar(m.cell_center(c));
      const double e = l2_norm(m, err), h = mean_resolution(m);
      if (prev_e > 0.0) CHECK(std::log(prev_e / e) / std::log(prev_h / h) >= 0.9);
      prev_e = e;
      prev_h = h;
    }
  }
}

TEST_CASE("distortion condition") {
  const Mesh hex = family_mesh(Family::hex);
  std::mt19937_64 rng(41);
  const auto d = distortion_condition(hex, oracles::random_field(hex, rng));
  CHECK(d.lhs == Approx(d.rhs).epsilon(1e-12));
  CHECK(d.satisfied);

  const Mesh skew = family_mesh(Family::hexskew, 6);
  const auto smooth = distortion_condition(skew, sample(skew, ubar));
  CHECK(smooth.lhs > 0.0);
  CHECK(smooth.margin == Approx(smooth.lhs - smooth.rhs));
  CHECK(smooth.satisfied == (smooth.lhs >= smooth.rhs - 1e-12 * smooth.lhs));

  // Reported, never thrown.
  const Mesh tet = family_mesh(Family::tet, 6);
  for (int s = 0; s < 5; ++s) CHECK_NOTHROW(distortion_condition(tet, oracles::random_field(tet, rng)));
}
