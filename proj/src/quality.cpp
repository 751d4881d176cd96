#include "gcfv/quality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gcfv/errors.hpp"

namespace gcfv {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

// Angle between two vectors, well conditioned near zero.
double angle_between(const Vec3& a, const Vec3& b) { return std::atan2(norm(cross(a, b)), dot(a, b)); }

}  // namespace

std::vector<double> face_nonorthogonality(const Mesh& mesh) {
  std::vector<double> theta(mesh.n_internal_faces());
  for (Index f = 0; f < mesh.n_internal_faces(); ++f) {
    const Vec3 delta = mesh.cell_center(mesh.neighbour(f)) - mesh.cell_center(mesh.owner(f));
    if (!(dot(delta, mesh.face_normal(f)) > 0.0)) {
      std::ostringstream os;
      os << "face " << f << " normal points away from its neighbour";
      throw NonConvexPairing(os.str());
    }
    theta[f] = angle_between(delta, mesh.face_normal(f)) * kRadToDeg;
  }
  return theta;
}

std::vector<double> cell_aspect_ratio(const Mesh& mesh) {
  std::vector<double> ar(mesh.n_cells());
  for (Index c = 0; c < mesh.n_cells(); ++c) {
    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max()};
    Vec3 hi = -lo;
    for (Index v : mesh.cell_vertices(c)) {
      const Vec3& p = mesh.points()[v];
      for (int i = 0; i < 3; ++i) {
        lo[i] = std::min(lo[i], p[i]);
        hi[i] = std::max(hi[i], p[i]);
      }
    }
    const Vec3 e = hi - lo;
    const double areas[3] = {e.y * e.z, e.x * e.z, e.x * e.y};
    const double bb = *std::max_element(areas, areas + 3) / *std::min_element(areas, areas + 3);

    double total = 0.0;
    for (Index f : mesh.cell_faces(c)) total += mesh.face_area(f);
    const double compact = total / (6.0 * std::pow(mesh.cell_volume(c), 2.0 / 3.0));
    ar[c] = std::max(bb, compact);
  }
  return ar;
}

double skewness_of(const Vec3& x_k, const Vec3* far_point, const Vec3& x_sigma, const Vec3& normal,
                   std::span<const Vec3> vertices) {
  Vec3 y;
  double base;
  if (far_point) {
    const Vec3 delta = *far_point - x_k;
    const double denom = dot(delta, normal);
    const double t = denom != 0.0 ? dot(x_sigma - x_k, normal) / denom : -1.0;
    if (!(t >= 0.0 && t <= 1.0)) return std::numeric_limits<double>::quiet_NaN();
    y = x_k + t * delta;
    base = 0.2 * norm(delta);
  } else {
    y = x_k + dot(x_sigma - x_k, normal) * normal;
    base = 0.4 * norm(y - x_k);
  }
  const Vec3 offset = x_sigma - y;
  const double dist = norm(offset);
  if (dist == 0.0) return 0.0;
  const Vec3 e = offset / dist;
  double spread = 0.0;
  for (const Vec3& p : vertices) spread = std::max(spread, std::fabs(dot(p - x_sigma, e)));
  return dist / std::max(base, spread);
}

SkewnessResult face_skewness(const Mesh& mesh) {
  SkewnessResult out;
  out.values.resize(mesh.n_faces());
  std::vector<Vec3> verts;
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    verts.clear();
    for (Index v : mesh.face_vertices(f)) verts.push_back(mesh.points()[v]);
    const Vec3& xk = mesh.cell_center(mesh.owner(f));
    if (mesh.is_internal(f)) {
      const Vec3& xl = mesh.cell_center(mesh.neighbour(f));
      out.values[f] = skewness_of(xk, &xl, mesh.face_centroid(f), mesh.face_normal(f), verts);
      if (std::isnan(out.values[f])) out.undefined_faces.push_back(f);
    } else {
      out.values[f] = skewness_of(xk, nullptr, mesh.face_centroid(f), mesh.face_normal(f), verts);
    }
  }
  return out;
}

double regularity_factor(const Mesh& mesh) {
  double theta = std::numeric_limits<double>::infinity();
  for (Index f = 0; f < mesh.n_faces(); ++f) {
    const Index k = mesh.owner(f);
    const Vec3& n = mesh.face_normal(f);
    const double dk = mesh.d_owner(f);
    if (mesh.is_internal(f)) {
      const Index l = mesh.neighbour(f);
      const double dl = mesh.d_neighbour(f);
      const Vec3 delta = mesh.cell_center(l) - mesh.cell_center(k);
      const double ni = dot(n, delta) / norm(delta);
      theta = std::min({theta, dk / dl, dl / dk, mesh.cell_diameter(k) / dk, mesh.cell_diameter(l) / dl, ni});
    } else {
      const Vec3 delta = mesh.face_centroid(f) - mesh.cell_center(k);
      const double ni = dot(n, delta) / norm(delta);
      theta = std::min({theta, mesh.cell_diameter(k) / dk, ni});
    }
  }
  return theta;
}

double mean_resolution(const Mesh& mesh) {
  if (mesh.n_internal_faces() == 0) return 0.0;
  double sum = 0.0;
  for (Index f = 0; f < mesh.n_internal_faces(); ++f)
    sum += norm(mesh.cell_center(mesh.neighbour(f)) - mesh.cell_center(mesh.owner(f)));
  return sum / static_cast<double>(mesh.n_internal_faces());
}

QualityReport quality_report(const Mesh& mesh) {
  QualityReport r;
  r.mean_d = mean_resolution(mesh);
  const auto theta = face_nonorthogonality(mesh);
  if (!theta.empty()) {
    double sum = 0.0;
    for (double t : theta) sum += t;
    r.mean_theta = sum / static_cast<double>(theta.size());
    r.theta_max = *std::max_element(theta.begin(), theta.end());
  }
  const auto ar = cell_aspect_ratio(mesh);
  r.ar_max = ar.empty() ? 0.0 : *std::max_element(ar.begin(), ar.end());
  const auto skew = face_skewness(mesh);
  for (double s : skew.values)
    if (!std::isnan(s)) r.s_max = std::max(r.s_max, s);
  r.skew_undefined = skew.undefined_faces.size();
  r.theta_tilde = regularity_factor(mesh);
  return r;
}

}  // namespace gcfv
