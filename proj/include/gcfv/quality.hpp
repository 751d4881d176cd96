#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gcfv/mesh.hpp"

namespace gcfv {

/// Table-style mesh statistics. Angles in degrees.
struct QualityReport {
  double mean_d = 0.0;
  double mean_theta = 0.0;
  double theta_max = 0.0;
  double ar_max = 0.0;
  double s_max = 0.0;
  double theta_tilde = 0.0;
  std::size_t skew_undefined = 0;  // faces whose segment misses the face plane
};

/// Angle between x_L - x_K and n_{K,sigma} per internal face, in degrees.
/// Throws NonConvexPairing when the normal points away from the neighbour.
std::vector<double> face_nonorthogonality(const Mesh& mesh);

/// max(bounding-box face-area ratio, total face area / (6 |K|^{2/3})) per cell.
std::vector<double> cell_aspect_ratio(const Mesh& mesh);

struct SkewnessResult {
  std::vector<double> values;          // per face; NaN where undefined
  std::vector<Index> undefined_faces;  // internal faces with no segment/plane crossing
};

/// Normalised distance between the face centroid and the point where the
/// centre-to-centre segment (boundary: the orthogonal projection of x_K)
/// meets the face plane.
SkewnessResult face_skewness(const Mesh& mesh);

/// Skewness of a single face from explicit geometry. `far_point` is x_L for
/// internal faces; pass nullptr for a boundary face.
double skewness_of(const Vec3& x_k, const Vec3* far_point, const Vec3& x_sigma, const Vec3& normal,
                   std::span<const Vec3> vertices);

/// Regularity factor: minimum over faces of the distance ratios, h_K/d_{K,sigma}
/// and n . i, taken verbatim from both sides of every internal face.
double regularity_factor(const Mesh& mesh);

/// Mean |x_K - x_L| over internal faces.
double mean_resolution(const Mesh& mesh);

QualityReport quality_report(const Mesh& mesh);

}  // namespace gcfv
