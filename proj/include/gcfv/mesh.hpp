#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gcfv/vec3.hpp"

namespace gcfv {

using Index = std::size_t;

/// Raw face-based mesh arrays, as stored on disk.
///
/// Faces are vertex loops oriented outward from their owner. Internal faces
/// come first; `neighbour` has one entry per internal face.
struct MeshData {
  std::vector<Vec3> points;
  std::vector<std::vector<Index>> faces;
  std::vector<Index> owner;
  std::vector<Index> neighbour;
  Index n_internal_faces = 0;
  std::optional<std::vector<Vec3>> cell_centers;

  friend bool operator==(const MeshData&, const MeshData&) = default;
};

struct FaceGeometry {
  double area = 0.0;
  Vec3 normal;
  Vec3 centroid;
};

struct CellGeometry {
  double volume = 0.0;
  Vec3 centroid;
};

/// Area, unit normal and centroid of a vertex loop.
///
/// The loop is fan-triangulated about its vertex average. Area is the sum of
/// the triangle areas, the centroid is area weighted and the normal is the
/// renormalised area-weighted triangle normal. For planar loops this is the
/// exact polygon geometry. Throws DegenerateFace when the area falls below
/// 1e-14 times the squared loop diameter.
FaceGeometry face_geometry(std::span<const Vec3> loop);

/// Polyhedral mesh with cached geometry. Immutable after construction.
class Mesh {
 public:
  /// Validates topology (TopologyError) and computes all derived geometry.
  explicit Mesh(MeshData data);

  const MeshData& data() const { return data_; }

  Index n_points() const { return data_.points.size(); }
  Index n_faces() const { return data_.faces.size(); }
  Index n_internal_faces() const { return data_.n_internal_faces; }
  Index n_cells() const { return n_cells_; }

  bool is_internal(Index f) const { return f < data_.n_internal_faces; }
  Index owner(Index f) const { return data_.owner[f]; }
  Index neighbour(Index f) const { return data_.neighbour[f]; }

  const std::vector<Vec3>& points() const { return data_.points; }
  std::span<const Index> face_vertices(Index f) const { return data_.faces[f]; }
  std::span<const Index> cell_faces(Index c) const {
    return {cell_faces_.data() + cell_face_offsets_[c],
            cell_face_offsets_[c + 1] - cell_face_offsets_[c]};
  }
  /// Vertices of a cell, ascending and unique.
  std::span<const Index> cell_vertices(Index c) const {
    return {cell_vertices_.data() + cell_vertex_offsets_[c],
            cell_vertex_offsets_[c + 1] - cell_vertex_offsets_[c]};
  }

  double face_area(Index f) const { return face_area_[f]; }
  /// Unit normal pointing out of the owner.
  const Vec3& face_normal(Index f) const { return face_normal_[f]; }
  const Vec3& face_centroid(Index f) const { return face_centroid_[f]; }

  /// +1 if `c` owns `f`, -1 if it is the neighbour.
  double orientation(Index c, Index f) const { return data_.owner[f] == c ? 1.0 : -1.0; }
  /// Unit normal of `f` pointing out of cell `c`.
  Vec3 outward_normal(Index c, Index f) const { return orientation(c, f) * face_normal_[f]; }

  double cell_volume(Index c) const { return cell_volume_[c]; }
  const Vec3& cell_centroid(Index c) const { return cell_centroid_[c]; }
  /// The point x_K used by the scheme (centroid unless the file overrides it).
  const Vec3& cell_center(Index c) const { return cell_center_[c]; }
  /// Maximum vertex-pair distance.
  double cell_diameter(Index c) const { return cell_diameter_[c]; }
  double mesh_size() const { return mesh_size_; }

  /// Orthogonal distance from the owner / neighbour centre to the face.
  double d_owner(Index f) const { return d_owner_[f]; }
  double d_neighbour(Index f) const { return d_neighbour_[f]; }
  double distance(Index c, Index f) const { return data_.owner[f] == c ? d_owner_[f] : d_neighbour_[f]; }
  /// Half-diamond volume |sigma| d / 3 on the given side.
  double half_diamond_volume(Index c, Index f) const { return face_area_[f] * distance(c, f) / 3.0; }

 private:
  void build_connectivity();
  void compute_geometry();

  MeshData data_;
  Index n_cells_ = 0;
  std::vector<Index> cell_face_offsets_;
  std::vector<Index> cell_faces_;
  std::vector<Index> cell_vertex_offsets_;
  std::vector<Index> cell_vertices_;

  std::vector<double> face_area_;
  std::vector<Vec3> face_normal_;
  std::vector<Vec3> face_centroid_;
  std::vector<double> cell_volume_;
  std::vector<Vec3> cell_centroid_;
  std::vector<Vec3> cell_center_;
  std::vector<double> cell_diameter_;
  std::vector<double> d_owner_;
  std::vector<double> d_neighbour_;
  double mesh_size_ = 0.0;
};

/// Volume and centroid of one cell from the tetrahedra joining the vertex
/// average to every fan triangle of its faces (the face pyramids when faces
/// are planar). Throws OpenCell if the faces do not close, InvertedCell if
/// the volume is not positive.
CellGeometry cell_geometry(Index cell, const Mesh& mesh);

/// Same decomposition with a caller-chosen provisional apex.
CellGeometry cell_geometry(Index cell, const Mesh& mesh, const Vec3& apex);

/// d_{K,sigma} = (x_sigma - x_K) . n_{K,sigma}; throws StarShapeViolation when
/// not strictly positive and std::invalid_argument if the face is not on the cell.
double orthogonal_distance(Index cell, Index face, const Mesh& mesh);

struct AuditItem {
  std::string name;
  double max_violation = 0.0;  // relative to the local length scale
  double tolerance = 0.0;
  std::size_t failing = 0;     // number of offending cells/faces
  std::ptrdiff_t worst = -1;   // index of the worst offender
  bool passed() const { return failing == 0; }
};

struct AuditReport {
  std::vector<AuditItem> items;
  bool passed() const;
  const AuditItem& item(const std::string& name) const;
};

/// Checks the mesh invariants: positive orthogonal distances, closed cells,
/// the volume identity, the volume tensor identity and face/cell incidence.
/// Violations are reported, never thrown.
AuditReport audit_mesh(const Mesh& mesh);

/// Names used in AuditReport::items.
namespace audit_names {
inline constexpr const char* kStarShaped = "star_shaped";
inline constexpr const char* kClosedCell = "closed_cell";
inline constexpr const char* kVolumeIdentity = "volume_identity";
inline constexpr const char* kTensorIdentity = "tensor_identity";
inline constexpr const char* kIncidence = "face_cell_incidence";
}  // namespace audit_names

}  // namespace gcfv
