#include "gcfv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "gcfv/errors.hpp"

namespace gcfv {

namespace {

constexpr double kClosureTol = 1e-12;
constexpr double kVolumeTol = 1e-12;
constexpr double kTensorTol = 1e-10;
constexpr double kOpenCellThrowTol = 1e-10;

std::string face_msg(const char* what, Index f) {
  std::ostringstream os;
  os << what << " (face " << f << ")";
  return os.str();
}

}  // namespace

FaceGeometry face_geometry(std::span<const Vec3> loop) {
  const std::size_t n = loop.size();
  if (n < 3) throw DegenerateFace("face loop has fewer than 3 vertices");

  // Averaging offsets from the first vertex keeps coordinates that are equal
  // across the loop exact.
  Vec3 shift;
  for (const Vec3& p : loop) shift += p - loop[0];
  const Vec3 mid = loop[0] + shift / static_cast<double>(n);

  double diam2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) diam2 = std::max(diam2, norm2(loop[i] - loop[j]));

  Vec3 area_vec;
  for (std::size_t i = 0; i < n; ++i)
    area_vec += 0.5 * cross(loop[i] - mid, loop[(i + 1) % n] - mid);
  const double vec_area = norm(area_vec);
  if (!(vec_area > 1e-14 * diam2)) throw DegenerateFace("face loop is degenerate");
  const Vec3 unit = area_vec / vec_area;

  // Triangle areas carry the sign of their orientation relative to the mean
  // normal so that non-convex planar loops integrate correctly.
  double area = 0.0;
  Vec3 weighted;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& a = loop[i];
    const Vec3& b = loop[(i + 1) % n];
    const Vec3 tri = 0.5 * cross(a - mid, b - mid);
    const double t_area = std::copysign(norm(tri), dot(tri, unit));
    area += t_area;
    weighted += t_area * ((mid + a + b) / 3.0);
  }
  if (!(area > 1e-14 * diam2)) throw DegenerateFace("face loop is degenerate");
  return {area, unit, weighted / area};
}

namespace {

struct FanSums {
  double volume = 0.0;
  Vec3 moment;   // about the apex
  Vec3 closure;  // sum of triangle vector areas
};

// Tetrahedra (apex, face mid, a, b) over every fan triangle of the cell.
FanSums fan_sums(const Mesh& mesh, Index cell, const Vec3& apex) {
  FanSums out;
  const auto& pts = mesh.points();
  for (Index f : mesh.cell_faces(cell)) {
    const auto loop = mesh.face_vertices(f);
    const double sign = mesh.orientation(cell, f);
    const Vec3& p0 = pts[loop[0]];
    Vec3 shift;
    for (Index v : loop) shift += pts[v] - p0;
    const Vec3 mid = p0 + shift / static_cast<double>(loop.size());
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const Vec3& a = pts[loop[i]];
      const Vec3& b = pts[loop[(i + 1) % loop.size()]];
      const Vec3 area = (0.5 * sign) * cross(a - mid, b - mid);
      const double tet = dot(area, mid - apex) / 3.0;
      out.volume += tet;
      out.moment += tet * (0.25 * ((mid - apex) + (a - apex) + (b - apex)));
      out.closure += area;
    }
  }
  return out;
}

Vec3 vertex_average(const Mesh& mesh, Index cell) {
  const auto verts = mesh.cell_vertices(cell);
  const Vec3& p0 = mesh.points()[verts[0]];
  Vec3 shift;
  for (Index v : verts) shift += mesh.points()[v] - p0;
  return p0 + shift / static_cast<double>(verts.size());
}

}  // namespace

Mesh::Mesh(MeshData data) : data_(std::move(data)) {
  build_connectivity();
  compute_geometry();
}

void Mesh::build_connectivity() {
  const Index nf = data_.faces.size();
  if (data_.owner.size() != nf) {
    std::ostringstream os;
    os << "owner has " << data_.owner.size() << " entries, expected one per face (" << nf << ")";
    throw TopologyError(os.str());
  }
  if (data_.n_internal_faces > nf) throw TopologyError("n_internal_faces exceeds the face count");
  if (data_.neighbour.size() != data_.n_internal_faces) {
    std::ostringstream os;
    os << "neighbour has " << data_.neighbour.size() << " entries, expected n_internal_faces = "
       << data_.n_internal_faces;
    throw TopologyError(os.str());
  }
  const Index np = data_.points.size();
  for (Index f = 0; f < nf; ++f) {
    if (data_.faces[f].size() < 3) throw TopologyError(face_msg("face has fewer than 3 vertices", f));
    for (Index v : data_.faces[f])
      if (v >= np) throw TopologyError(face_msg("vertex index out of range", f));
  }

  Index max_cell = 0;
  bool any = false;
  for (Index c : data_.owner) max_cell = std::max(max_cell, c), any = true;
  for (Index c : data_.neighbour) max_cell = std::max(max_cell, c);
  n_cells_ = any ? max_cell + 1 : 0;
  for (Index f = 0; f < data_.n_internal_faces; ++f)
    if (data_.owner[f] == data_.neighbour[f]) throw TopologyError(face_msg("owner equals neighbour", f));
  if (data_.cell_centers && data_.cell_centers->size() != n_cells_) {
    std::ostringstream os;
    os << "cell_centers has " << data_.cell_centers->size() << " entries for " << n_cells_ << " cells";
    throw TopologyError(os.str());
  }

  std::vector<Index> count(n_cells_ + 1, 0);
  for (Index f = 0; f < nf; ++f) {
    ++count[data_.owner[f] + 1];
    if (f < data_.n_internal_faces) ++count[data_.neighbour[f] + 1];
  }
  for (Index c = 0; c < n_cells_; ++c) {
    if (count[c + 1] == 0) {
      std::ostringstream os;
      os << "cell " << c << " has no faces";
      throw TopologyError(os.str());
    }
    count[c + 1] += count[c];
  }
  cell_face_offsets_ = count;
  cell_faces_.assign(count.back(), 0);
  std::vector<Index> fill(count.begin(), count.end() - 1);
  for (Index f = 0; f < nf; ++f) {
    cell_faces_[fill[data_.owner[f]]++] = f;
    if (f < data_.n_internal_faces) cell_faces_[fill[data_.neighbour[f]]++] = f;
  }

  cell_vertex_offsets_.assign(n_cells_ + 1, 0);
  cell_vertices_.clear();
  std::vector<Index> verts;
  for (Index c = 0; c < n_cells_; ++c) {
    verts.clear();
    for (Index f : cell_faces(c)) verts.insert(verts.end(), data_.faces[f].begin(), data_.faces[f].end());
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    cell_vertices_.insert(cell_vertices_.end(), verts.begin(), verts.end());
    cell_vertex_offsets_[c + 1] = cell_vertices_.size();
  }
}

void Mesh::compute_geometry() {
  const Index nf = n_faces();
  face_area_.resize(nf);
  face_normal_.resize(nf);
  face_centroid_.resize(nf);
  std::vector<Vec3> loop;
  for (Index f = 0; f < nf; ++f) {
    loop.clear();
    for (Index v : data_.faces[f]) loop.push_back(data_.points[v]);
    FaceGeometry g;
    try {
      g = face_geometry(loop);
    } catch (const DegenerateFace& e) {
      throw DegenerateFace(face_msg(e.what(), f));
    }
    face_area_[f] = g.area;
    face_normal_[f] = g.normal;
    face_centroid_[f] = g.centroid;
  }

  cell_volume_.resize(n_cells_);
  cell_centroid_.resize(n_cells_);
  cell_diameter_.resize(n_cells_);
  mesh_size_ = 0.0;
  for (Index c = 0; c < n_cells_; ++c) {
    const auto verts = cell_vertices(c);
    const Vec3 apex = vertex_average(*this, c);
    const FanSums sums = fan_sums(*this, c, apex);
    cell_volume_[c] = sums.volume;
    cell_centroid_[c] = sums.volume != 0.0 ? apex + sums.moment / sums.volume : apex;

    double diam2 = 0.0;
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j)
        diam2 = std::max(diam2, norm2(data_.points[verts[i]] - data_.points[verts[j]]));
    cell_diameter_[c] = std::sqrt(diam2);
    mesh_size_ = std::max(mesh_size_, cell_diameter_[c]);
  }
  cell_center_ = data_.cell_centers ? *data_.cell_centers : cell_centroid_;

  d_owner_.resize(nf);
  d_neighbour_.assign(nf, 0.0);
  for (Index f = 0; f < nf; ++f) {
    d_owner_[f] = dot(face_centroid_[f] - cell_center_[data_.owner[f]], face_normal_[f]);
    if (f < data_.n_internal_faces)
      d_neighbour_[f] = -dot(face_centroid_[f] - cell_center_[data_.neighbour[f]], face_normal_[f]);
  }
}

CellGeometry cell_geometry(Index cell, const Mesh& mesh, const Vec3& apex) {
  if (cell >= mesh.n_cells()) throw std::invalid_argument("cell index out of range");
  const double h = mesh.cell_diameter(cell);
  const FanSums sums = fan_sums(mesh, cell, apex);
  const Vec3& closure = sums.closure;
  const double vol = sums.volume;
  if (norm(closure) > kOpenCellThrowTol * h * h) {
    std::ostringstream os;
    os << "cell " << cell << " faces do not close (|sum area*n| = " << norm(closure) << ")";
    throw OpenCell(os.str());
  }
  if (!(vol > 0.0)) {
    std::ostringstream os;
    os << "cell " << cell << " has non-positive volume " << vol;
    throw InvertedCell(os.str());
  }
  return {vol, apex + sums.moment / vol};
}

CellGeometry cell_geometry(Index cell, const Mesh& mesh) {
  if (cell >= mesh.n_cells()) throw std::invalid_argument("cell index out of range");
  return cell_geometry(cell, mesh, vertex_average(mesh, cell));
}

double orthogonal_distance(Index cell, Index face, const Mesh& mesh) {
  if (face >= mesh.n_faces()) throw std::invalid_argument("face index out of range");
  const bool on_cell = mesh.owner(face) == cell || (mesh.is_internal(face) && mesh.neighbour(face) == cell);
  if (!on_cell) throw std::invalid_argument("face does not belong to cell");
  const double d = dot(mesh.face_centroid(face) - mesh.cell_center(cell), mesh.outward_normal(cell, face));
  if (!(d > 0.0)) {
    std::ostringstream os;
    os << "cell " << cell << " centre does not see face " << face << " (d = " << d << ")";
    throw StarShapeViolation(os.str());
  }
  return d;
}

bool AuditReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const AuditItem& i) { return i.passed(); });
}

const AuditItem& AuditReport::item(const std::string& name) const {
  for (const AuditItem& i : items)
    if (i.name == name) return i;
  throw std::out_of_range("no audit item named " + name);
}

AuditReport audit_mesh(const Mesh& mesh) {
  AuditItem star{audit_names::kStarShaped, 0.0, 0.0};
  AuditItem closed{audit_names::kClosedCell, 0.0, kClosureTol};
  AuditItem volume{audit_names::kVolumeIdentity, 0.0, kVolumeTol};
  AuditItem tensor{audit_names::kTensorIdentity, 0.0, kTensorTol};
  AuditItem incidence{audit_names::kIncidence, 0.0, 0.0};

  auto record = [](AuditItem& item, double violation, std::ptrdiff_t where, bool failed) {
    if (violation > item.max_violation) {
      item.max_violation = violation;
      item.worst = where;
    }
    if (failed) ++item.failing;
  };

  for (Index f = 0; f < mesh.n_internal_faces(); ++f)
    if (mesh.owner(f) == mesh.neighbour(f)) record(incidence, 1.0, static_cast<std::ptrdiff_t>(f), true);

  for (Index c = 0; c < mesh.n_cells(); ++c) {
    const double h = mesh.cell_diameter(c);
    const Vec3& xk = mesh.cell_center(c);
    Vec3 closure;
    double dsum = 0.0;
    Mat3 t;
    bool star_failed = false;
    double star_violation = 0.0;
    for (Index f : mesh.cell_faces(c)) {
      const Vec3 n = mesh.outward_normal(c, f);
      const double a = mesh.face_area(f);
      const double d = mesh.distance(c, f);
      if (!(d > 0.0)) {
        star_failed = true;
        star_violation = std::max(star_violation, -d / h);
      }
      closure += a * n;
      dsum += a * d;
      t += a * Mat3::outer(n, mesh.face_centroid(f) - xk);
    }
    const auto cell = static_cast<std::ptrdiff_t>(c);
    record(star, star_violation, cell, star_failed);
    const double rc = norm(closure) / (h * h);
    record(closed, rc, cell, !(rc <= kClosureTol));
    const double rv = std::fabs(dsum - 3.0 * mesh.cell_volume(c)) / (h * h * h);
    record(volume, rv, cell, !(rv <= kVolumeTol));
    const double rt = (t - mesh.cell_volume(c) * Mat3::identity()).max_abs() / (h * h * h);
    record(tensor, rt, cell, !(rt <= kTensorTol));
  }
  return AuditReport{{star, closed, volume, tensor, incidence}};
}

}  // namespace gcfv
