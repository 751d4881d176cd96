#include "gcfv/mesh_gen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "gcfv/errors.hpp"
#include "gcfv/mesh_builder.hpp"
#include "gcfv/quality.hpp"

namespace gcfv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxAmplitude = 0.45;

// Uniform doubles in [0,1) from a fixed bit recipe so streams are portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double symmetric() { return 2.0 * uniform() - 1.0; }
  // Uniform point in the unit ball.
  Vec3 ball() {
    for (;;) {
      Vec3 p{symmetric(), symmetric(), symmetric()};
      if (norm2(p) <= 1.0) return p;
    }
  }
  std::array<double, 2> disk() {
    for (;;) {
      const double x = symmetric(), y = symmetric();
      if (x * x + y * y <= 1.0) return {x, y};
    }
  }

 private:
  std::mt19937_64 eng_;
};

bool on_boundary(int i, int n) { return i == 0 || i == n; }

// Reverses `loop` when its area vector points towards `inside`.
void orient_outward(std::vector<Index>& loop, const std::vector<Vec3>& pts, const Vec3& inside) {
  Vec3 area, c;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    area += cross(pts[loop[k]], pts[loop[(k + 1) % loop.size()]]);
    c += pts[loop[k]];
  }
  c /= static_cast<double>(loop.size());
  if (dot(area, c - inside) < 0.0) std::reverse(loop.begin(), loop.end());
}

Vec3 average(const std::vector<Vec3>& pts, std::span<const Index> ids) {
  Vec3 c;
  for (Index v : ids) c += pts[v];
  return c / static_cast<double>(ids.size());
}

// ---------------------------------------------------------------- hexahedra

MeshData hex_mesh(int n, double s) {
  const double h = 1.0 / n;
  const int m = n + 1;
  auto id = [m](int i, int j, int k) { return static_cast<Index>(i + m * (j + m * k)); };
  std::vector<Vec3> pts(static_cast<std::size_t>(m) * m * m);
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        const double x = i * h, y = j * h, z = k * h;
        if (s == 0.0) {
          pts[id(i, j, k)] = {x, y, z};
        } else {
          pts[id(i, j, k)] = {x + s * std::sin(kPi * x) * std::sin(kPi * y), y,
                              z + s * std::sin(kPi * z) * std::cos(kPi * y)};
        }
      }

  std::vector<CellFaceLoops> cells;
  cells.reserve(static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        CellFaceLoops c = {
            {id(i, j, k), id(i, j, k + 1), id(i, j + 1, k + 1), id(i, j + 1, k)},
            {id(i + 1, j, k), id(i + 1, j + 1, k), id(i + 1, j + 1, k + 1), id(i + 1, j, k + 1)},
            {id(i, j, k), id(i + 1, j, k), id(i + 1, j, k + 1), id(i, j, k + 1)},
            {id(i, j + 1, k), id(i, j + 1, k + 1), id(i + 1, j + 1, k + 1), id(i + 1, j + 1, k)},
            {id(i, j, k), id(i, j + 1, k), id(i + 1, j + 1, k), id(i + 1, j, k)},
            {id(i, j, k + 1), id(i + 1, j, k + 1), id(i + 1, j + 1, k + 1), id(i, j + 1, k + 1)},
        };
        cells.push_back(std::move(c));
      }
  return assemble_mesh(std::move(pts), cells);
}

// ---------------------------------------------------------------- tetrahedra

MeshData tet_mesh(int n, double jitter, std::uint64_t seed) {
  const double h = 1.0 / n;
  const int m = n + 1;
  auto id = [m](int i, int j, int k) { return static_cast<Index>(i + m * (j + m * k)); };
  Rng rng(seed);
  std::vector<Vec3> pts(static_cast<std::size_t>(m) * m * m);
  for (int k = 0; k <= n; ++k)
    for (int j = 0; j <= n; ++j)
      for (int i = 0; i <= n; ++i) {
        Vec3 d = rng.ball() * (jitter * h);
        if (on_boundary(i, n)) d.x = 0.0;
        if (on_boundary(j, n)) d.y = 0.0;
        if (on_boundary(k, n)) d.z = 0.0;
        pts[id(i, j, k)] = Vec3{i * h, j * h, k * h} + d;
      }

  static constexpr std::array<std::array<int, 3>, 6> kPerms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<CellFaceLoops> cells;
  cells.reserve(6 * static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        for (const auto& p : kPerms) {
          std::array<int, 3> c = {i, j, k};
          std::array<Index, 4> v;
          v[0] = id(c[0], c[1], c[2]);
          for (int s = 0; s < 3; ++s) {
            ++c[p[s]];
            v[s + 1] = id(c[0], c[1], c[2]);
          }
          const Vec3 inside = average(pts, v);
          CellFaceLoops loops = {{v[0], v[1], v[2]}, {v[0], v[1], v[3]}, {v[0], v[2], v[3]}, {v[1], v[2], v[3]}};
          for (auto& l : loops) orient_outward(l, pts, inside);
          cells.push_back(std::move(loops));
        }
  return assemble_mesh(std::move(pts), cells);
}

// ---------------------------------------------------------------- prisms

struct Footprint {
  std::vector<std::array<double, 2>> points;
  std::vector<std::array<Index, 3>> triangles;  // counter-clockwise
  int n = 0;
};

// n x n squares, each split along its rising diagonal, then passed through
// the smooth map with amplitude s.
Footprint triangulate_square(int n, double s, double jitter, std::uint64_t seed) {
  const double h = 1.0 / n;
  Footprint fp;
  fp.n = n;
  Rng rng(seed);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      double x = i * h, y = j * h;
      if (jitter > 0.0) {
        const auto d = rng.disk();
        if (i != 0 && i != n) x += jitter * h * d[0];
        if (j != 0 && j != n) y += jitter * h * d[1];
      }
      fp.points.push_back({x + s * std::sin(kPi * x) * std::sin(kPi * y),
                           y + s * std::sin(kPi * y) * std::cos(kPi * x)});
    }
  const auto id = [n](int i, int j) { return static_cast<Index>(j * (n + 1) + i); };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      fp.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      fp.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  return fp;
}

// Extrudes counter-clockwise polygons into n layers over z in [0,1].
MeshData extrude(const std::vector<std::array<double, 2>>& pts2, const std::vector<std::vector<Index>>& polys, int n) {
  const Index np = pts2.size();
  std::vector<Vec3> pts;
  pts.reserve(np * static_cast<std::size_t>(n + 1));
  for (int k = 0; k <= n; ++k)
    for (const auto& p : pts2) pts.push_back({p[0], p[1], static_cast<double>(k) / n});

  std::vector<CellFaceLoops> cells;
  cells.reserve(polys.size() * static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const Index lo = np * static_cast<Index>(k), hi = np * static_cast<Index>(k + 1);
    for (const auto& poly : polys) {
      CellFaceLoops c;
      std::vector<Index> bottom, top;
      for (auto it = poly.rbegin(); it != poly.rend(); ++it) bottom.push_back(lo + *it);
      for (Index v : poly) top.push_back(hi + v);
      c.push_back(std::move(bottom));
      c.push_back(std::move(top));
      for (std::size_t e = 0; e < poly.size(); ++e) {
        const Index a = poly[e], b = poly[(e + 1) % poly.size()];
        c.push_back({lo + a, lo + b, hi + b, hi + a});
      }
      cells.push_back(std::move(c));
    }
  }
  return assemble_mesh(std::move(pts), cells);
}

MeshData triprism_mesh(int n, double s, double jitter, std::uint64_t seed) {
  const Footprint fp = triangulate_square(n, s, jitter, seed);
  std::vector<std::vector<Index>> polys;
  polys.reserve(fp.triangles.size());
  for (const auto& t : fp.triangles) polys.push_back({t[0], t[1], t[2]});
  return extrude(fp.points, polys, n);
}

double signed_area(const std::vector<std::array<double, 2>>& pts, const std::vector<Index>& poly) {
  double a = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const auto& p = pts[poly[k]];
    const auto& q = pts[poly[(k + 1) % poly.size()]];
    a += p[0] * q[1] - p[1] * q[0];
  }
  return 0.5 * a;
}

// Median dual: one polygon per triangulation vertex through the adjacent
// triangle centroids and edge midpoints, closed at the square's boundary.
MeshData polyprism_mesh(int n, double s, double jitter, std::uint64_t seed) {
  const Footprint fp = triangulate_square(n, s, jitter, seed);
  std::vector<std::array<double, 2>> pts = fp.points;
  const Index nv = pts.size();

  std::map<std::pair<Index, Index>, Index> midpoint;
  auto mid = [&](Index a, Index b) {
    const auto key = std::minmax(a, b);
    auto [it, fresh] = midpoint.try_emplace({key.first, key.second}, pts.size());
    if (fresh) pts.push_back({0.5 * (pts[a][0] + pts[b][0]), 0.5 * (pts[a][1] + pts[b][1])});
    return it->second;
  };
  std::vector<Index> centroid(fp.triangles.size());
  // Per vertex: list of (triangle, incoming edge midpoint, outgoing edge midpoint).
  struct Corner {
    Index tri, prev_mid, next_mid;
  };
  std::vector<std::vector<Corner>> corners(nv);
  for (std::size_t t = 0; t < fp.triangles.size(); ++t) {
    const auto& tri = fp.triangles[t];
    centroid[t] = pts.size();
    pts.push_back({(pts[tri[0]][0] + pts[tri[1]][0] + pts[tri[2]][0]) / 3.0,
                   (pts[tri[0]][1] + pts[tri[1]][1] + pts[tri[2]][1]) / 3.0});
    for (int c = 0; c < 3; ++c) {
      const Index v = tri[c], next = tri[(c + 1) % 3], prev = tri[(c + 2) % 3];
      corners[v].push_back({centroid[t], mid(v, prev), mid(v, next)});
    }
  }

  std::vector<std::vector<Index>> polys;
  polys.reserve(nv);
  for (Index v = 0; v < nv; ++v) {
    // Walk corners counter-clockwise: each corner runs next_mid -> centroid -> prev_mid.
    auto& cs = corners[v];
    std::unordered_map<Index, std::size_t> by_next;
    std::unordered_map<Index, int> prev_count;
    for (std::size_t k = 0; k < cs.size(); ++k) {
      by_next[cs[k].next_mid] = k;
      ++prev_count[cs[k].prev_mid];
    }
    // A boundary vertex has one corner whose next_mid is no corner's prev_mid.
    std::size_t start = 0;
    bool boundary = false;
    for (std::size_t k = 0; k < cs.size(); ++k)
      if (!prev_count.count(cs[k].next_mid)) {
        start = k;
        boundary = true;
      }
    std::vector<Index> poly;
    if (boundary) poly.push_back(v);
    std::size_t k = start;
    for (std::size_t step = 0; step < cs.size(); ++step) {
      poly.push_back(cs[k].next_mid);
      poly.push_back(cs[k].tri);
      const auto it = by_next.find(cs[k].prev_mid);
      if (it == by_next.end()) {
        poly.push_back(cs[k].prev_mid);
        break;
      }
      k = it->second;
    }
    if (signed_area(pts, poly) < 0.0) std::reverse(poly.begin(), poly.end());
    polys.push_back(std::move(poly));
  }
  return extrude(pts, polys, n);
}

// ---------------------------------------------------------------- Voronoi

struct ConvexCell {
  std::vector<Vec3> verts;
  std::vector<std::vector<int>> faces;  // outward loops
  std::vector<long long> tags;          // neighbour seed, or -1-k for cube side k
};

ConvexCell unit_cube() {
  ConvexCell c;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) c.verts.push_back({double(i), double(j), double(k)});
  auto v = [](int i, int j, int k) { return i + 2 * j + 4 * k; };
  c.faces = {
      {v(0, 0, 0), v(0, 0, 1), v(0, 1, 1), v(0, 1, 0)}, {v(1, 0, 0), v(1, 1, 0), v(1, 1, 1), v(1, 0, 1)},
      {v(0, 0, 0), v(1, 0, 0), v(1, 0, 1), v(0, 0, 1)}, {v(0, 1, 0), v(0, 1, 1), v(1, 1, 1), v(1, 1, 0)},
      {v(0, 0, 0), v(0, 1, 0), v(1, 1, 0), v(1, 0, 0)}, {v(0, 0, 1), v(1, 0, 1), v(1, 1, 1), v(0, 1, 1)},
  };
  c.tags = {-1, -2, -3, -4, -5, -6};
  return c;
}

// Keeps the half-space {x : normal . x <= offset}.
void clip(ConvexCell& cell, const Vec3& normal, double offset, long long tag, double eps) {
  const std::size_t nv = cell.verts.size();
  std::vector<double> s(nv);
  double smax = -1.0;
  for (std::size_t i = 0; i < nv; ++i) {
    s[i] = dot(normal, cell.verts[i]) - offset;
    smax = std::max(smax, s[i]);
  }
  if (smax <= eps) return;

  std::vector<Vec3> verts;
  std::vector<int> remap(nv, -1);
  std::vector<int> on_plane;
  for (std::size_t i = 0; i < nv; ++i)
    if (s[i] <= eps) {
      remap[i] = static_cast<int>(verts.size());
      verts.push_back(cell.verts[i]);
      if (s[i] >= -eps) on_plane.push_back(remap[i]);
    }
  std::map<std::pair<int, int>, int> cut;
  auto crossing = [&](int a, int b) {
    const int in = s[a] < 0.0 ? a : b, out = in == a ? b : a;
    auto [it, fresh] = cut.try_emplace({in, out}, static_cast<int>(verts.size()));
    if (fresh) {
      const double t = s[in] / (s[in] - s[out]);
      verts.push_back(cell.verts[in] + t * (cell.verts[out] - cell.verts[in]));
      on_plane.push_back(it->second);
    }
    return it->second;
  };

  std::vector<std::vector<int>> faces;
  std::vector<long long> tags;
  for (std::size_t f = 0; f < cell.faces.size(); ++f) {
    const auto& loop = cell.faces[f];
    std::vector<int> out;
    for (std::size_t k = 0; k < loop.size(); ++k) {
      const int a = loop[k], b = loop[(k + 1) % loop.size()];
      if (s[a] <= eps) out.push_back(remap[a]);
      if ((s[a] < -eps && s[b] > eps) || (s[a] > eps && s[b] < -eps)) out.push_back(crossing(a, b));
    }
    if (out.size() >= 3) {
      faces.push_back(std::move(out));
      tags.push_back(cell.tags[f]);
    }
  }

  if (on_plane.size() >= 3) {
    Vec3 c;
    for (int v : on_plane) c += verts[v];
    c /= static_cast<double>(on_plane.size());
    const Vec3 ref = std::fabs(normal.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    const Vec3 u = cross(ref, normal) / norm(cross(ref, normal));
    const Vec3 w = cross(normal, u);
    std::vector<std::pair<double, int>> ang;
    for (int v : on_plane) ang.push_back({std::atan2(dot(verts[v] - c, w), dot(verts[v] - c, u)), v});
    std::sort(ang.begin(), ang.end());
    std::vector<int> cap;
    for (const auto& a : ang) cap.push_back(a.second);
    faces.push_back(std::move(cap));
    tags.push_back(tag);
  }

  // Drop vertices no longer referenced.
  std::vector<int> used(verts.size(), -1);
  ConvexCell out;
  for (auto& f : faces)
    for (int& v : f) {
      if (used[v] < 0) {
        used[v] = static_cast<int>(out.verts.size());
        out.verts.push_back(verts[v]);
      }
      v = used[v];
    }
  out.faces = std::move(faces);
  out.tags = std::move(tags);
  cell = std::move(out);
}

// Merges points closer than `tol`, deterministic in input order.
class Welder {
 public:
  explicit Welder(double tol) : tol_(tol), bucket_(tol * 1e3) {}
  Index insert(const Vec3& p) {
    const auto key = cell_of(p);
    for (long long dz = -1; dz <= 1; ++dz)
      for (long long dy = -1; dy <= 1; ++dy)
        for (long long dx = -1; dx <= 1; ++dx) {
          auto it = grid_.find({key[0] + dx, key[1] + dy, key[2] + dz});
          if (it == grid_.end()) continue;
          for (Index id : it->second)
            if (norm(points_[id] - p) <= tol_) return id;
        }
    const Index id = points_.size();
    points_.push_back(p);
    grid_[key].push_back(id);
    return id;
  }
  std::vector<Vec3> take() { return std::move(points_); }

 private:
  std::array<long long, 3> cell_of(const Vec3& p) const {
    return {std::llround(std::floor(p.x / bucket_)), std::llround(std::floor(p.y / bucket_)),
            std::llround(std::floor(p.z / bucket_))};
  }
  double tol_;
  double bucket_;
  std::vector<Vec3> points_;
  std::map<std::array<long long, 3>, std::vector<Index>> grid_;
};

MeshData voronoi_mesh(int n, double jitter, std::uint64_t seed) {
  const double h = 1.0 / n;
  Rng rng(seed);
  std::vector<Vec3> seeds;
  seeds.reserve(static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Vec3 d{rng.symmetric(), rng.symmetric(), rng.symmetric()};
        seeds.push_back(Vec3{(i + 0.5) * h, (j + 0.5) * h, (k + 0.5) * h} + (jitter * h) * d);
      }

  constexpr int kReach = 3;
  const double eps = 1e-13 * h;
  Welder welder(1e-10 * h);
  std::vector<CellFaceLoops> cells;
  cells.reserve(seeds.size());
  std::vector<std::pair<double, Index>> cand;
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const Index me = static_cast<Index>(i + n * (j + n * k));
        const Vec3& x = seeds[me];
        cand.clear();
        for (int c = std::max(0, k - kReach); c <= std::min(n - 1, k + kReach); ++c)
          for (int b = std::max(0, j - kReach); b <= std::min(n - 1, j + kReach); ++b)
            for (int a = std::max(0, i - kReach); a <= std::min(n - 1, i + kReach); ++a) {
              const Index other = static_cast<Index>(a + n * (b + n * c));
              if (other != me) cand.push_back({norm(seeds[other] - x), other});
            }
        std::sort(cand.begin(), cand.end());

        ConvexCell cell = unit_cube();
        bool settled = false;
        for (const auto& [dist, other] : cand) {
          double radius = 0.0;
          for (const Vec3& v : cell.verts) radius = std::max(radius, norm(v - x));
          if (dist > 2.0 * radius) {
            settled = true;
            break;
          }
          const Vec3 nrm = (seeds[other] - x) / dist;
          clip(cell, nrm, dot(nrm, 0.5 * (x + seeds[other])), static_cast<long long>(other), eps);
        }
        if (!settled) {
          // Seeds outside the searched block are at least this far away.
          double radius = 0.0;
          for (const Vec3& v : cell.verts) radius = std::max(radius, norm(v - x));
          if (2.0 * radius > (kReach + 1 - 2.0 * jitter) * h)
            throw GenerationFailed("voronoi neighbour search radius too small", static_cast<std::ptrdiff_t>(me));
        }

        std::vector<Index> ids(cell.verts.size());
        for (std::size_t v = 0; v < cell.verts.size(); ++v) ids[v] = welder.insert(cell.verts[v]);
        CellFaceLoops loops;
        for (const auto& f : cell.faces) {
          std::vector<Index> loop;
          for (int v : f)
            if (loop.empty() || loop.back() != ids[v]) loop.push_back(ids[v]);
          while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
          if (loop.size() >= 3) loops.push_back(std::move(loop));
        }
        cells.push_back(std::move(loops));
      }
  MeshData data = assemble_mesh(welder.take(), cells);
  return data;
}

// ---------------------------------------------------------------- checks

void check_generated(const Mesh& mesh) {
  for (Index f = mesh.n_internal_faces(); f < mesh.n_faces(); ++f) {
    const Vec3& c = mesh.face_centroid(f);
    double gap = 1.0;
    for (int i = 0; i < 3; ++i) gap = std::min({gap, std::fabs(c[i]), std::fabs(1.0 - c[i])});
    if (gap > 1e-12) {
      std::ostringstream os;
      os << "boundary face " << f << " is not on the domain boundary (unmatched interior face)";
      throw GenerationFailed(os.str(), static_cast<std::ptrdiff_t>(mesh.owner(f)), static_cast<std::ptrdiff_t>(f));
    }
  }
  const AuditReport audit = audit_mesh(mesh);
  for (const auto& item : audit.items) {
    if (item.passed()) continue;
    std::ostringstream os;
    os << "generated mesh fails " << item.name << " (" << item.failing << " offenders, worst " << item.worst
       << ", violation " << item.max_violation << ")";
    std::ptrdiff_t cell = -1, face = -1;
    if (item.name == audit_names::kStarShaped)
      face = item.worst;
    else
      cell = item.worst;
    throw GenerationFailed(os.str(), cell, face);
  }
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::hex: return "hex";
    case Family::hexskew: return "hexskew";
    case Family::triprism: return "triprism";
    case Family::polyprism: return "polyprism";
    case Family::tet: return "tet";
    case Family::poly: return "poly";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::hex, Family::hexskew, Family::triprism, Family::polyprism, Family::tet, Family::poly})
    if (to_string(f) == name) return f;
  throw std::invalid_argument("unknown mesh family '" + std::string(name) + "'");
}

Mesh generate(const GenSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("n must be at least 2");
  if (!(spec.skew >= 0.0 && spec.skew <= kMaxAmplitude)) throw std::invalid_argument("skew must lie in [0, 0.45]");
  if (!(spec.jitter >= 0.0 && spec.jitter <= kMaxAmplitude))
    throw std::invalid_argument("jitter must lie in [0, 0.45]");

  MeshData data;
  switch (spec.family) {
    case Family::hex: data = hex_mesh(spec.n, 0.0); break;
    case Family::hexskew: data = hex_mesh(spec.n, spec.skew); break;
    case Family::triprism: data = triprism_mesh(spec.n, spec.skew, spec.jitter, spec.seed); break;
    case Family::polyprism: data = polyprism_mesh(spec.n, spec.skew, spec.jitter, spec.seed); break;
    case Family::tet: data = tet_mesh(spec.n, spec.jitter, spec.seed); break;
    case Family::poly: data = voronoi_mesh(spec.n, spec.jitter, spec.seed); break;
  }
  std::optional<Mesh> mesh;
  try {
    mesh.emplace(std::move(data));
  } catch (const GenerationFailed&) {
    throw;
  } catch (const Error& e) {
    throw GenerationFailed(std::string("generated mesh is invalid: ") + e.what());
  }
  check_generated(*mesh);
  return std::move(*mesh);
}

Amplitude calibrated_amplitude(Family family) {
  switch (family) {
    case Family::hex: return Amplitude::none;
    case Family::hexskew:
    case Family::triprism:
    case Family::polyprism: return Amplitude::skew;
    case Family::tet:
    case Family::poly: return Amplitude::jitter;
  }
  return Amplitude::none;
}

Calibration calibrate(Family family, int n, double target_theta_max, std::uint64_t seed) {
  constexpr double kWindow = 2.0;
  const Amplitude which = calibrated_amplitude(family);
  auto measure = [&](double a) -> std::optional<double> {
    GenSpec spec{family, n, 0.0, 0.0, seed};
    (which == Amplitude::jitter ? spec.jitter : spec.skew) = a;
    try {
      return quality_report(generate(spec)).theta_max;
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  Calibration best{0.0, *measure(0.0)};
  auto consider = [&](double a, double theta) {
    if (std::fabs(theta - target_theta_max) < std::fabs(best.theta_max - target_theta_max)) best = {a, theta};
  };
  if (std::fabs(best.theta_max - target_theta_max) <= kWindow) return best;
  if (which == Amplitude::none || target_theta_max < best.theta_max) {
    throw CalibrationFailed("target theta_max is out of reach for this family", best.amplitude, best.theta_max);
  }

  double lo = 0.0, hi = kMaxAmplitude;
  for (int it = 0; it < 60; ++it) {
    const double a = 0.5 * (lo + hi);
    const auto theta = measure(a);
    if (!theta) {  // invalid mesh counts as too much distortion
      hi = a;
      continue;
    }
    consider(a, *theta);
    if (std::fabs(*theta - target_theta_max) <= kWindow) return {a, *theta};
    (*theta < target_theta_max ? lo : hi) = a;
    if (hi - lo < 1e-6) break;
  }
  throw CalibrationFailed("target theta_max not reached within the amplitude range", best.amplitude, best.theta_max);
}

GenSpec reference_spec(Family family, int n, std::uint64_t seed) {
  GenSpec spec{family, n, 0.0, 0.0, seed};
  switch (family) {
    case Family::hex: break;
    case Family::hexskew: spec.skew = 0.091; break;
    case Family::triprism: break;
    case Family::polyprism: break;
    case Family::tet: spec.jitter = 0.23; break;
    case Family::poly: spec.jitter = 0.45; break;
  }
  return spec;
}

}  // namespace gcfv
