#include "gcfv/mesh_builder.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "gcfv/errors.hpp"

namespace gcfv {

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<Index>& key) const {
    std::size_t h = 1469598103934665603ull;
    for (Index v : key) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

struct PendingFace {
  std::vector<Index> loop;
  Index owner;
  Index neighbour;
  bool internal;
  std::size_t seen;  // first-seen order, tie breaker
};

}  // namespace

MeshData assemble_mesh(std::vector<Vec3> points, const std::vector<CellFaceLoops>& cells) {
  std::vector<PendingFace> faces;
  std::unordered_map<std::vector<Index>, std::size_t, KeyHash> by_key;
  std::size_t total = 0;
  for (const auto& c : cells) total += c.size();
  by_key.reserve(total);
  faces.reserve(total);

  std::vector<Index> key;
  for (Index c = 0; c < cells.size(); ++c) {
    for (const auto& loop : cells[c]) {
      key = loop;
      std::sort(key.begin(), key.end());
      auto [it, inserted] = by_key.try_emplace(key, faces.size());
      if (inserted) {
        faces.push_back({loop, c, 0, false, faces.size()});
        continue;
      }
      PendingFace& pf = faces[it->second];
      if (pf.internal || pf.owner == c) {
        std::ostringstream os;
        os << "face shared by more than two cell sides (cell " << c << ")";
        throw TopologyError(os.str());
      }
      pf.internal = true;
      if (c < pf.owner) {
        pf.neighbour = pf.owner;
        pf.owner = c;
        pf.loop = loop;
      } else {
        pf.neighbour = c;
      }
    }
  }

  std::stable_sort(faces.begin(), faces.end(), [](const PendingFace& a, const PendingFace& b) {
    if (a.internal != b.internal) return a.internal;
    if (a.owner != b.owner) return a.owner < b.owner;
    if (a.internal && a.neighbour != b.neighbour) return a.neighbour < b.neighbour;
    return a.seen < b.seen;
  });

  MeshData data;
  data.points = std::move(points);
  data.faces.reserve(faces.size());
  data.owner.reserve(faces.size());
  for (auto& pf : faces) {
    data.faces.push_back(std::move(pf.loop));
    data.owner.push_back(pf.owner);
    if (pf.internal) {
      data.neighbour.push_back(pf.neighbour);
      ++data.n_internal_faces;
    }
  }
  return data;
}

}  // namespace gcfv
