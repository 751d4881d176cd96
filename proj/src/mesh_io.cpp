#include "gcfv/mesh_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gcfv/errors.hpp"

namespace gcfv {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const json& require(const json& root, const char* key) {
  auto it = root.find(key);
  if (it == root.end()) fail(key, "missing key");
  return *it;
}

Index as_index(const json& v, const std::string& where) {
  if (!v.is_number_integer()) fail(where, "expected a non-negative integer");
  if (v.is_number_unsigned()) return v.get<Index>();
  const auto s = v.get<long long>();
  if (s < 0) fail(where, "expected a non-negative integer");
  return static_cast<Index>(s);
}

Vec3 as_point(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 3) fail(where, "expected [x, y, z]");
  Vec3 p;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) fail(where + "[" + std::to_string(i) + "]", "expected a number");
    p[i] = v[i].get<double>();
  }
  return p;
}

std::vector<Vec3> as_points(const json& v, const std::string& name) {
  if (!v.is_array()) fail(name, "expected an array");
  std::vector<Vec3> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_point(v[i], name + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<Index> as_indices(const json& v, const std::string& name) {
  if (!v.is_array()) fail(name, "expected an array");
  std::vector<Index> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_index(v[i], name + "[" + std::to_string(i) + "]"));
  return out;
}

std::string number(double x) { return json(x).dump(); }

}  // namespace

MeshData parse_mesh_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    fail("line " + std::to_string(line), e.what());
  }
  if (!root.is_object()) fail("document", "expected a JSON object");

  MeshData data;
  data.points = as_points(require(root, "points"), "points");
  const json& faces = require(root, "faces");
  if (!faces.is_array()) fail("faces", "expected an array");
  data.faces.reserve(faces.size());
  for (std::size_t f = 0; f < faces.size(); ++f)
    data.faces.push_back(as_indices(faces[f], "faces[" + std::to_string(f) + "]"));
  data.owner = as_indices(require(root, "owner"), "owner");
  data.neighbour = as_indices(require(root, "neighbour"), "neighbour");
  data.n_internal_faces = as_index(require(root, "n_internal_faces"), "n_internal_faces");
  if (auto it = root.find("cell_centers"); it != root.end() && !it->is_null())
    data.cell_centers = as_points(*it, "cell_centers");
  return data;
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Mesh(parse_mesh_json(buf.str()));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string mesh_to_json(const MeshData& data) {
  std::ostringstream os;
  auto write_points = [&os](const std::vector<Vec3>& pts) {
    os << "[";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      os << (i ? ",\n" : "\n") << "[" << number(pts[i].x) << "," << number(pts[i].y) << "," << number(pts[i].z)
         << "]";
    }
    os << "\n]";
  };
  auto write_indices = [&os](const std::vector<Index>& idx) {
    os << "[";
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
    os << "]";
  };

  os << "{\n\"n_internal_faces\": " << data.n_internal_faces << ",\n\"points\": ";
  write_points(data.points);
  os << ",\n\"faces\": [";
  for (std::size_t f = 0; f < data.faces.size(); ++f) {
    os << (f ? ",\n" : "\n");
    write_indices(data.faces[f]);
  }
  os << "\n],\n\"owner\": ";
  write_indices(data.owner);
  os << ",\n\"neighbour\": ";
  write_indices(data.neighbour);
  if (data.cell_centers) {
    os << ",\n\"cell_centers\": ";
    write_points(*data.cell_centers);
  }
  os << "\n}\n";
  return os.str();
}

void save_mesh(const Mesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(path.string() + ": cannot open for writing");
  out << mesh_to_json(mesh.data());
  if (!out) throw Error(path.string() + ": write failed");
}

}  // namespace gcfv
