#pragma once

#include <filesystem>
#include <string>

#include "gcfv/mesh.hpp"

namespace gcfv {

/// Mesh JSON: {"points", "faces", "owner", "neighbour", "n_internal_faces",
/// optional "cell_centers"}. Throws ParseError on malformed content and
/// TopologyError on inconsistent arrays.
Mesh load_mesh(const std::filesystem::path& path);
MeshData parse_mesh_json(const std::string& text);

/// Writes points, faces, owner/neighbour and any cell-centre override with
/// round-trip exact doubles. Output is byte-stable for identical meshes.
void save_mesh(const Mesh& mesh, const std::filesystem::path& path);
std::string mesh_to_json(const MeshData& data);

}  // namespace gcfv
