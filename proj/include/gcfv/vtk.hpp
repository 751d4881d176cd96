#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "gcfv/mesh.hpp"
#include "gcfv/operators.hpp"

namespace gcfv {

using NamedField = std::pair<std::string, CellField>;

/// VTK cell type chosen for a cell: 10 tetra, 12 hexahedron, 13 wedge, or
/// 42 polyhedron.
int vtk_cell_type(const Mesh& mesh, Index cell);

/// Legacy ASCII unstructured grid with one SCALARS cell array per field.
/// Throws std::invalid_argument for bad field names or sizes and Error if the
/// file cannot be written.
void export_vtk(const Mesh& mesh, const std::vector<NamedField>& fields, const std::filesystem::path& path);
std::string vtk_string(const Mesh& mesh, const std::vector<NamedField>& fields);

}  // namespace gcfv
