#pragma once

#include <vector>

#include "gcfv/mesh.hpp"

namespace gcfv {

/// One polyhedral cell: its faces as vertex loops oriented outward.
using CellFaceLoops = std::vector<std::vector<Index>>;

/// Turns a cell-wise face description into owner/neighbour arrays.
///
/// Faces with identical vertex sets on two cells become one internal face
/// owned by the lower cell index; faces seen once are boundary faces. Output
/// order: internal faces by ascending (owner, neighbour), then boundary faces
/// by ascending owner, ties kept in input order.
MeshData assemble_mesh(std::vector<Vec3> points, const std::vector<CellFaceLoops>& cells);

}  // namespace gcfv
