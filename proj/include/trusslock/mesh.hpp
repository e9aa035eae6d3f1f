#pragma once

#include "trusslock/domain.hpp"
#include "trusslock/voxel_set.hpp"

#include <array>
#include <filesystem>
#include <vector>

namespace trusslock {

struct TriangleMesh
{
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

/// Boundary faces of the voxel solid, two outward-facing triangles each.
/// Vertices are shared by exact integer lattice position, except along edges
/// where two voxels touch only diagonally: there each side keeps its own
/// midpoint so every edge borders exactly two triangles.
TriangleMesh voxels_to_mesh(const VoxelSet& voxels, const VoxelGrid& grid);

/// Every directed edge is matched by exactly one opposite edge (closed,
/// edge-manifold, consistently wound) and the signed volume is positive.
bool watertight_check(const TriangleMesh& mesh);

/// Sum of signed tetrahedron volumes against the origin.
double mesh_volume(const TriangleMesh& mesh);

/// 80-byte zero header, u32 count, 50 bytes per triangle, little-endian.
void write_stl_binary(const TriangleMesh& mesh, const std::filesystem::path& path);
void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

}  // namespace trusslock
