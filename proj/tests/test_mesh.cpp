#include "fixtures.hpp"
#include "oracles.hpp"
#include "trusslock/mesh.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace trusslock;
namespace fs = std::filesystem;

namespace {

const VoxelGrid kUnit(Eigen::Vector3i(8, 8, 8), 0.5, Vec3(-1.0, -1.0, -1.0));

fs::path scratch(const std::string& name)
{
  const fs::path dir = fs::temp_directory_path() / "trusslock_mesh_tests";
  fs::create_directories(dir);
  return dir / name;
}

// Every undirected edge on exactly two triangles, computed independently of
// the library check.
bool edge_manifold(const TriangleMesh& m)
{
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : m.triangles)
    for (int e = 0; e < 3; ++e) {
      int a = t[std::size_t(e)];
      int b = t[std::size_t((e + 1) % 3)];
      if (a > b) std::swap(a, b);
      ++count[{a, b}];
    }
  for (const auto& [edge, n] : count)
    if (n != 2) return false;
  return !count.empty();
}

}  // namespace

TEST_CASE("single voxel: 12 triangles, volume h^3")
{
  const TriangleMesh m = voxels_to_mesh(VoxelSet::from_unsorted({Voxel(1, 2, 3)}), kUnit);
  CHECK(m.triangles.size() == 12);
  CHECK(m.vertices.size() == 8);
  CHECK(mesh_volume(m) == doctest::Approx(0.125));
  CHECK(watertight_check(m));
  CHECK(edge_manifold(m));
}

TEST_CASE("2x1x1 block: 20 triangles, volume 2h^3")
{
  const TriangleMesh m = voxels_to_mesh(VoxelSet::from_unsorted({Voxel(0, 0, 0), Voxel(1, 0, 0)}), kUnit);
  CHECK(m.triangles.size() == 20);
  CHECK(mesh_volume(m) == doctest::Approx(0.25));
  CHECK(watertight_check(m));
}

TEST_CASE("cube with a face removed is not watertight")
{
  TriangleMesh m = voxels_to_mesh(VoxelSet::from_unsorted({Voxel(0, 0, 0)}), kUnit);
  m.triangles.resize(10);
  CHECK_FALSE(watertight_check(m));
  TriangleMesh flipped = voxels_to_mesh(VoxelSet::from_unsorted({Voxel(0, 0, 0)}), kUnit);
  std::swap(flipped.triangles[0][1], flipped.triangles[0][2]);
  CHECK_FALSE(watertight_check(flipped));
  CHECK_FALSE(watertight_check(TriangleMesh{}));
}

TEST_CASE("voxels sharing only an edge still mesh as edge-manifold")
{
  const VoxelSet diag = VoxelSet::from_unsorted({Voxel(0, 0, 0), Voxel(1, 1, 0)});
  const TriangleMesh m = voxels_to_mesh(diag, kUnit);
  CHECK(watertight_check(m));
  CHECK(edge_manifold(m));
  CHECK(mesh_volume(m) == doctest::Approx(0.25));

  // Edge contact through a connected L-shape, and a vertex-only contact.
  const VoxelSet mixed =
      VoxelSet::from_unsorted({Voxel(0, 0, 0), Voxel(1, 1, 0), Voxel(0, 0, 1), Voxel(1, 0, 1), Voxel(1, 1, 1),
                               Voxel(2, 2, 2), Voxel(3, 3, 3)});
  const TriangleMesh mm = voxels_to_mesh(mixed, kUnit);
  CHECK(watertight_check(mm));
  CHECK(edge_manifold(mm));
  CHECK(mesh_volume(mm) == doctest::Approx(7 * 0.125));
}

TEST_CASE("Connector meshes are closed and match the voxel volume")
{
  const VertexBuild& vb = fixture::vertex();
  for (const auto& r : vb.regions) {
    const TriangleMesh m = voxels_to_mesh(r.voxels, vb.grid);
    CHECK(watertight_check(m));
    CHECK(edge_manifold(m));
    const double expect = double(r.voxels.size()) * vb.grid.voxel_volume();
    CHECK(std::abs(mesh_volume(m) - expect) <= 1e-9 * expect);
  }
}

TEST_CASE("STL sizes: empty 84 bytes, cube 684 bytes")
{
  const fs::path empty = scratch("empty.stl");
  write_stl_binary(TriangleMesh{}, empty);
  CHECK(fs::file_size(empty) == 84);
  CHECK(oracle::parse_stl(empty.string()).triangles.empty());

  const fs::path cube = scratch("cube.stl");
  const TriangleMesh m = voxels_to_mesh(VoxelSet::from_unsorted({Voxel(0, 0, 0)}), kUnit);
  write_stl_binary(m, cube);
  CHECK(fs::file_size(cube) == 684);
}

TEST_CASE("STL round trip through an independent parser")
{
  const VertexBuild& vb = fixture::vertex();
  const TriangleMesh m = voxels_to_mesh(vb.split.peg, vb.grid);
  const fs::path path = scratch("peg.stl");
  write_stl_binary(m, path);
  const auto stl = oracle::parse_stl(path.string());
  REQUIRE(stl.triangles.size() == m.triangles.size());
  CHECK(stl.bytes == 84 + 50 * m.triangles.size());
  for (std::size_t i = 0; i < m.triangles.size(); ++i)
    for (int v = 0; v < 3; ++v)
      for (int k = 0; k < 3; ++k)
        CHECK(stl.triangles[i].v[v][k] == float(m.vertices[std::size_t(m.triangles[i][std::size_t(v)])][k]));
  const double vol = double(vb.split.peg.size()) * vb.grid.voxel_volume();
  CHECK(std::abs(oracle::stl_volume(stl) - vol) <= 1e-4 * vol);
  // Stored normals are unit and agree with the winding.
  const auto& t = stl.triangles[0];
  const Vec3 a(t.v[0][0], t.v[0][1], t.v[0][2]);
  const Vec3 b(t.v[1][0], t.v[1][1], t.v[1][2]);
  const Vec3 c(t.v[2][0], t.v[2][1], t.v[2][2]);
  const Vec3 n = (b - a).cross(c - a).normalized();
  CHECK(n.dot(Vec3(t.normal[0], t.normal[1], t.normal[2])) == doctest::Approx(1.0));
}

TEST_CASE("OBJ lists vertices then 1-based faces")
{
  const TriangleMesh m = voxels_to_mesh(VoxelSet::from_unsorted({Voxel(0, 0, 0)}), kUnit);
  const fs::path path = scratch("cube.obj");
  write_obj(m, path);
  std::ifstream is(path);
  std::string tag;
  int vs = 0, fs_count = 0, min_index = 1 << 30;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    ls >> tag;
    if (tag == "v") ++vs;
    if (tag == "f") {
      ++fs_count;
      int i;
      while (ls >> i) min_index = std::min(min_index, i);
    }
  }
  CHECK(vs == 8);
  CHECK(fs_count == 12);
  CHECK(min_index == 1);
}

TEST_CASE("meshing an empty set is rejected")
{
  CHECK_THROWS(voxels_to_mesh(VoxelSet{}, kUnit));
}
