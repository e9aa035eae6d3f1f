#include "trusslock/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <unordered_map>

namespace trusslock {

namespace {

std::uint64_t lattice_key(const Voxel& p)
{
  constexpr std::int64_t bias = std::int64_t(1) << 20;
  return (std::uint64_t(p.x() + bias) << 42) | (std::uint64_t(p.y() + bias) << 21) | std::uint64_t(p.z() + bias);
}

template <typename T>
void put_le(std::ostream& os, T value)
{
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

}  // namespace

TriangleMesh voxels_to_mesh(const VoxelSet& voxels, const VoxelGrid& grid)
{
  if (voxels.empty()) throw InvariantError("cannot mesh an empty voxel set");
  const DenseMask mask = DenseMask::of(voxels);
  TriangleMesh mesh;
  std::unordered_map<std::uint64_t, int> index;
  auto vertex = [&](const Voxel& p) {
    const auto [it, fresh] = index.try_emplace(lattice_key(p), int(mesh.vertices.size()));
    if (fresh) mesh.vertices.push_back(grid.origin + p.cast<double>() * grid.spacing);
    return it->second;
  };
  // Where two voxels meet only along an edge, each voxel gets its own
  // midpoint vertex there so the four faces form two separate edge pairs.
  std::map<std::pair<std::uint64_t, std::uint64_t>, int> midpoints;
  auto midpoint = [&](const Voxel& owner, const Voxel& p, const Voxel& q) {
    const auto key = std::make_pair(lattice_key(p + q), lattice_key(owner));
    const auto [it, fresh] = midpoints.try_emplace(key, int(mesh.vertices.size()));
    if (fresh) mesh.vertices.push_back(grid.origin + (p + q).cast<double>() * (0.5 * grid.spacing));
    return it->second;
  };

  for (const auto& v : voxels)
    for (int axis = 0; axis < 3; ++axis)
      for (int sign : {1, -1}) {
        Voxel n = Voxel::Zero();
        n[axis] = sign;
        if (mask.test(v + n)) continue;
        const int b = (axis + 1) % 3;
        const int c = (axis + 2) % 3;
        Voxel base = v;
        if (sign > 0) base[axis] += 1;
        Voxel eb = Voxel::Zero();
        Voxel ec = Voxel::Zero();
        eb[b] = 1;
        ec[c] = 1;
        // e_b x e_c = e_axis, so this order faces +axis; reverse for -axis.
        const std::array<Voxel, 4> corner = {base, base + eb, base + eb + ec, base + ec};
        const std::array<Voxel, 4> side = {Voxel(-ec), eb, ec, Voxel(-eb)};
        std::vector<int> poly;
        bool split = false;
        for (int k = 0; k < 4; ++k) {
          poly.push_back(vertex(corner[std::size_t(k)]));
          const Voxel& w = side[std::size_t(k)];
          if (!mask.test(v + w) && mask.test(v + n + w)) {
            poly.push_back(midpoint(v, corner[std::size_t(k)], corner[std::size_t((k + 1) % 4)]));
            split = true;
          }
        }
        if (sign < 0) std::reverse(poly.begin(), poly.end());
        if (!split) {
          mesh.triangles.push_back({poly[0], poly[1], poly[2]});
          mesh.triangles.push_back({poly[0], poly[2], poly[3]});
          continue;
        }
        const int centre = int(mesh.vertices.size());
        mesh.vertices.push_back(grid.origin + (2 * base + eb + ec).cast<double>() * (0.5 * grid.spacing));
        for (std::size_t k = 0; k < poly.size(); ++k)
          mesh.triangles.push_back({centre, poly[k], poly[(k + 1) % poly.size()]});
      }
  return mesh;
}

bool watertight_check(const TriangleMesh& mesh)
{
  if (mesh.triangles.empty()) return false;
  std::unordered_map<std::uint64_t, int> directed;
  directed.reserve(mesh.triangles.size() * 3);
  const auto nv = std::uint64_t(mesh.vertices.size());
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) {
      const int a = t[std::size_t(e)];
      const int b = t[std::size_t((e + 1) % 3)];
      if (a < 0 || b < 0 || std::uint64_t(a) >= nv || std::uint64_t(b) >= nv || a == b) return false;
      if (++directed[std::uint64_t(a) * nv + std::uint64_t(b)] > 1) return false;
    }
  for (const auto& [key, count] : directed) {
    const std::uint64_t a = key / nv;
    const std::uint64_t b = key % nv;
    const auto it = directed.find(b * nv + a);
    if (it == directed.end() || it->second != 1) return false;
  }
  return mesh_volume(mesh) > 0.0;
}

double mesh_volume(const TriangleMesh& mesh)
{
  double vol = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[std::size_t(t[0])];
    const Vec3& b = mesh.vertices[std::size_t(t[1])];
    const Vec3& c = mesh.vertices[std::size_t(t[2])];
    vol += a.dot(b.cross(c));
  }
  return vol / 6.0;
}

void write_stl_binary(const TriangleMesh& mesh, const std::filesystem::path& path)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  const char header[80] = {};
  os.write(header, sizeof header);
  put_le<std::uint32_t>(os, std::uint32_t(mesh.triangles.size()));
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[std::size_t(t[0])];
    const Vec3& b = mesh.vertices[std::size_t(t[1])];
    const Vec3& c = mesh.vertices[std::size_t(t[2])];
    Vec3 n = (b - a).cross(c - a);
    if (n.norm() > 0.0) n.normalize();
    for (const Vec3* p : std::array<const Vec3*, 4>{&n, &a, &b, &c})
      for (int k = 0; k < 3; ++k) put_le<float>(os, float((*p)[k]));
    put_le<std::uint16_t>(os, 0);
  }
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path)
{
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  char line[160];
  for (const auto& v : mesh.vertices) {
    std::snprintf(line, sizeof line, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    os << line;
  }
  for (const auto& t : mesh.triangles) os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace trusslock
