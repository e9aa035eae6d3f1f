#include "trusslock/domain.hpp"

#include <cmath>

#include <algorithm>
#include <thread>

namespace trusslock {

namespace {

void require_z_axis(const Torus& t)
{
  if ((t.axis - Vec3::UnitZ()).norm() > 1e-12)
    throw InvariantError("voxel grids are axis-aligned with the torus axis along +z");
}

}  // namespace

VoxelGrid::VoxelGrid(const Eigen::Vector3i& d, double h, const Vec3& o) : dims(d), spacing(h), origin(o)
{
  if ((d.array() <= 0).any()) throw InvariantError("VoxelGrid resolution must be positive on every axis");
  if (!(h > 0.0)) throw InvariantError("VoxelGrid spacing must be positive");
}

VoxelGrid VoxelGrid::centered(const Torus& t, int voxels_per_side)
{
  require_z_axis(t);
  if (voxels_per_side < 2) throw InvariantError("resolution must be at least 2 voxels per side");
  const double h = t.side / voxels_per_side;
  const int nxy = int(std::ceil(t.outer_radius() / h - 1e-9)) + 1;
  const int nz = int(std::ceil(t.half_side() / h - 1e-9)) + 1;
  const Eigen::Vector3i dims(2 * nxy, 2 * nxy, 2 * nz);
  return VoxelGrid(dims, h, t.center - Vec3(nxy * h, nxy * h, nz * h));
}

VoxelGrid VoxelGrid::cube(const Torus& t, int dims)
{
  require_z_axis(t);
  if (dims < 6 || dims % 2 != 0) throw InvariantError("cube grid needs an even resolution >= 6");
  const int half = dims / 2;
  // Largest spacing with s an even multiple of h and one spare layer per side.
  const int k = int(std::floor((half - 1) * t.side / (2.0 * t.outer_radius())));
  if (k < 1) throw InvariantError("cube grid too coarse for the torus cross-section");
  const double h = t.side / (2.0 * k);
  return VoxelGrid(Eigen::Vector3i::Constant(dims), h, t.center - Vec3::Constant(half * h));
}

bool VoxelGrid::covers(const Torus& t) const
{
  if ((t.axis - Vec3::UnitZ()).norm() > 1e-12) return false;
  const Vec3 ext(t.outer_radius(), t.outer_radius(), t.half_side());
  const Vec3 lo = origin + Vec3::Constant(spacing);
  const Vec3 hi = origin + (dims.cast<double>().array() - 1.0).matrix() * spacing;
  const double tol = 1e-9 * spacing;
  return ((t.center - ext).array() >= lo.array() - tol).all() &&
         ((t.center + ext).array() <= hi.array() + tol).all();
}

std::vector<std::int64_t> domain_voxels(const Torus& t, const VoxelGrid& g, int threads)
{
  if (!g.covers(t)) throw InvariantError("voxel grid does not cover the torus (one voxel margin required)");
  threads = std::max(1, threads);
  const int nz = g.dims.z();
  std::vector<std::vector<std::int64_t>> parts(std::size_t(std::min(threads, nz)));
  auto work = [&](int part) {
    const int z0 = int(std::int64_t(nz) * part / std::int64_t(parts.size()));
    const int z1 = int(std::int64_t(nz) * (part + 1) / std::int64_t(parts.size()));
    auto& out = parts[std::size_t(part)];
    for (int k = z0; k < z1; ++k)
      for (int j = 0; j < g.dims.y(); ++j)
        for (int i = 0; i < g.dims.x(); ++i) {
          const Voxel v(i, j, k);
          if (point_in_torus(g.center(v), t)) out.push_back(g.linear(v));
        }
  };
  if (parts.size() == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int p = 0; p < int(parts.size()); ++p) pool.emplace_back(work, p);
    for (auto& th : pool) th.join();
  }
  std::vector<std::int64_t> ids;
  for (auto& p : parts) ids.insert(ids.end(), p.begin(), p.end());
  return ids;
}

}  // namespace trusslock
