#pragma once

#include "trusslock/common.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <vector>

namespace trusslock {

/// Solid torus with a square cross-section: a square of side `side` revolved
/// around `axis` at distance `revolve_radius` from its centre.
template <typename Scalar>
struct TorusSpec
{
  using Vector = Eigen::Matrix<Scalar, 3, 1>;

  Scalar revolve_radius;
  Scalar side;
  Vector center = Vector::Zero();
  Vector axis = Vector::UnitZ();

  TorusSpec(Scalar R, Scalar s, const Vector& c = Vector::Zero(), const Vector& a = Vector::UnitZ())
      : revolve_radius(R), side(s), center(c), axis(a)
  {
    if (!(s > Scalar(0)) || !(R > s / Scalar(2)))
      throw InvariantError("TorusSpec requires R > s/2 > 0");
    if (!(a.norm() > Scalar(0))) throw InvariantError("TorusSpec axis must be nonzero");
    axis = a.normalized();
  }

  Scalar inner_radius() const { return revolve_radius - side / Scalar(2); }
  Scalar outer_radius() const { return revolve_radius + side / Scalar(2); }
  Scalar half_side() const { return side / Scalar(2); }
};

using Torus = TorusSpec<double>;

/// Closed-set membership: boundary points count as inside.
template <typename Scalar, typename Derived>
bool point_in_torus(const Eigen::MatrixBase<Derived>& p, const TorusSpec<Scalar>& t)
{
  const auto d = (p - t.center).eval();
  const Scalar axial = d.dot(t.axis);
  const Scalar radial = (d - axial * t.axis).norm();
  const Scalar hs = t.half_side();
  return radial >= t.inner_radius() && radial <= t.outer_radius() && axial >= -hs && axial <= hs;
}

/// Pappus: area s^2 swept along a circle of radius R.
template <typename Scalar>
Scalar torus_volume(const TorusSpec<Scalar>& t)
{
  return Scalar(2) * Scalar(kPi) * t.revolve_radius * t.side * t.side;
}

/// Axis-aligned grid of cubic voxels. Voxel (i,j,k) has its centre at
/// origin + (i+1/2, j+1/2, k+1/2) * spacing.
struct VoxelGrid
{
  Eigen::Vector3i dims = Eigen::Vector3i::Zero();
  double spacing = 1.0;
  Vec3 origin = Vec3::Zero();

  VoxelGrid() = default;
  VoxelGrid(const Eigen::Vector3i& d, double h, const Vec3& o);

  /// Grid centred on the torus with `voxels_per_side` voxels across the
  /// cross-section and one voxel of margin; all dims are even so the
  /// centre sits on a voxel corner.
  static VoxelGrid centered(const Torus& t, int voxels_per_side);

  /// dims^3 grid fitting the torus with one voxel of margin; the spacing is
  /// snapped so the cross-section side spans an even number of voxels.
  static VoxelGrid cube(const Torus& t, int dims);

  std::int64_t size() const { return std::int64_t(dims.x()) * dims.y() * dims.z(); }
  std::int64_t linear(const Voxel& v) const
  {
    return (std::int64_t(v.z()) * dims.y() + v.y()) * dims.x() + v.x();
  }
  Voxel unlinear(std::int64_t id) const
  {
    const int x = int(id % dims.x());
    const std::int64_t r = id / dims.x();
    return {x, int(r % dims.y()), int(r / dims.y())};
  }
  bool contains(const Voxel& v) const
  {
    return (v.array() >= 0).all() && (v.array() < dims.array()).all();
  }
  Vec3 center(const Voxel& v) const { return origin + (v.cast<double>().array() + 0.5).matrix() * spacing; }
  /// Voxel containing p (floor); may lie outside the grid.
  Voxel locate(const Vec3& p) const
  {
    const Vec3 q = (p - origin) / spacing;
    return {int(std::floor(q.x())), int(std::floor(q.y())), int(std::floor(q.z()))};
  }
  double voxel_volume() const { return spacing * spacing * spacing; }
  bool covers(const Torus& t) const;
};

/// Proper rigid motion x -> rotation * x + translation.
template <typename Scalar>
struct RigidTransform
{
  using Matrix = Eigen::Matrix<Scalar, 3, 3>;
  using Vector = Eigen::Matrix<Scalar, 3, 1>;

  Matrix rotation = Matrix::Identity();
  Vector translation = Vector::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform about_z(Scalar angle, const Vector& t = Vector::Zero())
  {
    RigidTransform r;
    r.rotation = Eigen::AngleAxis<Scalar>(angle, Vector::UnitZ()).toRotationMatrix();
    r.translation = t;
    return r;
  }

  Vector operator()(const Vector& p) const { return rotation * p + translation; }
  RigidTransform operator*(const RigidTransform& o) const
  {
    return {rotation * o.rotation, rotation * o.translation + translation};
  }
  RigidTransform inverse() const
  {
    return {rotation.transpose(), -(rotation.transpose() * translation)};
  }
  bool is_proper(Scalar tol = Scalar(1e-9)) const
  {
    return (rotation.transpose() * rotation - Matrix::Identity()).norm() <= tol &&
           std::abs(rotation.determinant() - Scalar(1)) <= tol;
  }
};

using Transform = RigidTransform<double>;

/// Voxels whose centres satisfy point_in_torus, as ascending linear ids.
/// Evaluated over z-slabs on `threads` workers; the result does not depend
/// on the partition.
std::vector<std::int64_t> domain_voxels(const Torus& t, const VoxelGrid& g, int threads = 1);

}  // namespace trusslock
