#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace trusslock {

using Vec3 = Eigen::Vector3d;
using Voxel = Eigen::Vector3i;

/// Raised when a value violates a documented invariant or precondition.
class InvariantError : public std::runtime_error
{
public:
  explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a pipeline stage produces geometry that fails its checks
/// (deformation, separation, split, attachment, composition).
class GeometryError : public std::runtime_error
{
public:
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

class PlanningError : public std::runtime_error
{
public:
  explicit PlanningError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kPi = 3.14159265358979323846;

inline bool voxel_less(const Voxel& a, const Voxel& b)
{
  if (a.z() != b.z()) return a.z() < b.z();
  if (a.y() != b.y()) return a.y() < b.y();
  return a.x() < b.x();
}

}  // namespace trusslock
