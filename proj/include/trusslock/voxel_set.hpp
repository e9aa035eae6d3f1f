#pragma once

#include "trusslock/common.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace trusslock {

/// Sorted, duplicate-free set of integer voxel coordinates (z-major order).
class VoxelSet
{
public:
  VoxelSet() = default;

  /// Sorts and deduplicates.
  static VoxelSet from_unsorted(std::vector<Voxel> voxels);
  /// Caller guarantees sorted order and uniqueness.
  static VoxelSet from_sorted(std::vector<Voxel> voxels);

  std::size_t size() const { return voxels_.size(); }
  bool empty() const { return voxels_.empty(); }
  auto begin() const { return voxels_.begin(); }
  auto end() const { return voxels_.end(); }
  const Voxel& operator[](std::size_t i) const { return voxels_[i]; }
  std::span<const Voxel> view() const { return voxels_; }

  bool contains(const Voxel& v) const;
  Voxel min_corner() const;
  Voxel max_corner() const;

  VoxelSet translated(const Voxel& offset) const;
  /// Applies an injective voxel map (rotation/mirror on the lattice).
  VoxelSet mapped(const std::function<Voxel(const Voxel&)>& f) const;

  friend bool operator==(const VoxelSet& a, const VoxelSet& b) { return a.voxels_ == b.voxels_; }

private:
  std::vector<Voxel> voxels_;
};

VoxelSet set_union(const VoxelSet& a, const VoxelSet& b);
VoxelSet set_difference(const VoxelSet& a, const VoxelSet& b);
VoxelSet set_intersection(const VoxelSet& a, const VoxelSet& b);
bool disjoint(const VoxelSet& a, const VoxelSet& b);

/// Dense occupancy over a box; out-of-box queries read as empty.
class DenseMask
{
public:
  DenseMask() = default;
  DenseMask(const Voxel& lo, const Voxel& hi);
  static DenseMask of(const VoxelSet& s);
  static DenseMask of(std::span<const VoxelSet* const> sets);

  bool empty_box() const { return bits_.empty(); }
  const Voxel& lo() const { return lo_; }
  const Voxel& hi() const { return hi_; }

  bool test(const Voxel& v) const
  {
    if ((v.array() < lo_.array()).any() || (v.array() > hi_.array()).any()) return false;
    return bits_[index(v)] != 0;
  }
  void set(const Voxel& v) { bits_[index(v)] = 1; }
  void insert(const VoxelSet& s)
  {
    for (const auto& v : s) set(v);
  }

private:
  std::size_t index(const Voxel& v) const
  {
    const Voxel d = v - lo_;
    return (std::size_t(d.z()) * std::size_t(ext_.y()) + std::size_t(d.y())) * std::size_t(ext_.x()) +
           std::size_t(d.x());
  }

  Voxel lo_ = Voxel::Zero();
  Voxel hi_ = Voxel::Constant(-1);
  Voxel ext_ = Voxel::Zero();
  std::vector<std::uint8_t> bits_;
};

/// Number of 6-connected components.
int connected_components(const VoxelSet& s);

}  // namespace trusslock
