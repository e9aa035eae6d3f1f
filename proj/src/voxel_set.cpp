#include "trusslock/voxel_set.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace trusslock {

namespace {
struct Less
{
  bool operator()(const Voxel& a, const Voxel& b) const { return voxel_less(a, b); }
};
}  // namespace

VoxelSet VoxelSet::from_unsorted(std::vector<Voxel> voxels)
{
  std::sort(voxels.begin(), voxels.end(), Less{});
  voxels.erase(std::unique(voxels.begin(), voxels.end()), voxels.end());
  return from_sorted(std::move(voxels));
}

VoxelSet VoxelSet::from_sorted(std::vector<Voxel> voxels)
{
  VoxelSet s;
  s.voxels_ = std::move(voxels);
  return s;
}

bool VoxelSet::contains(const Voxel& v) const
{
  return std::binary_search(voxels_.begin(), voxels_.end(), v, Less{});
}

Voxel VoxelSet::min_corner() const
{
  Voxel lo = Voxel::Constant(std::numeric_limits<int>::max());
  for (const auto& v : voxels_) lo = lo.cwiseMin(v);
  return lo;
}

Voxel VoxelSet::max_corner() const
{
  Voxel hi = Voxel::Constant(std::numeric_limits<int>::min());
  for (const auto& v : voxels_) hi = hi.cwiseMax(v);
  return hi;
}

VoxelSet VoxelSet::translated(const Voxel& offset) const
{
  std::vector<Voxel> out(voxels_);
  for (auto& v : out) v += offset;
  return from_sorted(std::move(out));
}

VoxelSet VoxelSet::mapped(const std::function<Voxel(const Voxel&)>& f) const
{
  std::vector<Voxel> out;
  out.reserve(voxels_.size());
  for (const auto& v : voxels_) out.push_back(f(v));
  return from_unsorted(std::move(out));
}

VoxelSet set_union(const VoxelSet& a, const VoxelSet& b)
{
  std::vector<Voxel> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), Less{});
  return VoxelSet::from_sorted(std::move(out));
}

VoxelSet set_difference(const VoxelSet& a, const VoxelSet& b)
{
  std::vector<Voxel> out;
  out.reserve(a.size());
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), Less{});
  return VoxelSet::from_sorted(std::move(out));
}

VoxelSet set_intersection(const VoxelSet& a, const VoxelSet& b)
{
  std::vector<Voxel> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out), Less{});
  return VoxelSet::from_sorted(std::move(out));
}

bool disjoint(const VoxelSet& a, const VoxelSet& b)
{
  auto i = a.begin();
  auto j = b.begin();
  Less less;
  while (i != a.end() && j != b.end()) {
    if (less(*i, *j))
      ++i;
    else if (less(*j, *i))
      ++j;
    else
      return false;
  }
  return true;
}

DenseMask::DenseMask(const Voxel& lo, const Voxel& hi) : lo_(lo), hi_(hi)
{
  if ((hi.array() < lo.array()).any()) return;
  ext_ = hi - lo + Voxel::Ones();
  bits_.assign(std::size_t(ext_.x()) * std::size_t(ext_.y()) * std::size_t(ext_.z()), 0);
}

DenseMask DenseMask::of(const VoxelSet& s)
{
  if (s.empty()) return {};
  DenseMask m(s.min_corner(), s.max_corner());
  m.insert(s);
  return m;
}

DenseMask DenseMask::of(std::span<const VoxelSet* const> sets)
{
  Voxel lo = Voxel::Constant(std::numeric_limits<int>::max());
  Voxel hi = Voxel::Constant(std::numeric_limits<int>::min());
  bool any = false;
  for (const auto* s : sets) {
    if (s->empty()) continue;
    any = true;
    lo = lo.cwiseMin(s->min_corner());
    hi = hi.cwiseMax(s->max_corner());
  }
  if (!any) return {};
  DenseMask m(lo, hi);
  for (const auto* s : sets) m.insert(*s);
  return m;
}

int connected_components(const VoxelSet& s)
{
  if (s.empty()) return 0;
  const DenseMask mask = DenseMask::of(s);
  DenseMask seen(mask.lo(), mask.hi());
  static const std::array<Voxel, 6> steps = {Voxel(1, 0, 0), Voxel(-1, 0, 0), Voxel(0, 1, 0),
                                             Voxel(0, -1, 0), Voxel(0, 0, 1), Voxel(0, 0, -1)};
  int components = 0;
  std::vector<Voxel> stack;
  for (const auto& start : s) {
    if (seen.test(start)) continue;
    ++components;
    seen.set(start);
    stack.push_back(start);
    while (!stack.empty()) {
      const Voxel v = stack.back();
      stack.pop_back();
      for (const auto& d : steps) {
        const Voxel w = v + d;
        if (mask.test(w) && !seen.test(w)) {
          seen.set(w);
          stack.push_back(w);
        }
      }
    }
  }
  return components;
}

}  // namespace trusslock
