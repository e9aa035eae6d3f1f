#pragma once

#include "trusslock/domain.hpp"
#include "trusslock/site_curves.hpp"
#include "trusslock/voxel_set.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace trusslock {

inline constexpr std::uint8_t kOutside = 255;

/// Labelled site sample. Ordering for ties: label, then index within curve.
struct SiteSample
{
  Vec3 position;
  int label;
  int index;
};

std::vector<SiteSample> flatten_sites(const std::vector<SiteCurve>& curves);

/// Candidate nearest sample; compares by (squared distance, label, index).
struct Nearest
{
  double dist2;
  int label;
  int index;
  int slot;  // position in the tree's sample array

  bool better_than(const Nearest& o) const
  {
    if (dist2 != o.dist2) return dist2 < o.dist2;
    if (label != o.label) return label < o.label;
    return index < o.index;
  }
};

/// Exact nearest-sample index over a static point set.
class KdTree
{
public:
  explicit KdTree(std::vector<SiteSample> samples);

  const std::vector<SiteSample>& samples() const { return samples_; }

  Nearest nearest(const Vec3& q) const;
  /// Same result as nearest(q); `hint_slot` seeds the search bound.
  Nearest nearest(const Vec3& q, int hint_slot) const;

  static double dist2(const Vec3& a, const Vec3& b)
  {
    const double dx = a.x() - b.x();
    const double dy = a.y() - b.y();
    const double dz = a.z() - b.z();
    return dx * dx + dy * dy + dz * dz;
  }

private:
  struct Node
  {
    Vec3 lo;
    Vec3 hi;
    int begin;
    int end;
    int left = -1;
    int right = -1;
  };

  int build(int begin, int end);
  void search(int node, const Vec3& q, Nearest& best) const;
  Nearest candidate(int slot, const Vec3& q) const;

  std::vector<SiteSample> samples_;
  std::vector<Node> nodes_;
};

/// One label per voxel of `grid`: [0, n) inside the torus, kOutside elsewhere.
struct LabelField
{
  VoxelGrid grid;
  int valence = 0;
  std::vector<std::uint8_t> labels;

  std::uint8_t at(const Voxel& v) const { return grid.contains(v) ? labels[std::size_t(grid.linear(v))] : kOutside; }
  std::int64_t inside_count() const;
};

struct ConnectorRegion
{
  int label = 0;
  VoxelSet voxels;
  double volume = 0.0;
};

/// Nearest-sample Voronoi labelling of every voxel centre inside the torus.
/// Ties go to the smaller label, then the smaller sample index. The output
/// is identical for every thread count.
LabelField label_voxels(const std::vector<SiteCurve>& curves, const Torus& t, const VoxelGrid& g, int threads = 1);

/// One region per label; together they partition the inside voxels.
std::vector<ConnectorRegion> extract_regions(const LabelField& field);

int check_connectivity(const ConnectorRegion& region);

/// Fraction of inside voxels whose centre, rotated by 2*pi/n about the
/// axis, lands in a voxel not labelled (label + 1) mod n.
double rotational_mismatch(const LabelField& field, const Torus& t);

/// Little-endian: 3 x u32 dims, f64 spacing, 3 x f64 origin, u32 n, then
/// one u8 per voxel in x-fastest order (255 = outside).
void write_label_field(std::ostream& os, const LabelField& field);
LabelField read_label_field(std::istream& is);

}  // namespace trusslock
