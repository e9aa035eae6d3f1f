#pragma once

#include "trusslock/voronoi.hpp"

#include <string>
#include <vector>

namespace trusslock {

struct SplitSpec
{
  int target_label = 0;
  double peg_side = 0.4;
  double peg_length = 0.7;  // radially inward from the outer face
  int clearance = 1;        // voxels

  static SplitSpec defaults_for(const Torus& t);
  void validate(const Torus& t, int valence) const;
};

/// Orthonormal frame of a Connector sector, radial axis first.
struct SectorFrame
{
  Vec3 radial;
  Vec3 tangent;
  Vec3 axial;

  static SectorFrame at(double angle);
  Vec3 local(const Vec3& d) const { return {d.dot(radial), d.dot(tangent), d.dot(axial)}; }
};

inline double sector_center_angle(int label, int valence)
{
  return 2.0 * kPi * label / valence;
}

struct SplitConnector
{
  int label = 0;
  VoxelSet half_a;  // negative tangent side
  VoxelSet half_b;  // positive tangent side
  VoxelSet socket;
  VoxelSet peg;
};

/// Cuts the Connector along the vertical plane through the axis at its
/// sector centre and opens a square radial channel at z = 0 from the outer
/// face. The peg is the p x p x l prism resting in that channel.
SplitConnector split_connector(const ConnectorRegion& region, const LabelField& field, const SplitSpec& spec,
                               const Torus& t);

/// Peg voxels for `spec` in the sector frame of `label`.
VoxelSet make_peg(const VoxelGrid& g, const Torus& t, const SplitSpec& spec, int label, int valence);

struct Piece
{
  std::string id;
  VoxelSet voxels;
};

/// The two halves then the peg, as independent solids.
std::vector<Piece> make_loose_pieces(const SplitConnector& sc);

}  // namespace trusslock
