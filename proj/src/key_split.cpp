#include "trusslock/key_split.hpp"

#include <cmath>
#include <sstream>

namespace trusslock {

SplitSpec SplitSpec::defaults_for(const Torus& t)
{
  SplitSpec s;
  s.peg_side = 0.4 * t.side;
  s.peg_length = 0.7 * t.side;
  return s;
}

void SplitSpec::validate(const Torus& t, int valence) const
{
  if (!(peg_side > 0.0 && peg_side < t.side)) throw InvariantError("peg side must lie in (0, s)");
  if (!(peg_length > 0.0 && peg_length < t.side)) throw InvariantError("peg length must lie in (0, s)");
  if (clearance < 0) throw InvariantError("peg clearance must be >= 0 voxels");
  if (target_label < 0 || target_label >= valence) throw InvariantError("split target label out of range");
}

SectorFrame SectorFrame::at(double angle)
{
  return {Vec3(std::cos(angle), std::sin(angle), 0.0), Vec3(-std::sin(angle), std::cos(angle), 0.0), Vec3::UnitZ()};
}

namespace {

struct Channel
{
  double u_min;
  double half_width;

  bool holds(const Vec3& local) const
  {
    return local.x() >= u_min && std::abs(local.y()) <= half_width && std::abs(local.z()) <= half_width;
  }
};

}  // namespace

VoxelSet make_peg(const VoxelGrid& g, const Torus& t, const SplitSpec& spec, int label, int valence)
{
  const SectorFrame frame = SectorFrame::at(sector_center_angle(label, valence));
  const double outer = t.outer_radius();
  const double hp = 0.5 * spec.peg_side;
  std::vector<Voxel> out;
  for (int k = 0; k < g.dims.z(); ++k)
    for (int j = 0; j < g.dims.y(); ++j)
      for (int i = 0; i < g.dims.x(); ++i) {
        const Voxel v(i, j, k);
        const Vec3 c = g.center(v);
        const Vec3 l = frame.local(c - t.center);
        if (l.x() >= outer - spec.peg_length && l.x() <= outer && std::abs(l.y()) <= hp && std::abs(l.z()) <= hp &&
            point_in_torus(c, t))
          out.push_back(v);
      }
  return VoxelSet::from_sorted(std::move(out));
}

SplitConnector split_connector(const ConnectorRegion& region, const LabelField& field, const SplitSpec& spec,
                               const Torus& t)
{
  const int n = field.valence;
  spec.validate(t, n);
  if (region.label != spec.target_label) throw InvariantError("region label differs from split target label");
  if (region.voxels.empty() || check_connectivity(region) != 1)
    throw InvariantError("split_connector requires a connected Connector region");

  const auto& g = field.grid;
  const double h = g.spacing;
  const SectorFrame frame = SectorFrame::at(sector_center_angle(region.label, n));
  const Channel channel{t.outer_radius() - spec.peg_length - spec.clearance * h,
                        0.5 * spec.peg_side + spec.clearance * h};

  // The channel may only cut into this Connector.
  for (int k = 0; k < g.dims.z(); ++k)
    for (int j = 0; j < g.dims.y(); ++j)
      for (int i = 0; i < g.dims.x(); ++i) {
        const Voxel v(i, j, k);
        const std::uint8_t l = field.labels[std::size_t(g.linear(v))];
        if (l == kOutside || l == region.label) continue;
        if (channel.holds(frame.local(g.center(v) - t.center))) {
          std::ostringstream msg;
          msg << "socket channel would cut Connector " << int(l);
          throw GeometryError(msg.str());
        }
      }

  std::vector<Voxel> a;
  std::vector<Voxel> b;
  std::vector<Voxel> socket;
  for (const auto& v : region.voxels) {
    const Vec3 l = frame.local(g.center(v) - t.center);
    if (channel.holds(l))
      socket.push_back(v);
    else if (l.y() < 0.0)
      a.push_back(v);
    else
      b.push_back(v);
  }

  SplitConnector sc;
  sc.label = region.label;
  sc.half_a = VoxelSet::from_sorted(std::move(a));
  sc.half_b = VoxelSet::from_sorted(std::move(b));
  sc.socket = VoxelSet::from_sorted(std::move(socket));
  sc.peg = make_peg(g, t, spec, region.label, n);
  if (sc.peg.empty()) throw GeometryError("peg is empty at this resolution");
  if (!set_difference(sc.peg, sc.socket).empty()) throw GeometryError("peg does not fit inside its socket");
  return sc;
}

std::vector<Piece> make_loose_pieces(const SplitConnector& sc)
{
  return {{"half_a", sc.half_a}, {"half_b", sc.half_b}, {"peg", sc.peg}};
}

}  // namespace trusslock
