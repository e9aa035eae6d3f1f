#include "trusslock/edge_elements.hpp"

#include <cmath>

namespace trusslock {

std::string to_string(ElementType type)
{
  switch (type) {
    case ElementType::Basic: return "basic";
    case ElementType::OneKey: return "one_key";
    case ElementType::TwoKey: return "two_key";
    case ElementType::SplitConnectorPieces: return "split_connector";
  }
  return "unknown";
}

std::string to_string(EndKind kind)
{
  return kind == EndKind::Connector ? "connector" : "peg";
}

ElementType element_type_from_string(const std::string& name)
{
  for (auto t : {ElementType::Basic, ElementType::OneKey, ElementType::TwoKey, ElementType::SplitConnectorPieces})
    if (to_string(t) == name) return t;
  throw InvariantError("unknown element type '" + name + "'");
}

ElementType element_type_for(EndKind a, EndKind b)
{
  const int pegs = int(a == EndKind::Peg) + int(b == EndKind::Peg);
  return pegs == 0 ? ElementType::Basic : pegs == 1 ? ElementType::OneKey : ElementType::TwoKey;
}

TubeSpec tube_for_edge(double edge_length, const Torus& t)
{
  const double len = edge_length - 2.0 * t.outer_radius();
  if (!(len > 0.0)) throw PlanningError("edge length must exceed 2 (R + s/2) to leave room for the tube");
  return {len, t.side};
}

VoxelSet make_tube(const TubeSpec& spec, const VoxelGrid& g, double x_start)
{
  if (!(spec.length > 0.0)) throw InvariantError("tube length must be positive");
  const double hs = 0.5 * spec.side;
  const double x_end = x_start + spec.length;
  std::vector<Voxel> out;
  for (int k = 0; k < g.dims.z(); ++k)
    for (int j = 0; j < g.dims.y(); ++j)
      for (int i = 0; i < g.dims.x(); ++i) {
        const Vec3 c = g.center({i, j, k});
        if (c.x() >= x_start && c.x() < x_end && std::abs(c.y()) <= hs && std::abs(c.z()) <= hs)
          out.emplace_back(i, j, k);
      }
  return VoxelSet::from_sorted(std::move(out));
}

bool validate_attachment(const LabelField& field, const Torus& t, int label, double angle)
{
  const auto& g = field.grid;
  const SectorFrame frame = SectorFrame::at(angle);
  const double hs = t.half_side();
  for (int k = 0; k < g.dims.z(); ++k)
    for (int j = 0; j < g.dims.y(); ++j)
      for (int i = 0; i < g.dims.x(); ++i) {
        const Voxel v(i, j, k);
        const std::uint8_t l = field.labels[std::size_t(g.linear(v))];
        if (l == kOutside) continue;
        const Vec3 loc = frame.local(g.center(v) - t.center);
        if (loc.x() > 0.0 && std::abs(loc.y()) <= hs && std::abs(loc.z()) <= hs && l != label) return false;
      }
  return true;
}

bool validate_attachment(const LabelField& field, const Torus& t, int label)
{
  return validate_attachment(field, t, label, sector_center_angle(label, field.valence));
}

std::string element_stem(ElementType type, int valence)
{
  return to_string(type) + "_" + std::to_string(valence);
}

EdgeElement compose_edge_element(ElementType type, const VertexKit& kit, double edge_length)
{
  if (type == ElementType::SplitConnectorPieces)
    throw InvariantError("split Connector pieces are loose, not tube-mounted; use make_loose_pieces");
  if (kit.connector.label != 0) throw InvariantError("element ends use the label-0 Connector");

  const Torus& t = kit.torus;
  const VoxelGrid& vg = kit.field.grid;
  const double h = vg.spacing;
  const int n = kit.field.valence;

  // Vertex B sits a whole number of voxels from A so the half-turn about the
  // edge midpoint (x -> L - x, y -> -y) is an exact index map.
  const int q = int(std::lround(edge_length / h));
  const double length = q * h;
  const TubeSpec tube = tube_for_edge(length, t);
  const int nx = vg.dims.x();
  const int ny = vg.dims.y();

  EdgeElement el;
  el.type = type;
  el.end_a = type == ElementType::TwoKey ? EndKind::Peg : EndKind::Connector;
  el.end_b = type == ElementType::Basic ? EndKind::Connector : EndKind::Peg;
  el.valence = n;
  el.length = length;
  el.grid = VoxelGrid(Eigen::Vector3i(nx + q, ny, vg.dims.z()), h, vg.origin);

  auto mirror_to_b = [&](const Voxel& v) { return Voxel(q + nx - 1 - v.x(), ny - 1 - v.y(), v.z()); };
  auto end_solid = [&](EndKind kind) -> const VoxelSet& {
    if (kind == EndKind::Connector) {
      if (!validate_attachment(kit.field, t, 0, 0.0))
        throw GeometryError("tube footprint meets voxels not owned by the attached Connector");
      return kit.connector.voxels;
    }
    return kit.peg;
  };

  VoxelSet solid = make_tube(tube, el.grid, t.outer_radius());
  solid = set_union(solid, end_solid(el.end_a));
  solid = set_union(solid, end_solid(el.end_b).mapped(mirror_to_b));
  if (connected_components(solid) != 1) throw GeometryError("composed Edge Element is not connected");
  el.solid = std::move(solid);
  return el;
}

}  // namespace trusslock
