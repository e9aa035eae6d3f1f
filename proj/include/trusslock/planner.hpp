#pragma once

#include "trusslock/edge_elements.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <array>
#include <string>
#include <vector>

namespace trusslock {

using Vec2 = Eigen::Vector2d;

struct TrussGraph
{
  std::vector<Vec2> positions;
  std::vector<std::array<int, 2>> edges;

  int vertex_count() const { return int(positions.size()); }
  int edge_count() const { return int(edges.size()); }
  /// Incident edge ids of every vertex, ascending.
  std::vector<std::vector<int>> incidence() const;
  /// Direction angle of edge e leaving vertex v, in [0, 2*pi).
  double edge_angle(int e, int v) const;
};

/// w x h unit cells of side L.
TrussGraph make_square_grid(int w, int h, double edge_length, const Torus& t);
/// cols x rows pointy-top hexagons of side L in an offset-row honeycomb.
TrussGraph make_hex_grid(int cols, int rows, double edge_length, const Torus& t);

enum class KeyPolicy { EdgeKey, LooseKey };
KeyPolicy key_policy_from_string(const std::string& name);
std::string to_string(KeyPolicy policy);

enum class KeySource { EdgeEnd, LoosePeg };

struct VertexPlan
{
  int valence = 0;
  double rotation = 0.0;               // angle of sector 0
  std::vector<int> sector_edge;        // edge id per sector or -1
  int key_sector = 0;
  KeySource key_source = KeySource::LoosePeg;
  int key_edge = -1;
  std::vector<int> loose_connector_sectors;
};

struct EdgePlan
{
  std::array<int, 2> vertices;
  std::array<EndKind, 2> ends;
  ElementType type = ElementType::Basic;
  Transform placement;  // element local frame -> world
  Vec2 midpoint = Vec2::Zero();
};

struct BillOfMaterials
{
  int basic = 0;
  int one_key = 0;
  int two_key = 0;
  int split_pairs = 0;
  int loose_connectors = 0;
  int loose_pegs = 0;

  friend bool operator==(const BillOfMaterials&, const BillOfMaterials&) = default;
};

struct AssemblyPlan
{
  int design_valence = 0;
  KeyPolicy policy = KeyPolicy::EdgeKey;
  std::vector<VertexPlan> vertices;
  std::vector<EdgePlan> edges;
  BillOfMaterials bom;
};

/// Sector layout and key choice per vertex. Under EdgeKey every vertex takes
/// the peg from one incident edge end; vertices are matched to distinct
/// edges where possible (fewest TwoKey elements), visiting vertices and
/// edges in id order. Under LooseKey all edges are Basic and the split pair
/// goes into the lowest free sector with a loose peg.
AssemblyPlan assign_keys(const TrussGraph& graph, int design_valence, KeyPolicy policy);

/// assign_keys plus placements and the bill of materials.
AssemblyPlan plan_assembly(const TrussGraph& graph, int design_valence, KeyPolicy policy);

struct PlanCheck
{
  bool ok = true;
  std::vector<std::string> violations;
};

/// Re-derives every plan invariant from the graph and the raw per-edge ends.
PlanCheck validate_plan(const AssemblyPlan& plan, const TrussGraph& graph);

nlohmann::json to_json(const AssemblyPlan& plan, const TrussGraph& graph);

}  // namespace trusslock
