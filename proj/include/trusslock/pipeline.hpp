#pragma once

#include "trusslock/edge_elements.hpp"
#include "trusslock/interlock.hpp"
#include "trusslock/planner.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <string>

namespace trusslock {

class ConfigError : public std::runtime_error
{
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig
{
  double revolve_radius = 3.0;
  double side = 1.0;
  CurveParams curves;
  double min_separation = 0.05;
  std::string grid_kind = "hex";
  std::array<int, 2> grid_dims = {1, 1};
  double edge_length = 10.0;
  SplitSpec split;
  int resolution = 64;  // voxels per cross-section side
  std::string output = "out";
  std::uint64_t seed = 1;
  KeyPolicy policy = KeyPolicy::EdgeKey;
  int threads = 1;

  Torus torus() const { return Torus(revolve_radius, side); }

  /// Lengths not given in the JSON are scaled from s; every invariant is
  /// checked before returning. Throws ConfigError.
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig defaults();
  void validate() const;
  nlohmann::json to_json() const;
};

/// All geometry of one vertex, from site curves to the split Connector.
struct VertexBuild
{
  Torus torus;
  VoxelGrid grid;
  std::vector<SiteCurve> curves;
  double separation = 0.0;
  LabelField field;
  std::vector<ConnectorRegion> regions;
  SplitSpec split_spec;
  SplitConnector split;
};

VertexBuild build_vertex(const RunConfig& config);

/// All n intact Connectors, ids "connector_<k>".
Assembly unsplit_assembly(const VertexBuild& vb);
/// peg, half_a, half_b, then the remaining Connectors.
Assembly split_assembly(const VertexBuild& vb);
/// Label-0 Connector and peg for tube-mounted element ends.
VertexKit vertex_kit(const VertexBuild& vb);

TrussGraph make_grid(const RunConfig& config);

}  // namespace trusslock

namespace trusslock {

/// Outcome of the vertex interlocking checks run by `verify`.
struct VertexVerification
{
  EscapeReport unsplit;
  DisassemblyResult unsplit_disassembly;
  EscapeReport split;
  DisassemblyResult split_disassembly;
  EscapeReport split_without_peg;

  bool unsplit_interlocked = false;
  bool unsplit_stuck = false;
  bool halves_locked_by_peg = false;
  bool peg_only_radial = false;
  bool halves_free_without_peg = false;
  bool order_peg_halves_rest = false;

  bool holds() const
  {
    return unsplit_interlocked && unsplit_stuck && halves_locked_by_peg && peg_only_radial &&
           halves_free_without_peg && order_peg_halves_rest;
  }
  nlohmann::json to_json() const;
};

VertexVerification verify_vertex(const VertexBuild& vb, std::uint64_t seed, int threads = 1);

}  // namespace trusslock
