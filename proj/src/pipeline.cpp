#include "trusslock/pipeline.hpp"

#include <cmath>
#include <sstream>

namespace trusslock {

namespace {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback)
{
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  return j.at(key).get<T>();
}

}  // namespace

RunConfig RunConfig::defaults()
{
  return from_json(nlohmann::json::object());
}

RunConfig RunConfig::from_json(const nlohmann::json& j)
{
  RunConfig c;
  try {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    const auto torus = j.value("torus", nlohmann::json::object());
    c.revolve_radius = get_or(torus, "R", 3.0);
    c.side = get_or(torus, "s", 1.0);
    if (!(c.side > 0.0)) throw ConfigError("torus.s must be positive");

    const auto curves = j.value("curves", nlohmann::json::object());
    // Hex vertices meet three edges and square ones four.
    const bool square = j.value("grid", nlohmann::json::object()).value("kind", std::string("hex")) == "square";
    c.curves.valence = get_or(curves, "n", square ? 4 : 3);
    c.curves.amplitude = get_or(curves, "amplitude", 0.3 * c.side);
    c.curves.weave = get_or(curves, "weave", 0.08 * c.side);
    c.curves.gap = get_or(curves, "gap_deg", 22.0) * kPi / 180.0;
    c.curves.samples = get_or(curves, "samples", 200);
    c.curves.radial_offset = get_or(curves, "radial_offset", 0.0);
    c.min_separation = get_or(curves, "min_separation", 0.05 * c.side);

    const auto grid = j.value("grid", nlohmann::json::object());
    c.grid_kind = get_or<std::string>(grid, "kind", "hex");
    if (grid.contains("dims")) {
      const auto dims = grid.at("dims").get<std::vector<int>>();
      if (dims.empty() || dims.size() > 2) throw ConfigError("grid.dims takes one or two integers");
      c.grid_dims = {dims[0], dims.size() == 2 ? dims[1] : dims[0]};
    }
    c.edge_length = get_or(grid, "edge_length", 10.0 * c.side);

    const auto split = j.value("split", nlohmann::json::object());
    c.split.target_label = get_or(split, "target_label", 0);
    c.split.peg_side = get_or(split, "peg_side", 0.4 * c.side);
    c.split.peg_length = get_or(split, "peg_length", 0.7 * c.side);
    c.split.clearance = get_or(split, "clearance", 1);

    c.resolution = get_or(j, "resolution", 64);
    c.output = get_or<std::string>(j, "output", "out");
    c.seed = get_or<std::uint64_t>(j, "seed", 1);
    c.policy = key_policy_from_string(get_or<std::string>(j, "policy", "edge-key"));
    c.threads = get_or(j, "threads", 1);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const InvariantError& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

void RunConfig::validate() const
{
  try {
    const Torus t = torus();
    curves.validate(t);
    if (!(min_separation >= 0.0)) throw ConfigError("curves.min_separation must be >= 0");
    split.validate(t, curves.valence);
    if (resolution < 4) throw ConfigError("resolution must be at least 4 voxels per side");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (grid_kind != "hex" && grid_kind != "square") throw ConfigError("grid.kind must be hex or square");
    if (grid_dims[0] < 1 || grid_dims[1] < 1) throw ConfigError("grid.dims must be >= 1");
    if (!(edge_length > 2.0 * t.outer_radius())) throw ConfigError("grid.edge_length must exceed 2 (R + s/2)");
  } catch (const InvariantError& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json RunConfig::to_json() const
{
  return {{"torus", {{"R", revolve_radius}, {"s", side}}},
          {"curves",
           {{"n", curves.valence},
            {"amplitude", curves.amplitude},
            {"weave", curves.weave},
            {"gap_deg", curves.gap * 180.0 / kPi},
            {"samples", curves.samples},
            {"radial_offset", curves.radial_offset},
            {"min_separation", min_separation}}},
          {"grid", {{"kind", grid_kind}, {"dims", {grid_dims[0], grid_dims[1]}}, {"edge_length", edge_length}}},
          {"split",
           {{"target_label", split.target_label},
            {"peg_side", split.peg_side},
            {"peg_length", split.peg_length},
            {"clearance", split.clearance}}},
          {"resolution", resolution},
          {"output", output},
          {"seed", seed},
          {"policy", to_string(policy)},
          {"threads", threads}};
}

VertexBuild build_vertex(const RunConfig& config)
{
  VertexBuild vb{config.torus(), VoxelGrid::centered(config.torus(), config.resolution), {}, 0.0, {}, {},
                 config.split, {}};
  vb.curves = make_site_curves(config.curves, vb.torus);
  vb.separation = validate_separation(vb.curves, config.min_separation);
  vb.field = label_voxels(vb.curves, vb.torus, vb.grid, config.threads);
  vb.regions = extract_regions(vb.field);
  for (const auto& r : vb.regions) {
    const int parts = r.voxels.empty() ? 0 : check_connectivity(r);
    if (parts != 1) {
      std::ostringstream msg;
      msg << "Connector " << r.label << " has " << parts << " components; adjust the curve parameters";
      throw GeometryError(msg.str());
    }
  }
  vb.split = split_connector(vb.regions[std::size_t(config.split.target_label)], vb.field, config.split, vb.torus);
  return vb;
}

Assembly unsplit_assembly(const VertexBuild& vb)
{
  Assembly a;
  for (const auto& r : vb.regions) a.pieces.push_back({"connector_" + std::to_string(r.label), r.voxels});
  return a;
}

Assembly split_assembly(const VertexBuild& vb)
{
  Assembly a;
  for (auto& p : make_loose_pieces(vb.split)) {
    if (p.id == "peg") a.pieces.insert(a.pieces.begin(), std::move(p));
    else a.pieces.push_back(std::move(p));
  }
  for (const auto& r : vb.regions)
    if (r.label != vb.split.label) a.pieces.push_back({"connector_" + std::to_string(r.label), r.voxels});
  return a;
}

VertexKit vertex_kit(const VertexBuild& vb)
{
  return {vb.torus, vb.field, vb.regions.front(),
          make_peg(vb.grid, vb.torus, vb.split_spec, 0, vb.field.valence)};
}

TrussGraph make_grid(const RunConfig& config)
{
  const Torus t = config.torus();
  if (config.grid_kind == "square")
    return make_square_grid(config.grid_dims[0], config.grid_dims[1], config.edge_length, t);
  return make_hex_grid(config.grid_dims[0], config.grid_dims[1], config.edge_length, t);
}

}  // namespace trusslock

namespace trusslock {

nlohmann::json VertexVerification::to_json() const
{
  return {{"unsplit", trusslock::to_json(unsplit)},
          {"unsplit_disassembly", trusslock::to_json(unsplit_disassembly)},
          {"split", trusslock::to_json(split)},
          {"split_disassembly", trusslock::to_json(split_disassembly)},
          {"split_without_peg", trusslock::to_json(split_without_peg)},
          {"checks",
           {{"unsplit_interlocked", unsplit_interlocked},
            {"unsplit_not_disassemblable", unsplit_stuck},
            {"halves_locked_by_peg", halves_locked_by_peg},
            {"peg_escapes_radially_only", peg_only_radial},
            {"halves_free_without_peg", halves_free_without_peg},
            {"order_peg_halves_rest", order_peg_halves_rest}}},
          {"holds", holds()}};
}

VertexVerification verify_vertex(const VertexBuild& vb, std::uint64_t seed, int threads)
{
  const auto dirs = sample_directions(seed);
  VertexVerification out;

  const Assembly whole = unsplit_assembly(vb);
  out.unsplit = verify_interlocked(whole, dirs, threads);
  out.unsplit_interlocked = out.unsplit.interlocked;
  out.unsplit_disassembly = verify_disassembly_sequence(whole, dirs, threads);
  out.unsplit_stuck = !out.unsplit_disassembly.success && out.unsplit_disassembly.order.empty();

  const Assembly split = split_assembly(vb);
  out.split = verify_interlocked(split, dirs, threads);
  out.halves_locked_by_peg = out.split.escapes_of("half_a").empty() && out.split.escapes_of("half_b").empty();

  // The peg leaves through its channel: the lattice axis closest to the
  // sector's outward radial direction.
  const SectorFrame frame = SectorFrame::at(sector_center_angle(vb.split.label, vb.field.valence));
  Voxel radial = Voxel::Zero();
  int axis = 0;
  frame.radial.cwiseAbs().maxCoeff(&axis);
  radial[axis] = frame.radial[axis] > 0 ? 1 : -1;
  const auto& peg_dirs = out.split.escapes_of("peg");
  out.peg_only_radial = peg_dirs.size() == 1 && peg_dirs.front() == radial;

  Assembly no_peg = split;
  no_peg.pieces.erase(no_peg.pieces.begin());
  out.split_without_peg = verify_interlocked(no_peg, dirs, threads);
  out.halves_free_without_peg =
      !out.split_without_peg.escapes_of("half_a").empty() && !out.split_without_peg.escapes_of("half_b").empty();

  out.split_disassembly = verify_disassembly_sequence(split, dirs, threads);
  const auto& order = out.split_disassembly.order;
  out.order_peg_halves_rest = out.split_disassembly.success && order.size() == split.pieces.size() &&
                              order[0] == "peg" &&
                              ((order[1] == "half_a" && order[2] == "half_b") ||
                               (order[1] == "half_b" && order[2] == "half_a"));
  for (std::size_t i = 3; i < order.size() && out.order_peg_halves_rest; ++i)
    out.order_peg_halves_rest = order[i].rfind("connector_", 0) == 0;
  return out;
}

}  // namespace trusslock
