// trusslock: interlocking truss Connector / Edge Element generator.

#include "trusslock/mesh.hpp"
#include "trusslock/pipeline.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace trusslock;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitVerify = 3;

struct Overrides
{
  std::string config_path;
  std::optional<std::string> out;
  std::optional<int> resolution;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> policy;
  std::optional<int> threads;
  std::optional<std::string> grid_kind;
  std::vector<int> grid_dims;
};

RunConfig load(const Overrides& o)
{
  nlohmann::json j = nlohmann::json::object();
  if (!o.config_path.empty()) {
    std::ifstream is(o.config_path);
    if (!is) throw ConfigError("cannot read config file " + o.config_path);
    try {
      is >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
  }
  if (o.out) j["output"] = *o.out;
  if (o.resolution) j["resolution"] = *o.resolution;
  if (o.seed) j["seed"] = *o.seed;
  if (o.policy) j["policy"] = *o.policy;
  if (o.threads) j["threads"] = *o.threads;
  if (o.grid_kind) j["grid"]["kind"] = *o.grid_kind;
  if (!o.grid_dims.empty()) j["grid"]["dims"] = o.grid_dims;
  return RunConfig::from_json(j);
}

fs::path prepare_output(const RunConfig& c)
{
  fs::path dir(c.output);
  fs::create_directories(dir);
  return dir;
}

bool emit_mesh(const VoxelSet& voxels, const VoxelGrid& grid, const fs::path& path)
{
  const TriangleMesh mesh = voxels_to_mesh(voxels, grid);
  write_stl_binary(mesh, path);
  const bool ok = watertight_check(mesh);
  std::printf("  %-28s %8zu triangles  volume %.6f  %s\n", path.filename().c_str(), mesh.triangles.size(),
              mesh_volume(mesh), ok ? "watertight" : "NOT WATERTIGHT");
  return ok;
}

int cmd_connector(const RunConfig& c)
{
  const fs::path dir = prepare_output(c);
  const VertexBuild vb = build_vertex(c);
  std::printf("site curves: n=%d, min separation %.6f\n", c.curves.valence, vb.separation);
  std::printf("%-6s %12s %12s %11s\n", "label", "voxels", "volume", "components");
  for (const auto& r : vb.regions)
    std::printf("%-6d %12zu %12.6f %11d\n", r.label, r.voxels.size(), r.volume, check_connectivity(r));
  std::printf("domain volume %.6f (analytic %.6f)\n", double(vb.field.inside_count()) * vb.grid.voxel_volume(),
              torus_volume(vb.torus));

  {
    std::ofstream os(dir / "curves.txt");
    write_point_cloud(os, vb.curves);
    std::ofstream bin(dir / "labels.bin", std::ios::binary);
    write_label_field(bin, vb.field);
  }
  bool ok = true;
  for (const auto& r : vb.regions)
    ok &= emit_mesh(r.voxels, vb.grid, dir / ("connector_" + std::to_string(r.label) + ".stl"));
  for (const auto& p : make_loose_pieces(vb.split))
    ok &= emit_mesh(p.voxels, vb.grid, dir / ("split_" + p.id + ".stl"));
  return ok ? 0 : kExitVerify;
}

int cmd_element(const RunConfig& c, const std::string& type_name)
{
  const ElementType type = element_type_from_string(type_name);
  const fs::path dir = prepare_output(c);
  const VertexBuild vb = build_vertex(c);
  const int n = c.curves.valence;
  if (type == ElementType::SplitConnectorPieces) {
    bool ok = true;
    for (const auto& p : make_loose_pieces(vb.split))
      ok &= emit_mesh(p.voxels, vb.grid, dir / (element_stem(type, n) + "_" + p.id + ".stl"));
    return ok ? 0 : kExitVerify;
  }
  const EdgeElement el = compose_edge_element(type, vertex_kit(vb), c.edge_length);
  std::printf("%s: length %.6f, %zu voxels\n", to_string(type).c_str(), el.length, el.solid.size());
  return emit_mesh(el.solid, el.grid, dir / (element_stem(type, n) + ".stl")) ? 0 : kExitVerify;
}

int cmd_grid(const RunConfig& c)
{
  const fs::path dir = prepare_output(c);
  const int n = c.curves.valence;
  const TrussGraph graph = make_grid(c);
  const AssemblyPlan plan = plan_assembly(graph, n, c.policy);
  const PlanCheck check = validate_plan(plan, graph);
  if (!check.ok) {
    for (const auto& v : check.violations) std::fprintf(stderr, "plan violation: %s\n", v.c_str());
    return kExitVerify;
  }
  nlohmann::json manifest = to_json(plan, graph);
  // Design inputs only: where and how fast it ran must not change the bytes.
  nlohmann::json design = c.to_json();
  design.erase("output");
  design.erase("threads");
  manifest["config"] = design;
  {
    std::ofstream os(dir / "manifest.json");
    os << manifest.dump(2) << '\n';
  }

  const auto& b = plan.bom;
  std::printf("%s grid %dx%d: %d vertices, %d edges\n", c.grid_kind.c_str(), c.grid_dims[0], c.grid_dims[1],
              graph.vertex_count(), graph.edge_count());
  std::printf("%-18s %6s\n", "piece", "count");
  std::printf("%-18s %6d\n", "basic", b.basic);
  std::printf("%-18s %6d\n", "one_key", b.one_key);
  std::printf("%-18s %6d\n", "two_key", b.two_key);
  std::printf("%-18s %6d\n", "split_pairs", b.split_pairs);
  std::printf("%-18s %6d\n", "loose_connectors", b.loose_connectors);
  std::printf("%-18s %6d\n", "loose_pegs", b.loose_pegs);

  const VertexBuild vb = build_vertex(c);
  const VertexKit kit = vertex_kit(vb);
  bool ok = true;
  const std::pair<ElementType, int> kinds[] = {
      {ElementType::Basic, b.basic}, {ElementType::OneKey, b.one_key}, {ElementType::TwoKey, b.two_key}};
  for (const auto& [type, count] : kinds) {
    if (count == 0) continue;
    const EdgeElement el = compose_edge_element(type, kit, c.edge_length);
    ok &= emit_mesh(el.solid, el.grid, dir / (element_stem(type, n) + ".stl"));
  }
  for (const auto& p : make_loose_pieces(vb.split)) {
    if (p.id == "peg" && b.loose_pegs == 0) continue;
    ok &= emit_mesh(p.voxels, vb.grid, dir / ("split_" + p.id + "_" + std::to_string(n) + ".stl"));
  }
  if (b.loose_connectors > 0) ok &= emit_mesh(kit.connector.voxels, vb.grid, dir / ("connector_" + std::to_string(n) + ".stl"));
  return ok ? 0 : kExitVerify;
}

int cmd_verify(const RunConfig& c)
{
  const fs::path dir = prepare_output(c);
  const VertexBuild vb = build_vertex(c);
  const VertexVerification v = verify_vertex(vb, c.seed, c.threads);
  {
    std::ofstream os(dir / "verify.json");
    os << v.to_json().dump(2) << '\n';
  }
  auto line = [](const char* what, bool ok) { std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what); };
  line("unsplit vertex interlocked over sampled translations", v.unsplit_interlocked);
  line("unsplit vertex cannot be taken apart", v.unsplit_stuck);
  line("peg escapes along +radial only", v.peg_only_radial);
  line("halves blocked while the peg is in place", v.halves_locked_by_peg);
  line("halves free once the peg is removed", v.halves_free_without_peg);
  line("disassembly order: peg, halves, remaining Connectors", v.order_peg_halves_rest);
  std::printf("note: only straight-line translations are simulated; rotations are not tested\n");
  return v.holds() ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Interlocking truss Connectors and Edge Elements"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config_path, "JSON run configuration");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--resolution", o.resolution, "voxels per cross-section side");
  app.add_option("--seed", o.seed, "seed for sampled escape directions");
  app.add_option("--policy", o.policy, "key policy: edge-key | loose-key");
  app.add_option("--threads", o.threads, "worker threads");

  auto* connector = app.add_subcommand("connector", "Connector meshes and split pieces for one vertex");
  auto* element = app.add_subcommand("element", "one Edge Element mesh");
  std::string type_name;
  element->add_option("type", type_name, "basic | one_key | two_key | split_connector")->required();
  auto* grid = app.add_subcommand("grid", "plan a grid: manifest, meshes and bill of materials");
  grid->add_option("kind", o.grid_kind, "hex | square");
  grid->add_option("dims", o.grid_dims, "cells (w [h])");
  auto* verify = app.add_subcommand("verify", "simulate interlocking of one vertex");

  for (auto* sub : {connector, element, grid, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const RunConfig c = load(o);
    if (*grid) return cmd_grid(c);
    if (*connector) return cmd_connector(c);
    if (*element) return cmd_element(c, type_name);
    return cmd_verify(c);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const InvariantError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const PlanningError& e) {
    std::fprintf(stderr, "planning error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitVerify;
  }
}
