// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: trusslock_acceptance <path to trusslock CLI> <scratch dir>

#include "oracles.hpp"
#include "trusslock/mesh.hpp"
#include "trusslock/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <thread>

using namespace trusslock;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int hardware_threads()
{
  return int(std::max(1u, std::thread::hardware_concurrency()));
}

RunConfig config_at(int resolution, int threads)
{
  RunConfig c = RunConfig::defaults();
  c.resolution = resolution;
  c.threads = threads;
  return c;
}

Outcome oracle_equivalence()
{
  const Torus t(3.0, 1.0);
  const auto curves = make_site_curves(CurveParams::defaults_for(t, 3), t);
  const VoxelGrid g = VoxelGrid::cube(t, 64);
  const auto t0 = std::chrono::steady_clock::now();
  const LabelField f = label_voxels(curves, t, g, 1);
  const double elapsed = seconds_since(t0);
  const auto expected = oracle::brute_force_labels(curves, t, g);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) mismatches += f.labels[i] != expected[i];
  return {mismatches == 0 && elapsed < 10.0,
          fmt("%zu mismatches over %zu voxels of a 64^3 grid; labelling %.2f s single-threaded", mismatches,
              expected.size(), elapsed)};
}

Outcome partition_symmetry(const VertexBuild& vb)
{
  bool partition = true;
  std::size_t total = 0;
  for (std::size_t a = 0; a < vb.regions.size(); ++a) {
    total += vb.regions[a].voxels.size();
    for (std::size_t b = a + 1; b < vb.regions.size(); ++b)
      partition &= disjoint(vb.regions[a].voxels, vb.regions[b].voxels);
  }
  const auto inside = domain_voxels(vb.torus, vb.grid, hardware_threads());
  partition &= std::int64_t(total) == vb.field.inside_count() && total == inside.size();
  for (auto id : inside) partition &= vb.field.labels[std::size_t(id)] != kOutside;

  double spread = 0.0;
  for (const auto& a : vb.regions)
    for (const auto& b : vb.regions)
      spread = std::max(spread, std::abs(a.volume - b.volume) / std::max(a.volume, b.volume));
  const double mismatch = rotational_mismatch(vb.field, vb.torus);

  const VertexBuild fine = build_vertex(config_at(128, hardware_threads()));
  const double mismatch_fine = rotational_mismatch(fine.field, fine.torus);
  const bool pass = partition && vb.regions.size() == 3 && spread <= 0.005 && mismatch <= 0.005 &&
                    mismatch_fine <= 0.0025;
  return {pass, fmt("partition %s; max pairwise volume difference %.4f%%; rotation mismatch %.3f%% at 64/s, %.3f%% "
                    "at 128/s",
                    partition ? "exact" : "BROKEN", 100 * spread, 100 * mismatch, 100 * mismatch_fine)};
}

Outcome volume_conservation(const VertexBuild& vb)
{
  std::size_t count = 0;
  for (const auto& r : vb.regions) count += r.voxels.size();
  const bool exact = std::int64_t(count) == vb.field.inside_count();
  double sum = 0.0;
  for (const auto& r : vb.regions) sum += r.volume;
  const double voxel_vol = double(vb.field.inside_count()) * vb.grid.voxel_volume();
  const double analytic = 2.0 * kPi * vb.torus.revolve_radius * vb.torus.side * vb.torus.side;
  const double rel = std::abs(voxel_vol - analytic) / analytic;
  const bool sums = std::abs(sum - voxel_vol) <= 1e-12 * voxel_vol;
  return {exact && sums && rel <= 0.01,
          fmt("region voxel counts sum to the inside count: %s; volume %.6f vs 2piRs^2 %.6f (%.3f%%)",
              exact && sums ? "yes" : "no", voxel_vol, analytic, 100 * rel)};
}

Outcome interlocking()
{
  const auto t0 = std::chrono::steady_clock::now();
  const VertexBuild vb = build_vertex(config_at(64, 1));
  const VertexVerification v = verify_vertex(vb, 1, 1);
  const double elapsed = seconds_since(t0);
  std::string order;
  for (const auto& id : v.split_disassembly.order) order += (order.empty() ? "" : " > ") + id;
  return {v.holds() && elapsed < 60.0,
          fmt("unsplit interlocked %s over %zu directions; peg-held halves fixed %s; order %s; %.1f s single-threaded "
              "(translations only)",
              v.unsplit_interlocked ? "yes" : "no", sample_directions(1).size(), v.halves_locked_by_peg ? "yes" : "no",
              order.c_str(), elapsed)};
}

Outcome split_correctness(const VertexBuild& vb)
{
  const SplitConnector& sc = vb.split;
  const double a = double(sc.half_a.size());
  const double b = double(sc.half_b.size());
  const double diff = std::abs(a - b) / std::max(a, b);
  const bool partition = disjoint(sc.half_a, sc.half_b) && disjoint(sc.half_a, sc.socket) &&
                         disjoint(sc.half_b, sc.socket) &&
                         set_union(set_union(sc.half_a, sc.half_b), sc.socket) == vb.regions[0].voxels;
  // Peg long sides run along the radial axis (x for label 0); the tangent (y)
  // and axial (z) neighbours within one voxel must be empty socket.
  std::vector<const VoxelSet*> solids = {&sc.half_a, &sc.half_b};
  for (std::size_t i = 1; i < vb.regions.size(); ++i) solids.push_back(&vb.regions[i].voxels);
  const DenseMask solid = DenseMask::of(std::span<const VoxelSet* const>(solids));
  int clearance = 1 << 20;
  for (const auto& v : sc.peg)
    for (const Voxel& d : {Voxel(0, 1, 0), Voxel(0, -1, 0), Voxel(0, 0, 1), Voxel(0, 0, -1)}) {
      int gap = 0;
      Voxel w = v + d;
      while (sc.peg.contains(w)) w += d;
      while (!solid.test(w) && gap < 8 && vb.field.at(w) != kOutside) {
        ++gap;
        w += d;
      }
      if (vb.field.at(w) != kOutside) clearance = std::min(clearance, gap);
    }
  const bool peg_inside = std::all_of(sc.peg.begin(), sc.peg.end(), [&](const Voxel& v) { return sc.socket.contains(v); });
  return {diff <= 0.02 && partition && peg_inside && clearance >= 1,
          fmt("halves %zu / %zu voxels (%.4f%% apart); halves + socket = Connector: %s; minimum side clearance %d voxel(s)",
              sc.half_a.size(), sc.half_b.size(), 100 * diff, partition ? "exact" : "NO", clearance)};
}

bool conserved(const AssemblyPlan& plan, const TrussGraph& g)
{
  int pegs = plan.bom.loose_pegs;
  for (const auto& e : plan.edges)
    for (auto k : e.ends) pegs += k == EndKind::Peg;
  bool ok = pegs == g.vertex_count();
  const auto inc = g.incidence();
  for (int v = 0; v < g.vertex_count(); ++v) {
    const VertexPlan& vp = plan.vertices[std::size_t(v)];
    const int mounted = int(inc[std::size_t(v)].size());
    const int connectors = mounted - (vp.key_source == KeySource::EdgeEnd ? 1 : 0);
    ok &= connectors + 1 + int(vp.loose_connector_sectors.size()) == plan.design_valence;
  }
  return ok && validate_plan(plan, g).ok;
}

Outcome planner_conservation()
{
  const Torus t(3.0, 1.0);
  const TrussGraph hex = make_hex_grid(3, 3, 10.0, t);
  const TrussGraph sq = make_square_grid(2, 2, 10.0, t);
  const TrussGraph one = make_hex_grid(1, 1, 10.0, t);
  const bool hex_ok = conserved(plan_assembly(hex, 3, KeyPolicy::EdgeKey), hex);
  const bool sq_ok = conserved(plan_assembly(sq, 4, KeyPolicy::EdgeKey), sq);
  const BillOfMaterials b = plan_assembly(one, 3, KeyPolicy::EdgeKey).bom;
  const bool bom_ok = b.one_key == 6 && b.split_pairs == 6 && b.loose_connectors == 6 && b.loose_pegs == 0 &&
                      b.basic == 0 && b.two_key == 0;
  return {hex_ok && sq_ok && bom_ok,
          fmt("hex 3x3 %s, square 2x2 %s; single hexagon BOM one_key %d, split pairs %d, loose Connectors %d, loose "
              "pegs %d",
              hex_ok ? "ok" : "FAILED", sq_ok ? "ok" : "FAILED", b.one_key, b.split_pairs, b.loose_connectors,
              b.loose_pegs)};
}

bool edge_manifold(const TriangleMesh& m)
{
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : m.triangles)
    for (int e = 0; e < 3; ++e) {
      const int a = t[std::size_t(e)];
      const int b = t[std::size_t((e + 1) % 3)];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  return !count.empty() && std::all_of(count.begin(), count.end(), [](const auto& kv) { return kv.second == 2; });
}

Outcome mesh_integrity(const VertexBuild& vb, const fs::path& dir)
{
  fs::create_directories(dir);
  std::vector<std::tuple<std::string, const VoxelSet*, VoxelGrid>> solids;
  for (const auto& r : vb.regions) solids.emplace_back("connector_" + std::to_string(r.label), &r.voxels, vb.grid);
  const auto pieces = make_loose_pieces(vb.split);
  for (const auto& p : pieces) solids.emplace_back("split_" + p.id, &p.voxels, vb.grid);
  const VertexKit kit = vertex_kit(vb);
  std::vector<EdgeElement> elements;
  for (auto type : {ElementType::Basic, ElementType::OneKey, ElementType::TwoKey})
    elements.push_back(compose_edge_element(type, kit, 10.0));
  for (const auto& e : elements) solids.emplace_back(element_stem(e.type, 3), &e.solid, e.grid);

  int good = 0;
  std::string bad;
  double worst = 0.0;
  for (const auto& [name, voxels, grid] : solids) {
    const TriangleMesh m = voxels_to_mesh(*voxels, grid);
    const fs::path path = dir / (name + ".stl");
    write_stl_binary(m, path);
    const double expect = double(voxels->size()) * grid.voxel_volume();
    const double rel = std::abs(mesh_volume(m) - expect) / expect;
    worst = std::max(worst, rel);
    bool ok = watertight_check(m) && edge_manifold(m) && rel <= 1e-9;
    try {
      const auto stl = oracle::parse_stl(path.string());
      ok &= stl.bytes == 84 + 50 * m.triangles.size() && fs::file_size(path) == stl.bytes;
      ok &= stl.triangles.size() == m.triangles.size();
      for (std::size_t i = 0; ok && i < m.triangles.size(); ++i)
        for (int v = 0; v < 3; ++v)
          for (int k = 0; k < 3; ++k)
            ok &= stl.triangles[i].v[v][k] == float(m.vertices[std::size_t(m.triangles[i][std::size_t(v)])][k]);
      ok &= std::abs(oracle::stl_volume(stl) - expect) <= 1e-4 * expect;
    } catch (const std::exception& e) {
      ok = false;
    }
    if (ok)
      ++good;
    else
      bad += " " + name;
  }
  return {good == int(solids.size()),
          fmt("%d/%zu meshes closed, edge-manifold and round-tripped; worst volume error %.2e relative%s", good,
              solids.size(), worst, bad.empty() ? "" : ("; failing:" + bad).c_str())};
}

std::string slurp(const fs::path& p)
{
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

Outcome determinism(const std::string& cli, const fs::path& root)
{
  struct Run
  {
    std::string name;
    int threads;
  };
  const Run runs[] = {{"a", 1}, {"b", 1}, {"c", hardware_threads() > 1 ? hardware_threads() : 4}};
  for (const auto& r : runs) {
    const fs::path out = root / r.name;
    fs::remove_all(out);
    for (const std::string sub : {"connector", "grid hex 1", "element two_key"}) {
      const std::string cmd = "\"" + cli + "\" " + sub + " --resolution 32 --seed 7 --threads " +
                              std::to_string(r.threads) + " --out \"" + out.string() + "\" > /dev/null";
      if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
    }
  }
  std::size_t files = 0;
  std::string diff;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    const std::string name = entry.path().filename().string();
    if (entry.path().extension() != ".stl" && name != "manifest.json") continue;
    ++files;
    const std::string ref = slurp(entry.path());
    for (const char* other : {"b", "c"})
      if (slurp(root / other / name) != ref) diff += " " + std::string(other) + "/" + name;
  }
  return {files > 0 && diff.empty(),
          fmt("%zu STL/manifest files byte-identical across two runs and 1 vs %d threads%s", files, runs[2].threads,
              diff.empty() ? "" : ("; differing:" + diff).c_str())};
}

}  // namespace

int main(int argc, char** argv)
{
  if (argc < 3) {
    std::fprintf(stderr, "usage: %s <trusslock cli> <scratch dir>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path scratch = argv[2];
  fs::create_directories(scratch);

  const VertexBuild vb = build_vertex(config_at(64, hardware_threads()));

  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"oracle equivalence", [] { return oracle_equivalence(); }},
      {"partition and symmetry", [&] { return partition_symmetry(vb); }},
      {"volume conservation", [&] { return volume_conservation(vb); }},
      {"interlocking", [] { return interlocking(); }},
      {"split correctness", [&] { return split_correctness(vb); }},
      {"planner conservation", [] { return planner_conservation(); }},
      {"mesh integrity", [&] { return mesh_integrity(vb, scratch / "meshes"); }},
      {"determinism", [&] { return determinism(cli, scratch / "runs"); }},
  };

  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d acceptance criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
