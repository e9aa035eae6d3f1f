#include "trusslock/planner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace trusslock {

namespace {

constexpr double kAngleTol = 1e-6;

double wrap_angle(double a)
{
  a = std::fmod(a, 2.0 * kPi);
  return a < 0.0 ? a + 2.0 * kPi : a;
}

void require_edge_length(double edge_length, const Torus& t)
{
  if (!(edge_length > 2.0 * t.outer_radius()))
    throw PlanningError("edge length must exceed 2 (R + s/2) for vertex engagement");
}

/// Sector index of an edge at a vertex, or -1 if it is off the sector grid.
int sector_of(double angle, double rotation, int n)
{
  const double step = 2.0 * kPi / n;
  const double rel = wrap_angle(angle - rotation);
  const double j = std::round(rel / step);
  if (std::abs(rel - j * step) > kAngleTol) return -1;
  return int(j) % n;
}

class KeyMatcher
{
public:
  KeyMatcher(const std::vector<std::vector<int>>& inc, int edges) : inc_(inc), owner_(std::size_t(edges), -1) {}

  bool assign(int v)
  {
    std::vector<char> seen(owner_.size(), 0);
    return augment(v, seen);
  }
  int owner(int e) const { return owner_[std::size_t(e)]; }

private:
  bool augment(int v, std::vector<char>& seen)
  {
    for (int e : inc_[std::size_t(v)]) {
      if (seen[std::size_t(e)]) continue;
      seen[std::size_t(e)] = 1;
      if (owner_[std::size_t(e)] < 0 || augment(owner_[std::size_t(e)], seen)) {
        owner_[std::size_t(e)] = v;
        return true;
      }
    }
    return false;
  }

  const std::vector<std::vector<int>>& inc_;
  std::vector<int> owner_;
};

int side_of(const std::array<int, 2>& edge, int v)
{
  return edge[0] == v ? 0 : 1;
}

}  // namespace

std::vector<std::vector<int>> TrussGraph::incidence() const
{
  std::vector<std::vector<int>> inc(positions.size());
  for (int e = 0; e < edge_count(); ++e)
    for (int v : edges[std::size_t(e)]) inc[std::size_t(v)].push_back(e);
  return inc;
}

double TrussGraph::edge_angle(int e, int v) const
{
  const auto& ed = edges[std::size_t(e)];
  const int other = ed[0] == v ? ed[1] : ed[0];
  const Vec2 d = positions[std::size_t(other)] - positions[std::size_t(v)];
  return wrap_angle(std::atan2(d.y(), d.x()));
}

TrussGraph make_square_grid(int w, int h, double edge_length, const Torus& t)
{
  if (w < 1 || h < 1) throw PlanningError("square grid needs at least one cell in each direction");
  require_edge_length(edge_length, t);
  TrussGraph g;
  const auto id = [w](int i, int j) { return j * (w + 1) + i; };
  for (int j = 0; j <= h; ++j)
    for (int i = 0; i <= w; ++i) g.positions.emplace_back(i * edge_length, j * edge_length);
  for (int j = 0; j <= h; ++j)
    for (int i = 0; i < w; ++i) g.edges.push_back({id(i, j), id(i + 1, j)});
  for (int j = 0; j < h; ++j)
    for (int i = 0; i <= w; ++i) g.edges.push_back({id(i, j), id(i, j + 1)});
  return g;
}

TrussGraph make_hex_grid(int cols, int rows, double edge_length, const Torus& t)
{
  if (cols < 1 || rows < 1) throw PlanningError("hex grid needs at least one hexagon in each direction");
  require_edge_length(edge_length, t);
  TrussGraph g;
  std::map<std::pair<long long, long long>, int> vertex_ids;
  std::map<std::pair<int, int>, int> edge_ids;
  const double L = edge_length;
  auto vertex = [&](const Vec2& p) {
    const std::pair<long long, long long> key{std::llround(p.x() * 1024.0 / L), std::llround(p.y() * 1024.0 / L)};
    const auto [it, fresh] = vertex_ids.try_emplace(key, g.vertex_count());
    if (fresh) g.positions.push_back(p);
    return it->second;
  };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const Vec2 center(std::sqrt(3.0) * L * (c + 0.5 * (r & 1)), 1.5 * L * r);
      std::array<int, 6> corner{};
      for (int k = 0; k < 6; ++k) {
        const double a = kPi / 2.0 + k * kPi / 3.0;
        corner[std::size_t(k)] = vertex(center + L * Vec2(std::cos(a), std::sin(a)));
      }
      for (int k = 0; k < 6; ++k) {
        int a = corner[std::size_t(k)];
        int b = corner[std::size_t((k + 1) % 6)];
        if (a > b) std::swap(a, b);
        if (edge_ids.try_emplace({a, b}, g.edge_count()).second) g.edges.push_back({a, b});
      }
    }
  return g;
}

KeyPolicy key_policy_from_string(const std::string& name)
{
  if (name == "edge-key") return KeyPolicy::EdgeKey;
  if (name == "loose-key") return KeyPolicy::LooseKey;
  throw InvariantError("unknown key policy '" + name + "' (expected edge-key or loose-key)");
}

std::string to_string(KeyPolicy policy)
{
  return policy == KeyPolicy::EdgeKey ? "edge-key" : "loose-key";
}

AssemblyPlan assign_keys(const TrussGraph& graph, int n, KeyPolicy policy)
{
  if (n < 1) throw PlanningError("design valence must be >= 1");
  const auto inc = graph.incidence();
  AssemblyPlan plan;
  plan.design_valence = n;
  plan.policy = policy;
  plan.vertices.resize(std::size_t(graph.vertex_count()));
  plan.edges.resize(std::size_t(graph.edge_count()));
  for (int e = 0; e < graph.edge_count(); ++e) {
    plan.edges[std::size_t(e)].vertices = graph.edges[std::size_t(e)];
    plan.edges[std::size_t(e)].ends = {EndKind::Connector, EndKind::Connector};
  }

  const double step = 2.0 * kPi / n;
  for (int v = 0; v < graph.vertex_count(); ++v) {
    auto& vp = plan.vertices[std::size_t(v)];
    const auto& edges = inc[std::size_t(v)];
    vp.valence = int(edges.size());
    vp.sector_edge.assign(std::size_t(n), -1);
    if (vp.valence > n) {
      std::ostringstream msg;
      msg << "vertex " << v << " has valence " << vp.valence << " above the design valence " << n;
      throw PlanningError(msg.str());
    }
    if (edges.empty()) continue;
    vp.rotation = std::fmod(graph.edge_angle(edges.front(), v), step);
    for (int e : edges) {
      const int s = sector_of(graph.edge_angle(e, v), vp.rotation, n);
      if (s < 0 || vp.sector_edge[std::size_t(s)] >= 0) {
        std::ostringstream msg;
        msg << "vertex " << v << ": incident edge angles do not match " << n << " sectors spaced "
            << 360.0 / n << " degrees apart";
        throw PlanningError(msg.str());
      }
      vp.sector_edge[std::size_t(s)] = e;
    }
  }

  if (policy == KeyPolicy::EdgeKey) {
    KeyMatcher matcher(inc, graph.edge_count());
    for (int v = 0; v < graph.vertex_count(); ++v)
      if (!inc[std::size_t(v)].empty()) matcher.assign(v);
    for (int e = 0; e < graph.edge_count(); ++e)
      if (matcher.owner(e) >= 0) plan.vertices[std::size_t(matcher.owner(e))].key_edge = e;
    for (int v = 0; v < graph.vertex_count(); ++v) {
      auto& vp = plan.vertices[std::size_t(v)];
      if (!inc[std::size_t(v)].empty() && vp.key_edge < 0) vp.key_edge = inc[std::size_t(v)].front();
    }
  }

  for (int v = 0; v < graph.vertex_count(); ++v) {
    auto& vp = plan.vertices[std::size_t(v)];
    if (vp.key_edge >= 0) {
      vp.key_source = KeySource::EdgeEnd;
      auto& ep = plan.edges[std::size_t(vp.key_edge)];
      ep.ends[std::size_t(side_of(ep.vertices, v))] = EndKind::Peg;
      vp.key_sector = int(std::find(vp.sector_edge.begin(), vp.sector_edge.end(), vp.key_edge) - vp.sector_edge.begin());
    } else {
      vp.key_source = KeySource::LoosePeg;
      const auto free = std::find(vp.sector_edge.begin(), vp.sector_edge.end(), -1);
      if (free == vp.sector_edge.end()) {
        std::ostringstream msg;
        msg << "vertex " << v << " has no free sector for a loose split Connector under " << to_string(policy);
        throw PlanningError(msg.str());
      }
      vp.key_sector = int(free - vp.sector_edge.begin());
    }
    for (int s = 0; s < n; ++s)
      if (vp.sector_edge[std::size_t(s)] < 0 && s != vp.key_sector) vp.loose_connector_sectors.push_back(s);
  }
  for (auto& ep : plan.edges) ep.type = element_type_for(ep.ends[0], ep.ends[1]);
  return plan;
}

AssemblyPlan plan_assembly(const TrussGraph& graph, int n, KeyPolicy policy)
{
  AssemblyPlan plan = assign_keys(graph, n, policy);
  for (auto& ep : plan.edges) {
    // The canonical OneKey element carries its Connector at local end A.
    const bool flip = ep.ends[0] == EndKind::Peg && ep.ends[1] == EndKind::Connector;
    const int a = ep.vertices[flip ? 1 : 0];
    const int b = ep.vertices[flip ? 0 : 1];
    const Vec2 pa = graph.positions[std::size_t(a)];
    const Vec2 pb = graph.positions[std::size_t(b)];
    const Vec2 d = pb - pa;
    ep.placement = Transform::about_z(std::atan2(d.y(), d.x()), Vec3(pa.x(), pa.y(), 0.0));
    ep.midpoint = 0.5 * (pa + pb);
    switch (ep.type) {
      case ElementType::Basic: ++plan.bom.basic; break;
      case ElementType::OneKey: ++plan.bom.one_key; break;
      case ElementType::TwoKey: ++plan.bom.two_key; break;
      case ElementType::SplitConnectorPieces: break;
    }
  }
  for (const auto& vp : plan.vertices) {
    ++plan.bom.split_pairs;
    plan.bom.loose_connectors += int(vp.loose_connector_sectors.size());
    if (vp.key_source == KeySource::LoosePeg) ++plan.bom.loose_pegs;
  }
  return plan;
}

PlanCheck validate_plan(const AssemblyPlan& plan, const TrussGraph& graph)
{
  PlanCheck check;
  auto fail = [&check](const std::string& what) {
    check.ok = false;
    check.violations.push_back(what);
  };
  const int n = plan.design_valence;
  if (int(plan.vertices.size()) != graph.vertex_count() || int(plan.edges.size()) != graph.edge_count()) {
    fail("plan size does not match graph");
    return check;
  }

  const auto inc = graph.incidence();
  int total_keys = 0;
  for (int v = 0; v < graph.vertex_count(); ++v) {
    const auto& vp = plan.vertices[std::size_t(v)];
    const std::string tag = "vertex " + std::to_string(v) + ": ";
    if (vp.valence != int(inc[std::size_t(v)].size())) fail(tag + "valence mismatch");
    if (int(vp.sector_edge.size()) != n) {
      fail(tag + "sector table has wrong size");
      continue;
    }
    for (int e : inc[std::size_t(v)]) {
      const auto it = std::find(vp.sector_edge.begin(), vp.sector_edge.end(), e);
      if (it == vp.sector_edge.end()) {
        fail(tag + "edge " + std::to_string(e) + " has no sector");
        continue;
      }
      const int s = int(it - vp.sector_edge.begin());
      const double expect = vp.rotation + 2.0 * kPi * s / n;
      const double diff = std::abs(std::remainder(graph.edge_angle(e, v) - expect, 2.0 * kPi));
      if (diff > kAngleTol) fail(tag + "edge " + std::to_string(e) + " is off its sector angle");
    }

    int pegs = 0;
    int connector_ends = 0;
    std::vector<int> occupancy(std::size_t(n), 0);
    for (int e : inc[std::size_t(v)]) {
      const auto& ep = plan.edges[std::size_t(e)];
      const EndKind end = ep.ends[std::size_t(side_of(graph.edges[std::size_t(e)], v))];
      const auto it = std::find(vp.sector_edge.begin(), vp.sector_edge.end(), e);
      if (end == EndKind::Peg) {
        ++pegs;
        if (vp.key_source != KeySource::EdgeEnd || vp.key_edge != e) fail(tag + "peg end that is not its key");
        if (it != vp.sector_edge.end() && int(it - vp.sector_edge.begin()) != vp.key_sector)
          fail(tag + "key edge outside the key sector");
      } else {
        ++connector_ends;
        if (it != vp.sector_edge.end()) ++occupancy[std::size_t(it - vp.sector_edge.begin())];
      }
    }
    const int loose_peg = vp.key_source == KeySource::LoosePeg ? 1 : 0;
    if (loose_peg && vp.sector_edge[std::size_t(vp.key_sector)] >= 0)
      fail(tag + "loose key placed in a sector that holds an edge");
    if (pegs + loose_peg != 1) fail(tag + "expected exactly one key, found " + std::to_string(pegs + loose_peg));
    total_keys += pegs + loose_peg;

    if (vp.key_sector < 0 || vp.key_sector >= n) {
      fail(tag + "key sector out of range");
      continue;
    }
    ++occupancy[std::size_t(vp.key_sector)];
    for (int s : vp.loose_connector_sectors) {
      if (s < 0 || s >= n) {
        fail(tag + "loose Connector sector out of range");
        continue;
      }
      ++occupancy[std::size_t(s)];
    }
    for (int s = 0; s < n; ++s)
      if (occupancy[std::size_t(s)] != 1)
        fail(tag + "sector " + std::to_string(s) + " filled " + std::to_string(occupancy[std::size_t(s)]) + " times");
    if (connector_ends + 1 + int(vp.loose_connector_sectors.size()) != n) fail(tag + "sector count does not sum to n");
  }

  BillOfMaterials bom;
  int edge_pegs = 0;
  for (int e = 0; e < graph.edge_count(); ++e) {
    const auto& ep = plan.edges[std::size_t(e)];
    const std::string tag = "edge " + std::to_string(e) + ": ";
    if (ep.vertices != graph.edges[std::size_t(e)]) fail(tag + "endpoints differ from graph");
    const int pegs = int(ep.ends[0] == EndKind::Peg) + int(ep.ends[1] == EndKind::Peg);
    edge_pegs += pegs;
    const ElementType expect = pegs == 0 ? ElementType::Basic : pegs == 1 ? ElementType::OneKey : ElementType::TwoKey;
    if (ep.type != expect) fail(tag + "element type inconsistent with its ends");
    if (ep.type == ElementType::Basic) ++bom.basic;
    if (ep.type == ElementType::OneKey) ++bom.one_key;
    if (ep.type == ElementType::TwoKey) ++bom.two_key;

    if (!ep.placement.is_proper()) fail(tag + "placement is not a proper rigid motion");
    const Vec3 pa(graph.positions[std::size_t(ep.vertices[0])].x(), graph.positions[std::size_t(ep.vertices[0])].y(), 0);
    const Vec3 pb(graph.positions[std::size_t(ep.vertices[1])].x(), graph.positions[std::size_t(ep.vertices[1])].y(), 0);
    const double len = (pb - pa).norm();
    const Vec3 o = ep.placement(Vec3::Zero());
    const Vec3 x = ep.placement(Vec3(len, 0, 0));
    const bool forward = (o - pa).norm() <= 1e-9 * len && (x - pb).norm() <= 1e-9 * len;
    const bool backward = (o - pb).norm() <= 1e-9 * len && (x - pa).norm() <= 1e-9 * len;
    if (!forward && !backward) fail(tag + "placement does not map the element onto the edge");
    if (backward && !(ep.ends[0] == EndKind::Peg && ep.ends[1] == EndKind::Connector))
      fail(tag + "placement reversed without a Connector/peg swap");
    if (forward && !backward && ep.ends[0] == EndKind::Peg && ep.ends[1] == EndKind::Connector)
      fail(tag + "placement puts the element's Connector end on a peg end");
  }
  for (const auto& vp : plan.vertices) {
    ++bom.split_pairs;
    bom.loose_connectors += int(vp.loose_connector_sectors.size());
    if (vp.key_source == KeySource::LoosePeg) ++bom.loose_pegs;
  }
  if (edge_pegs + bom.loose_pegs != graph.vertex_count()) fail("key conservation violated");
  if (total_keys != graph.vertex_count()) fail("total key count differs from vertex count");
  if (!(bom == plan.bom)) fail("bill of materials does not match recount");
  return check;
}

nlohmann::json to_json(const AssemblyPlan& plan, const TrussGraph& graph)
{
  using nlohmann::json;
  json vertices = json::array();
  json split_pairs = json::array();
  json loose_connectors = json::array();
  json loose_pegs = json::array();
  for (int v = 0; v < graph.vertex_count(); ++v) {
    const auto& vp = plan.vertices[std::size_t(v)];
    json sectors = json::array();
    for (int e : vp.sector_edge) sectors.push_back(e < 0 ? json(nullptr) : json(e));
    vertices.push_back({{"id", v},
                        {"position", {graph.positions[std::size_t(v)].x(), graph.positions[std::size_t(v)].y()}},
                        {"valence", vp.valence},
                        {"sector_rotation", vp.rotation},
                        {"sectors", sectors},
                        {"key_sector", vp.key_sector},
                        {"key_source", vp.key_source == KeySource::EdgeEnd ? "edge_end" : "loose_peg"},
                        {"key_edge", vp.key_edge < 0 ? json(nullptr) : json(vp.key_edge)},
                        {"loose_connector_sectors", vp.loose_connector_sectors}});
    split_pairs.push_back({{"vertex", v}, {"sector", vp.key_sector}});
    for (int s : vp.loose_connector_sectors) loose_connectors.push_back({{"vertex", v}, {"sector", s}});
    if (vp.key_source == KeySource::LoosePeg) loose_pegs.push_back({{"vertex", v}, {"sector", vp.key_sector}});
  }
  json edges = json::array();
  for (int e = 0; e < graph.edge_count(); ++e) {
    const auto& ep = plan.edges[std::size_t(e)];
    json rot = json::array();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) rot.push_back(ep.placement.rotation(r, c));
    edges.push_back({{"id", e},
                     {"vertices", {ep.vertices[0], ep.vertices[1]}},
                     {"ends", {to_string(ep.ends[0]), to_string(ep.ends[1])}},
                     {"type", to_string(ep.type)},
                     {"element", element_stem(ep.type, plan.design_valence)},
                     {"transform",
                      {{"rotation", rot},
                       {"translation",
                        {ep.placement.translation.x(), ep.placement.translation.y(), ep.placement.translation.z()}}}},
                     {"midpoint", {ep.midpoint.x(), ep.midpoint.y()}}});
  }
  const auto& b = plan.bom;
  return {{"design_valence", plan.design_valence},
          {"policy", to_string(plan.policy)},
          {"vertices", vertices},
          {"edges", edges},
          {"bom",
           {{"basic", b.basic},
            {"one_key", b.one_key},
            {"two_key", b.two_key},
            {"split_pairs", b.split_pairs},
            {"loose_connectors", b.loose_connectors},
            {"loose_pegs", b.loose_pegs}}},
          {"loose_pieces", {{"split_pairs", split_pairs}, {"loose_connectors", loose_connectors}, {"loose_pegs", loose_pegs}}}};
}

}  // namespace trusslock
