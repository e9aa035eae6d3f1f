#include "trusslock/voronoi.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <thread>

namespace trusslock {

namespace {

constexpr int kLeafSize = 8;

double box_dist2(const Vec3& q, const Vec3& lo, const Vec3& hi)
{
  double d = 0.0;
  for (int a = 0; a < 3; ++a) {
    double g = 0.0;
    if (q[a] < lo[a])
      g = lo[a] - q[a];
    else if (q[a] > hi[a])
      g = q[a] - hi[a];
    d += g * g;
  }
  return d;
}

template <typename T>
void put_le(std::ostream& os, T value)
{
  static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& is)
{
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw std::runtime_error("truncated label field");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

std::vector<SiteSample> flatten_sites(const std::vector<SiteCurve>& curves)
{
  std::vector<SiteSample> out;
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.points.size(); ++i) out.push_back({c.points[i], c.label, int(i)});
  return out;
}

KdTree::KdTree(std::vector<SiteSample> samples) : samples_(std::move(samples))
{
  if (samples_.empty()) throw InvariantError("KdTree needs at least one sample");
  nodes_.reserve(2 * samples_.size() / kLeafSize + 2);
  build(0, int(samples_.size()));
}

int KdTree::build(int begin, int end)
{
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  node.hi = -node.lo;
  for (int i = begin; i < end; ++i) {
    node.lo = node.lo.cwiseMin(samples_[std::size_t(i)].position);
    node.hi = node.hi.cwiseMax(samples_[std::size_t(i)].position);
  }
  const int id = int(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafSize) return id;

  int axis = 0;
  (node.hi - node.lo).maxCoeff(&axis);
  const int mid = begin + (end - begin) / 2;
  std::nth_element(samples_.begin() + begin, samples_.begin() + mid, samples_.begin() + end,
                   [axis](const SiteSample& a, const SiteSample& b) {
                     if (a.position[axis] != b.position[axis]) return a.position[axis] < b.position[axis];
                     if (a.label != b.label) return a.label < b.label;
                     return a.index < b.index;
                   });
  const int l = build(begin, mid);
  const int r = build(mid, end);
  nodes_[std::size_t(id)].left = l;
  nodes_[std::size_t(id)].right = r;
  return id;
}

Nearest KdTree::candidate(int slot, const Vec3& q) const
{
  const auto& s = samples_[std::size_t(slot)];
  return {dist2(q, s.position), s.label, s.index, slot};
}

void KdTree::search(int node_id, const Vec3& q, Nearest& best) const
{
  const Node& node = nodes_[std::size_t(node_id)];
  // Equal bounds may still hide a tie with a smaller label, so only prune on >.
  if (box_dist2(q, node.lo, node.hi) > best.dist2) return;
  if (node.left < 0) {
    for (int i = node.begin; i < node.end; ++i) {
      const Nearest c = candidate(i, q);
      if (c.better_than(best)) best = c;
    }
    return;
  }
  const Node& l = nodes_[std::size_t(node.left)];
  const Node& r = nodes_[std::size_t(node.right)];
  if (box_dist2(q, l.lo, l.hi) <= box_dist2(q, r.lo, r.hi)) {
    search(node.left, q, best);
    search(node.right, q, best);
  } else {
    search(node.right, q, best);
    search(node.left, q, best);
  }
}

Nearest KdTree::nearest(const Vec3& q) const
{
  return nearest(q, 0);
}

Nearest KdTree::nearest(const Vec3& q, int hint_slot) const
{
  Nearest best = candidate(hint_slot, q);
  search(0, q, best);
  return best;
}

std::int64_t LabelField::inside_count() const
{
  return std::int64_t(std::count_if(labels.begin(), labels.end(), [](std::uint8_t l) { return l != kOutside; }));
}

LabelField label_voxels(const std::vector<SiteCurve>& curves, const Torus& t, const VoxelGrid& g, int threads)
{
  if (curves.empty()) throw InvariantError("label_voxels needs at least one site curve");
  if (curves.size() >= kOutside) throw InvariantError("too many site curves for u8 labels");
  if (!g.covers(t)) throw InvariantError("voxel grid does not cover the torus (one voxel margin required)");

  const KdTree tree(flatten_sites(curves));
  LabelField field;
  field.grid = g;
  field.valence = int(curves.size());
  field.labels.assign(std::size_t(g.size()), kOutside);

  threads = std::max(1, std::min(threads, g.dims.z()));
  auto work = [&](int part) {
    const int z0 = int(std::int64_t(g.dims.z()) * part / threads);
    const int z1 = int(std::int64_t(g.dims.z()) * (part + 1) / threads);
    int hint = 0;
    for (int k = z0; k < z1; ++k)
      for (int j = 0; j < g.dims.y(); ++j)
        for (int i = 0; i < g.dims.x(); ++i) {
          const Voxel v(i, j, k);
          const Vec3 c = g.center(v);
          if (!point_in_torus(c, t)) continue;
          const Nearest best = tree.nearest(c, hint);
          hint = best.slot;
          field.labels[std::size_t(g.linear(v))] = std::uint8_t(best.label);
        }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int p = 0; p < threads; ++p) pool.emplace_back(work, p);
    for (auto& th : pool) th.join();
  }
  return field;
}

std::vector<ConnectorRegion> extract_regions(const LabelField& field)
{
  std::vector<std::vector<Voxel>> buckets(std::size_t(field.valence));
  const auto& g = field.grid;
  for (int k = 0; k < g.dims.z(); ++k)
    for (int j = 0; j < g.dims.y(); ++j)
      for (int i = 0; i < g.dims.x(); ++i) {
        const Voxel v(i, j, k);
        const std::uint8_t l = field.labels[std::size_t(g.linear(v))];
        if (l != kOutside) buckets[l].push_back(v);
      }
  std::vector<ConnectorRegion> regions;
  for (int l = 0; l < field.valence; ++l) {
    ConnectorRegion r;
    r.label = l;
    r.volume = double(buckets[std::size_t(l)].size()) * g.voxel_volume();
    r.voxels = VoxelSet::from_sorted(std::move(buckets[std::size_t(l)]));
    regions.push_back(std::move(r));
  }
  return regions;
}

int check_connectivity(const ConnectorRegion& region)
{
  if (region.voxels.empty()) throw InvariantError("check_connectivity needs a nonempty region");
  return connected_components(region.voxels);
}

double rotational_mismatch(const LabelField& field, const Torus& t)
{
  const int n = field.valence;
  const Eigen::Matrix3d rot = Eigen::AngleAxisd(2.0 * kPi / n, t.axis).toRotationMatrix();
  const auto& g = field.grid;
  std::int64_t inside = 0;
  std::int64_t bad = 0;
  for (int k = 0; k < g.dims.z(); ++k)
    for (int j = 0; j < g.dims.y(); ++j)
      for (int i = 0; i < g.dims.x(); ++i) {
        const Voxel v(i, j, k);
        const std::uint8_t l = field.labels[std::size_t(g.linear(v))];
        if (l == kOutside) continue;
        ++inside;
        const Voxel w = g.locate(t.center + rot * (g.center(v) - t.center));
        if (field.at(w) != std::uint8_t((l + 1) % n)) ++bad;
      }
  return inside == 0 ? 0.0 : double(bad) / double(inside);
}

void write_label_field(std::ostream& os, const LabelField& field)
{
  for (int a = 0; a < 3; ++a) put_le<std::uint32_t>(os, std::uint32_t(field.grid.dims[a]));
  put_le<double>(os, field.grid.spacing);
  for (int a = 0; a < 3; ++a) put_le<double>(os, field.grid.origin[a]);
  put_le<std::uint32_t>(os, std::uint32_t(field.valence));
  os.write(reinterpret_cast<const char*>(field.labels.data()), std::streamsize(field.labels.size()));
}

LabelField read_label_field(std::istream& is)
{
  Eigen::Vector3i dims;
  for (int a = 0; a < 3; ++a) dims[a] = int(get_le<std::uint32_t>(is));
  const double h = get_le<double>(is);
  Vec3 origin;
  for (int a = 0; a < 3; ++a) origin[a] = get_le<double>(is);
  LabelField f;
  f.grid = VoxelGrid(dims, h, origin);
  f.valence = int(get_le<std::uint32_t>(is));
  f.labels.resize(std::size_t(f.grid.size()));
  if (!is.read(reinterpret_cast<char*>(f.labels.data()), std::streamsize(f.labels.size())))
    throw std::runtime_error("truncated label field");
  return f;
}

}  // namespace trusslock
