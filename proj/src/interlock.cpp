#include "trusslock/interlock.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <thread>
#include <unordered_set>

namespace trusslock {

namespace {

int gcd3(const Voxel& d)
{
  return std::gcd(std::gcd(std::abs(d.x()), std::abs(d.y())), std::abs(d.z()));
}

bool boxes_disjoint(const Voxel& alo, const Voxel& ahi, const Voxel& blo, const Voxel& bhi)
{
  return (ahi.array() < blo.array()).any() || (bhi.array() < alo.array()).any();
}

int step_budget(const Assembly& a)
{
  Voxel lo = Voxel::Constant(std::numeric_limits<int>::max());
  Voxel hi = Voxel::Constant(std::numeric_limits<int>::min());
  for (const auto& p : a.pieces) {
    if (p.voxels.empty()) continue;
    lo = lo.cwiseMin(p.voxels.min_corner());
    hi = hi.cwiseMax(p.voxels.max_corner());
  }
  return (hi - lo).sum() + 3;
}

template <typename F>
void parallel_for(int count, int threads, F&& f)
{
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < count; i += threads) f(i);
    });
  for (auto& th : pool) th.join();
}

DenseMask others_mask(const Assembly& a, std::size_t skip)
{
  std::vector<const VoxelSet*> sets;
  for (std::size_t i = 0; i < a.pieces.size(); ++i)
    if (i != skip) sets.push_back(&a.pieces[i].voxels);
  return DenseMask::of(sets);
}

}  // namespace

void Assembly::validate() const
{
  for (std::size_t i = 0; i < pieces.size(); ++i)
    for (std::size_t j = i + 1; j < pieces.size(); ++j)
      if (!disjoint(pieces[i].voxels, pieces[j].voxels))
        throw InvariantError("assembly pieces " + pieces[i].id + " and " + pieces[j].id + " overlap");
}

std::vector<Voxel> sample_directions(std::uint64_t seed, int random_count)
{
  std::vector<Voxel> dirs;
  for (int z = -1; z <= 1; ++z)
    for (int y = -1; y <= 1; ++y)
      for (int x = -1; x <= 1; ++x)
        if (x != 0 || y != 0 || z != 0) dirs.emplace_back(x, y, z);
  std::mt19937_64 rng(seed);
  // Draw raw 64-bit values and reduce them ourselves so the sequence does not
  // depend on the standard library's distribution implementation.
  auto draw = [&rng] { return int(rng() % 15) - 7; };
  while (int(dirs.size()) < 26 + random_count) {
    const Voxel d(draw(), draw(), draw());
    if (d.isZero() || gcd3(d) != 1) continue;
    if (std::find(dirs.begin(), dirs.end(), d) != dirs.end()) continue;
    dirs.push_back(d);
  }
  return dirs;
}

namespace {

// Lattice offsets o swept by a unit cube moving along t * d, t in [0, K]:
// those with |o_i - t d_i| < 1 on every axis for some t. Times are scaled
// by the lcm of the nonzero |d_i| so all comparisons are integral.
struct SweptOffset
{
  Voxel offset;
  std::int64_t entry;    // scaled time the offset is first overlapped
  std::int64_t rank;     // sum of per-axis entry bounds, orders ties
  int axis;              // axis whose bound sets the entry time
};

std::vector<SweptOffset> swept_offsets(const Voxel& d, int steps)
{
  std::int64_t scale = 1;
  for (int i = 0; i < 3; ++i)
    if (d[i] != 0) scale = std::lcm(scale, std::int64_t(std::abs(d[i])));
  const std::int64_t horizon = scale * steps;

  auto classify = [&](const Voxel& o, SweptOffset& out) {
    std::int64_t entry = std::numeric_limits<std::int64_t>::min();
    std::int64_t exit = std::numeric_limits<std::int64_t>::max();
    std::int64_t rank = 0;
    int axis = -1;
    for (int i = 0; i < 3; ++i) {
      if (d[i] == 0) {
        if (o[i] != 0) return false;
        continue;
      }
      const int sg = d[i] > 0 ? 1 : -1;
      const std::int64_t unit = scale / d[i];
      const std::int64_t a = (o[i] - sg) * unit;
      const std::int64_t b = (o[i] + sg) * unit;
      rank += a;
      if (a > entry) {
        entry = a;
        axis = i;
      }
      exit = std::min(exit, b);
    }
    if (!(std::max<std::int64_t>(entry, 0) < std::min(exit, horizon))) return false;
    out = {o, entry, rank, axis};
    return true;
  };

  // The set is 6-connected through each offset's entry predecessor.
  std::vector<SweptOffset> found;
  std::vector<Voxel> frontier = {Voxel::Zero()};
  std::unordered_set<std::uint64_t> seen;
  auto key = [](const Voxel& v) {
    constexpr std::int64_t bias = std::int64_t(1) << 20;
    return (std::uint64_t(v.x() + bias) << 42) | (std::uint64_t(v.y() + bias) << 21) | std::uint64_t(v.z() + bias);
  };
  seen.insert(key(Voxel::Zero()));
  while (!frontier.empty()) {
    const Voxel o = frontier.back();
    frontier.pop_back();
    for (int i = 0; i < 3; ++i)
      for (int sg : {1, -1}) {
        Voxel q = o;
        q[i] += sg;
        if (!seen.insert(key(q)).second) continue;
        SweptOffset so;
        if (!classify(q, so)) continue;
        found.push_back(so);
        frontier.push_back(q);
      }
  }
  std::sort(found.begin(), found.end(), [](const SweptOffset& a, const SweptOffset& b) {
    if (a.entry != b.entry) return a.entry < b.entry;
    if (a.rank != b.rank) return a.rank < b.rank;
    return voxel_less(a.offset, b.offset);
  });
  return found;
}

}  // namespace

namespace {

// A piece with its front layer along each of the six axis directions,
// reused across all directions tested for it.
struct SlidingPiece
{
  const VoxelSet* voxels;
  Voxel lo;
  Voxel hi;
  std::array<std::vector<Voxel>, 6> fronts;  // index 2 * axis + (negative ? 1 : 0)

  explicit SlidingPiece(const VoxelSet& piece) : voxels(&piece), lo(piece.min_corner()), hi(piece.max_corner())
  {
    const DenseMask self = DenseMask::of(piece);
    for (int i = 0; i < 3; ++i)
      for (int neg = 0; neg < 2; ++neg) {
        Voxel e = Voxel::Zero();
        e[i] = neg ? -1 : 1;
        auto& f = fronts[std::size_t(2 * i + neg)];
        for (const auto& v : piece)
          if (!self.test(v + e)) f.push_back(v);
      }
  }

  const std::vector<Voxel>& front(int axis, int sign) const { return fronts[std::size_t(2 * axis + (sign < 0))]; }
};

bool slide(const SlidingPiece& piece, const Voxel& direction, const DenseMask& others, int max_steps)
{
  if (direction.isZero()) throw InvariantError("translation direction must be nonzero");
  if (piece.voxels->empty() || others.empty_box()) return true;

  // Steps until the bounding boxes separate for good.
  int steps = 0;
  for (int k = 1; k <= max_steps && steps == 0; ++k)
    if (boxes_disjoint(piece.lo + k * direction, piece.hi + k * direction, others.lo(), others.hi())) steps = k;
  if (steps == 0) return false;

  // Each swept offset is entered from a neighbour one unit back along its
  // entry axis, already known to be free, so only the piece's front layer
  // on that axis can newly collide.
  for (const auto& so : swept_offsets(direction, steps))
    for (const auto& v : piece.front(so.axis, direction[so.axis]))
      if (others.test(v + so.offset)) return false;
  return true;
}

}  // namespace

bool can_translate(const VoxelSet& piece, const Voxel& direction, const DenseMask& others, int max_steps)
{
  return slide(SlidingPiece(piece), direction, others, max_steps);
}

bool can_translate(const VoxelSet& piece, const Voxel& direction, const std::vector<const VoxelSet*>& others,
                   int max_steps)
{
  return can_translate(piece, direction, DenseMask::of(others), max_steps);
}

const std::vector<Voxel>& EscapeReport::escapes_of(const std::string& id) const
{
  for (std::size_t i = 0; i < piece_ids.size(); ++i)
    if (piece_ids[i] == id) return escapes[i];
  throw InvariantError("no piece named " + id + " in report");
}

EscapeReport verify_interlocked(const Assembly& assembly, const std::vector<Voxel>& directions, int threads)
{
  if (assembly.pieces.size() < 2) throw InvariantError("verify_interlocked needs at least two pieces");
  assembly.validate();
  const int budget = step_budget(assembly);
  const std::size_t np = assembly.pieces.size();
  const std::size_t nd = directions.size();

  std::vector<DenseMask> masks(np);
  parallel_for(int(np), threads, [&](int i) { masks[std::size_t(i)] = others_mask(assembly, std::size_t(i)); });

  std::vector<std::optional<SlidingPiece>> sliding(np);
  parallel_for(int(np), threads, [&](int i) { sliding[std::size_t(i)].emplace(assembly.pieces[std::size_t(i)].voxels); });

  std::vector<std::uint8_t> free(np * nd, 0);
  parallel_for(int(np * nd), threads, [&](int q) {
    const std::size_t p = std::size_t(q) / nd;
    const std::size_t d = std::size_t(q) % nd;
    free[std::size_t(q)] = slide(*sliding[p], directions[d], masks[p], budget) ? 1 : 0;
  });

  EscapeReport report;
  report.interlocked = true;
  for (std::size_t p = 0; p < np; ++p) {
    report.piece_ids.push_back(assembly.pieces[p].id);
    std::vector<Voxel> esc;
    for (std::size_t d = 0; d < nd; ++d)
      if (free[p * nd + d]) esc.push_back(directions[d]);
    if (!esc.empty()) report.interlocked = false;
    report.escapes.push_back(std::move(esc));
  }
  return report;
}

DisassemblyResult verify_disassembly_sequence(const Assembly& assembly, const std::vector<Voxel>& directions,
                                              int threads)
{
  assembly.validate();
  DisassemblyResult result;
  Assembly remaining = assembly;
  const int budget = step_budget(assembly);
  while (!remaining.pieces.empty()) {
    if (remaining.pieces.size() == 1) {
      result.order.push_back(remaining.pieces.front().id);
      result.moves.push_back(directions.empty() ? Voxel::UnitZ() : directions.front());
      remaining.pieces.clear();
      break;
    }
    bool removed = false;
    for (std::size_t p = 0; p < remaining.pieces.size() && !removed; ++p) {
      const DenseMask mask = others_mask(remaining, p);
      const SlidingPiece piece(remaining.pieces[p].voxels);
      std::vector<std::uint8_t> free(directions.size(), 0);
      parallel_for(int(directions.size()), threads, [&](int d) {
        free[std::size_t(d)] =
            slide(piece, directions[std::size_t(d)], mask, budget) ? 1 : 0;
      });
      const auto it = std::find(free.begin(), free.end(), std::uint8_t(1));
      if (it == free.end()) continue;
      result.order.push_back(remaining.pieces[p].id);
      result.moves.push_back(directions[std::size_t(it - free.begin())]);
      remaining.pieces.erase(remaining.pieces.begin() + std::ptrdiff_t(p));
      removed = true;
    }
    if (!removed) {
      for (const auto& p : remaining.pieces) result.stuck.push_back(p.id);
      return result;
    }
  }
  result.success = true;
  return result;
}

nlohmann::json to_json(const EscapeReport& report)
{
  nlohmann::json pieces = nlohmann::json::object();
  for (std::size_t i = 0; i < report.piece_ids.size(); ++i) {
    nlohmann::json dirs = nlohmann::json::array();
    for (const auto& d : report.escapes[i]) dirs.push_back({d.x(), d.y(), d.z()});
    pieces[report.piece_ids[i]] = dirs;
  }
  return {{"pieces", pieces},
          {"interlocked", report.interlocked},
          {"motion_model", "straight-line translations over the sampled direction set; rotations not tested"}};
}

nlohmann::json to_json(const DisassemblyResult& result)
{
  nlohmann::json steps = nlohmann::json::array();
  for (std::size_t i = 0; i < result.order.size(); ++i)
    steps.push_back({{"piece", result.order[i]},
                     {"direction", {result.moves[i].x(), result.moves[i].y(), result.moves[i].z()}}});
  return {{"success", result.success}, {"steps", steps}, {"stuck", result.stuck}};
}

}  // namespace trusslock
