#pragma once

#include "trusslock/key_split.hpp"
#include "trusslock/voxel_set.hpp"

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace trusslock {

/// Pieces in one voxel frame; voxel sets must be pairwise disjoint.
struct Assembly
{
  std::vector<Piece> pieces;

  void validate() const;
};

/// The 26 unit-cube neighbour directions followed by `random_count` distinct
/// primitive integer directions with entries in [-7, 7], drawn from `seed`.
std::vector<Voxel> sample_directions(std::uint64_t seed, int random_count = 72);

/// Straight-line removal: true iff the piece slides continuously along
/// `direction` without its voxel cubes ever overlapping `others`, until its
/// bounding box is clear of theirs within `max_steps` multiples of direction.
bool can_translate(const VoxelSet& piece, const Voxel& direction, const DenseMask& others, int max_steps);

/// Convenience overload building the obstacle mask from a list of sets.
bool can_translate(const VoxelSet& piece, const Voxel& direction, const std::vector<const VoxelSet*>& others,
                   int max_steps);

struct EscapeReport
{
  std::vector<std::string> piece_ids;
  std::vector<std::vector<Voxel>> escapes;  // parallel to piece_ids
  bool interlocked = false;

  const std::vector<Voxel>& escapes_of(const std::string& id) const;
};

/// Tests every piece against the union of the others along each direction.
/// Only translations are modelled; a true verdict says nothing about
/// rotational or compound motions.
EscapeReport verify_interlocked(const Assembly& assembly, const std::vector<Voxel>& directions, int threads = 1);

struct DisassemblyResult
{
  bool success = false;
  std::vector<std::string> order;
  std::vector<Voxel> moves;             // escape direction used at each step
  std::vector<std::string> stuck;       // remaining pieces on failure
};

/// Greedy: each round removes the first piece (in assembly order) that has
/// a free direction.
DisassemblyResult verify_disassembly_sequence(const Assembly& assembly, const std::vector<Voxel>& directions,
                                              int threads = 1);

nlohmann::json to_json(const EscapeReport& report);
nlohmann::json to_json(const DisassemblyResult& result);

}  // namespace trusslock
