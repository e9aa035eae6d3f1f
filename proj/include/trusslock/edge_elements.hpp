#pragma once

#include "trusslock/key_split.hpp"

#include <optional>
#include <string>

namespace trusslock {

enum class ElementType { Basic, OneKey, TwoKey, SplitConnectorPieces };
enum class EndKind { Connector, Peg };

std::string to_string(ElementType type);
std::string to_string(EndKind kind);
ElementType element_type_from_string(const std::string& name);
ElementType element_type_for(EndKind a, EndKind b);

struct TubeSpec
{
  double length;  // tube only, vertex engagement excluded
  double side;
};

/// Tube length for a centre-to-centre edge length: L - 2 (R + s/2).
TubeSpec tube_for_edge(double edge_length, const Torus& t);

/// s x s prism along +x whose voxel centres satisfy x in [x_start, x_start + length).
VoxelSet make_tube(const TubeSpec& spec, const VoxelGrid& g, double x_start);

/// Everything one vertex contributes to an element end: the Connector of
/// label 0 (sector centre on +x) and the matching peg.
struct VertexKit
{
  Torus torus;
  LabelField field;
  ConnectorRegion connector;
  VoxelSet peg;
};

struct EdgeElement
{
  ElementType type;
  EndKind end_a;
  EndKind end_b;
  int valence;
  double length;  // centre-to-centre, snapped to the voxel lattice
  VoxelGrid grid;
  VoxelSet solid;
};

/// True iff every torus voxel in the radial extension of the s x s tube
/// footprint at `angle` (through the whole ring, centre side excluded)
/// carries `label`.
bool validate_attachment(const LabelField& field, const Torus& t, int label, double angle);
bool validate_attachment(const LabelField& field, const Torus& t, int label);

/// Element in its local frame: tube along +x, vertex A centred at the
/// origin, vertex B at x = length. Connector ends butt against the outer
/// torus face; peg ends sit coaxially on the tube end.
EdgeElement compose_edge_element(ElementType type, const VertexKit& kit, double edge_length);

/// Element file stem, e.g. "one_key_3".
std::string element_stem(ElementType type, int valence);

}  // namespace trusslock
