#pragma once

#include "bge/grouprep.hpp"

namespace bge {

// The rank-3 expansion of an embedding: points are the codomain's elements,
// lines and planes the cosets of the point and line images.  Left
// multiplication is an incidence automorphism, sharply transitive on points.
struct ExpansionGeometry {
  std::shared_ptr<const FiniteGroup> G;

  struct Coset {
    int elem = 0;              // index of the geometry element
    std::vector<int> members;  // sorted group-element indices
  };
  std::vector<Coset> lines;   // cosets g * eps(point)
  std::vector<Coset> planes;  // cosets g * eps(line)
};

ExpansionGeometry expansion(const GroupEmbedding& e, long max_order = 1L << 20);

// the point-residue of Ex at a group element, as a point-line geometry
// (lines through it vs planes through it); isomorphic to the base geometry
PointLineGeometry expansion_point_residue(const ExpansionGeometry& ex, int g);

struct FarMatch {
  bool ok = false;
  std::string counterexample;
  std::vector<int> point_map;  // far point index -> group element index
  std::vector<int> line_map;   // far line index -> expansion line index
  std::vector<int> plane_map;
};

// Verifies the explicit isomorphism between the truncated far geometry at
// Astar and the expansion of the unipotent representation: the point map
// sends a far flag to the unique u with u(A) = far flag, lines and planes
// follow pointwise, and incidence is checked in both directions.
FarMatch expansion_matches_far(const UnipotentRep& rep, const FarTruncation& far);

}  // namespace bge
