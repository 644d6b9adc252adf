#pragma once

#include "bge/formspace.hpp"
#include "bge/geometry.hpp"

namespace bge {

// Machinery for singleton-J shadow geometries.  The type of a shadow is
// 1 + |D_X|, where D_X is the connected subgraph of the diagram (minus the
// minimal flag's types) containing j; the minimal flag of a type-k shadow
// has the neighborhood of D_X as its type set.  Only types <= 3 are built:
// points, lines and planes are all the downstream constructions consume.

// minimal-flag type sets for shadow elements of types 2 and 3
std::vector<int> shadow_line_cotype(const BuildingModel& b, int j);
// one kind of plane per diagram neighbor j2 of j
struct PlaneKind {
  int j2 = 0;
  std::vector<int> cotype;
};
std::vector<PlaneKind> shadow_plane_kinds(const BuildingModel& b, int j);

bool flags_compatible(const BuildingModel& b, const BuildingFlag& f, const BuildingFlag& g);

// all flags with the given sorted type set, optionally constrained to be
// incident with `base` (base's own elements are not part of the result)
std::vector<BuildingFlag> flags_of_types(const BuildingModel& b, const std::vector<int>& types,
                                         const BuildingFlag* base = nullptr);

struct ShadowElem {
  int shadow_type = 2;        // 2 = line, 3 = plane
  BuildingFlag minimal_flag;  // F_X
  std::vector<int> points;    // sorted indices into the point list
};

struct ShadowGeometry {
  Building building;
  int j = 0;
  std::vector<BuildingFlag> points;  // the J-flags, canonical order
  std::vector<ShadowElem> lines;
  std::vector<ShadowElem> planes;

  int point_index(const BuildingFlag& p) const;
};

ShadowGeometry shadow_geometry(const Building& b, int j);

// The local geometry at a point A of Delta_J: points and lines are the
// lines and planes of Delta_J through A.
struct LocalGeometry {
  Building building;
  int j = 0;
  BuildingFlag A;
  PointLineGeometry geom;
  std::vector<BuildingFlag> point_flags;  // minimal flags F_X per local point
  std::vector<BuildingFlag> line_flags;   // per local line
  std::vector<int> line_second_type;      // the diagram neighbor j2 the line came from
};

LocalGeometry local_geometry(const Building& b, int j, const BuildingFlag& A);
LocalGeometry local_geometry(const ShadowGeometry& sg, const BuildingFlag& A);

// Residual-connectedness condition on the residue parameters: for i in J
// and any other type t, the triple (gonality, s_i, s_t) must avoid
// (6,2,2) and (8,2,4); pairs inside J cannot occur for singleton J.
bool star_condition(const BuildingModel& b, int j);

struct FarTruncation {
  Building building;
  int j = 0;
  BuildingFlag Astar;
  bool star_ok = true;                // false attaches a warning, not an error
  std::vector<BuildingFlag> points;   // flags opposite Astar, canonical order
  std::vector<ShadowElem> lines;      // shadows of type 2 cut down to op(A*)
  std::vector<ShadowElem> planes;

  int point_index(const BuildingFlag& p) const;
};

FarTruncation far_truncation(const Building& b, int j, const BuildingFlag& Astar);

}  // namespace bge
