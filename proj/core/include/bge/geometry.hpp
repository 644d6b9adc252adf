#pragma once

#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bge/errors.hpp"

namespace bge {

// A point-line geometry: indexed points, lines as sorted point-index lists.
// The validity axioms are deliberately restrictive: every line has >= 2
// points, every point lies on >= 2 lines, two lines share at most one
// point, and the collinearity graph is connected.
struct PointLineGeometry {
  int num_points = 0;
  std::vector<std::vector<int>> lines;

  // collinearity adjacency, built on demand
  const std::vector<std::vector<int>>& adjacency() const;

  bool collinear(int a, int b) const;
  int line_through(int a, int b) const;  // -1 if none

 private:
  mutable std::vector<std::vector<int>> adj_;
};

struct AxiomCheck {
  std::string axiom;
  bool pass = true;
  std::string witness;
};

struct GeometryReport {
  std::vector<AxiomCheck> checks;
  bool pass() const {
    for (auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

GeometryReport validate_geometry(const PointLineGeometry& g);

// Least subspace containing `seed`, by the closure iteration that repeatedly
// adjoins every line meeting the current set in at least two points.
std::set<int> generated_subspace(const PointLineGeometry& g, const std::set<int>& seed);

bool is_subspace(const PointLineGeometry& g, const std::set<int>& s);
bool is_hyperplane(const PointLineGeometry& g, const std::set<int>& h);

struct SpanningStructures {
  std::vector<int> bfs_parent;  // -1 for roots
  int components = 0;
  int diameter = 0;  // of the largest component
};

// Deterministic BFS from point 0 in index order.
SpanningStructures spanning_structures(const PointLineGeometry& g);

nlohmann::ordered_json geometry_to_json(const PointLineGeometry& g);
PointLineGeometry geometry_from_json(const nlohmann::json& j);

// Deterministic isomorphism search between small geometries; returns the
// image-of-point map, or empty if none exists.
std::vector<int> find_geometry_isomorphism(const PointLineGeometry& a, const PointLineGeometry& b);

}  // namespace bge
