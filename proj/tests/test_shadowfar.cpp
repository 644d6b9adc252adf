#include "doctest.h"

#include <algorithm>
#include <set>

#include "bge/shadowfar.hpp"

using namespace bge;

namespace {

bool subset(const std::vector<int>& small, const std::vector<int>& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

TEST_CASE("dual polar shadow geometry of C3(2)") {
  auto c3 = parse_building("C3(2)");
  auto sg = shadow_geometry(c3, 3);
  CHECK(sg.points.size() == 135);
  CHECK(sg.lines.size() == 315);   // 2-dim isotropics
  CHECK(sg.planes.size() == 63);   // isotropic points of the symplectic space

  // every line has q+1 = 3 points, every plane q^2+q+1 = 7
  for (auto& l : sg.lines) CHECK(l.points.size() == 3);
  for (auto& p : sg.planes) CHECK(p.points.size() == 15);

  // containment of shadows agrees with compatibility of the minimal flags
  for (auto& l : sg.lines)
    for (auto& p : sg.planes) {
      bool by_points = subset(l.points, p.points);
      bool by_flags = true;
      for (auto& e : l.minimal_flag.elems)
        for (auto& h : p.minimal_flag.elems)
          if (!c3->incident(e, h)) by_flags = false;
      CHECK(by_points == by_flags);
    }
}

TEST_CASE("line grassmannian shadow geometry of A3(2)") {
  auto a3 = parse_building("A3(2)");
  auto sg = shadow_geometry(a3, 2);
  CHECK(sg.points.size() == 35);  // gaussian binomial [4 2]_2
  CHECK(sg.lines.size() == 105);  // point-plane flags
  CHECK(sg.planes.size() == 30);  // two families: 15 points + 15 planes
  for (auto& l : sg.lines) CHECK(l.points.size() == 3);
  for (auto& p : sg.planes) CHECK(p.points.size() == 7);
}

TEST_CASE("local geometries have the expected isomorphism types") {
  auto c3 = parse_building("C3(2)");
  auto sgc = shadow_geometry(c3, 3);
  auto [A, Astar] = c3->standard_pair(3);
  auto lg = local_geometry(sgc, A);
  CHECK(lg.geom.num_points == 7);
  CHECK(lg.geom.lines.size() == 7);
  CHECK(validate_geometry(lg.geom).pass());
  PointLineGeometry fano;
  fano.num_points = 7;
  fano.lines = {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}};
  CHECK_FALSE(find_geometry_isomorphism(lg.geom, fano).empty());

  auto a3 = parse_building("A3(2)");
  auto [L, Lstar] = a3->standard_pair(2);
  auto lga = local_geometry(a3, 2, L);
  CHECK(lga.geom.num_points == 9);
  CHECK(lga.geom.lines.size() == 6);
  PointLineGeometry grid;
  grid.num_points = 9;
  grid.lines = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}, {0, 3, 6}, {1, 4, 7}, {2, 5, 8}};
  CHECK_FALSE(find_geometry_isomorphism(lga.geom, grid).empty());

  auto d4 = parse_building("D4(2)");
  auto [M, Mstar] = d4->standard_pair(4);
  auto lgd = local_geometry(d4, 4, M);
  CHECK(lgd.geom.num_points == 35);
  CHECK(lgd.geom.lines.size() == 105);
  CHECK(validate_geometry(lgd.geom).pass());
  // the line grassmannian of PG(3,2) again
  auto sga = shadow_geometry(a3, 2);
  PointLineGeometry gr;
  gr.num_points = 35;
  for (auto& l : sga.lines) gr.lines.push_back(l.points);
  CHECK_FALSE(find_geometry_isomorphism(lgd.geom, gr).empty());
}

TEST_CASE("local geometry type does not depend on the base point") {
  auto c3 = parse_building("C3(2)");
  auto sg = shadow_geometry(c3, 3);
  auto first = local_geometry(c3, 3, sg.points[0]);
  for (size_t i = 1; i < sg.points.size(); ++i) {
    auto lg = local_geometry(c3, 3, sg.points[i]);
    CHECK_FALSE(find_geometry_isomorphism(first.geom, lg.geom).empty());
  }

  auto a3 = parse_building("A3(2)");
  auto sga = shadow_geometry(a3, 2);
  auto firsta = local_geometry(a3, 2, sga.points[0]);
  for (size_t i = 1; i < sga.points.size(); ++i) {
    auto lg = local_geometry(a3, 2, sga.points[i]);
    CHECK_FALSE(find_geometry_isomorphism(firsta.geom, lg.geom).empty());
  }
}

TEST_CASE("two local points meet exactly in the base point") {
  auto c3 = parse_building("C3(2)");
  auto sg = shadow_geometry(c3, 3);
  auto A = sg.points[17];
  auto lg = local_geometry(sg, A);
  int ai = sg.point_index(A);
  // local points are lines of Delta_J through A; compare their full shadows
  std::vector<std::vector<int>> shadows;
  for (auto& pf : lg.point_flags) {
    for (auto& l : sg.lines)
      if (l.minimal_flag == pf) shadows.push_back(l.points);
  }
  REQUIRE(shadows.size() == lg.point_flags.size());
  for (size_t i = 0; i < shadows.size(); ++i)
    for (size_t j = i + 1; j < shadows.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(shadows[i].begin(), shadows[i].end(), shadows[j].begin(),
                            shadows[j].end(), std::back_inserter(common));
      CHECK(common == std::vector<int>{ai});
    }
}

TEST_CASE("star condition holds for the in-scope pairs") {
  CHECK(star_condition(*parse_building("C3(2)"), 3));
  CHECK(star_condition(*parse_building("2A5(2)"), 3));
  CHECK(star_condition(*parse_building("A3(2)"), 2));
  CHECK(star_condition(*parse_building("D4(2)"), 4));
  CHECK(star_condition(*parse_building("B3(3)"), 3));
  CHECK(star_condition(*parse_building("2A6(2)"), 3));
  CHECK(star_condition(*parse_building("2D4(2)"), 3));
}

TEST_CASE("far truncation of C3(2)") {
  auto c3 = parse_building("C3(2)");
  auto [A, Astar] = c3->standard_pair(3);
  auto far = far_truncation(c3, 3, Astar);
  CHECK(far.star_ok);
  CHECK(far.points.size() == 64);
  for (auto& l : far.lines) CHECK(l.points.size() == 2);
  // double count incidences: sum of line sizes = (flags of the line cotype
  // incident to each far point) summed over far points
  size_t incid = 0;
  for (auto& l : far.lines) incid += l.points.size();
  size_t cross = 0;
  for (auto& p : far.points)
    cross += flags_of_types(*c3, shadow_line_cotype(*c3, 3), &p).size();
  CHECK(incid == cross);
  CHECK(far.lines.size() == 224);
}

TEST_CASE("far truncation of A3(2) at a line: skew lines") {
  auto a3 = parse_building("A3(2)");
  auto [L, Lstar] = a3->standard_pair(2);
  auto far = far_truncation(a3, 2, Lstar);
  CHECK(far.points.size() == 16);
}

TEST_CASE("far truncation of 2A5(2)") {
  auto h = parse_building("2A5(2)");
  auto [A, Astar] = h->standard_pair(3);
  auto far = far_truncation(h, 3, Astar);
  CHECK(far.points.size() == 512);
}

TEST_CASE("far point count does not depend on the choice of Astar") {
  auto c3 = parse_building("C3(2)");
  const auto& maxes = c3->isotropic(3);
  std::set<size_t> counts;
  for (size_t i = 0; i < maxes.size(); i += 11) {
    BuildingFlag As = flag_of(*c3, maxes[i]);
    size_t n = 0;
    for (const auto& m : maxes)
      if (c3->is_opposite(flag_of(*c3, m), As)) ++n;
    counts.insert(n);
  }
  CHECK(counts == std::set<size_t>{64});
}
