#include "doctest.h"

#include <random>

#include "bge/formspace.hpp"

using namespace bge;

TEST_CASE("isotropic subspace counts match the product-formula oracles") {
  auto c3 = parse_building("C3(2)");
  // oracle: prod_{i=1..3} (2^i + 1) maximal isotropics in Sp(6,2)
  long oracle = (2 + 1) * (4 + 1) * (8 + 1);
  CHECK(oracle == 135);
  CHECK(c3->isotropic(3).size() == 135);
  CHECK(c3->isotropic(1).size() == 63);
  CHECK(c3->isotropic(2).size() == 315);
  CHECK(c3->isotropic(0).size() == 1);
  CHECK(c3->isotropic(0)[0].dim() == 0);
  CHECK(c3->isotropic(4).empty());  // beyond the Witt index: empty, not an error

  auto h = parse_building("2A5(2)");
  long horacle = (2 + 1) * (8 + 1) * (32 + 1);
  CHECK(horacle == 891);
  CHECK(h->isotropic(3).size() == 891);

  auto c4 = parse_building("C4(2)");
  CHECK(c4->isotropic(4).size() == 3 * 5 * 9 * 17);

  auto b3 = parse_building("B3(3)");
  CHECK(b3->isotropic(3).size() == 4 * 10 * 28);  // prod (3^i + 1)

  auto d4 = parse_building("D4(2)");
  CHECK(d4->isotropic(1).size() == 135);  // (2^3+1)(2^4-1) singular points
  CHECK(d4->isotropic(4).size() == 270);
}

TEST_CASE("canonical bases survive random row operations") {
  std::mt19937 rng(4242);
  auto c3 = parse_building("C3(2)");
  const FieldSpec& F = c3->F();
  for (const auto& s : c3->isotropic(3)) {
    PackedMat m = s.basis;
    for (int step = 0; step < 12; ++step) {
      int i = static_cast<int>(rng() % m.rows), j = static_cast<int>(rng() % m.rows);
      if (i != j) m.r[i] = vadd(F, m.r[i], m.r[j], m.cols);
    }
    CHECK(make_subspace(F, m) == s);
  }
}

TEST_CASE("opposition in C3(2)") {
  auto c3 = parse_building("C3(2)");
  auto [A, Astar] = c3->standard_pair(3);
  CHECK(c3->is_opposite(A, Astar));
  CHECK_FALSE(c3->is_opposite(A, A));  // A meets itself

  int count = 0;
  for (const auto& m : c3->isotropic(3)) {
    BuildingFlag f = flag_of(*c3, m);
    if (c3->is_opposite(f, Astar)) ++count;
  }
  CHECK(count == 64);  // |U| = 2^6 by sharp transitivity

  // opposition count is independent of the choice of the base flag
  for (int idx : {0, 17, 99}) {
    BuildingFlag g = flag_of(*c3, c3->isotropic(3)[idx]);
    int c = 0;
    for (const auto& m : c3->isotropic(3))
      if (c3->is_opposite(flag_of(*c3, m), g)) ++c;
    CHECK(c == 64);
  }
}

TEST_CASE("opposition in A3(2): point vs plane") {
  auto a3 = parse_building("A3(2)");
  CHECK(a3->opposite_type(1) == 3);
  CHECK(a3->opposite_type(2) == 2);
  const auto& points = a3->isotropic(1);
  const auto& planes = a3->isotropic(3);
  CHECK(points.size() == 15);
  CHECK(planes.size() == 15);
  const FieldSpec& F = a3->F();
  for (const auto& p : points)
    for (const auto& H : planes) {
      bool inside = contains(F, H, p);
      bool opp = a3->is_opposite(flag_of(*a3, p), flag_of(*a3, H));
      CHECK(opp == !inside);
    }
  // lines opposite a line = skew lines: 16 of them
  auto [L, Lstar] = a3->standard_pair(2);
  int skew = 0;
  for (const auto& l : a3->isotropic(2))
    if (a3->is_opposite(flag_of(*a3, l), Lstar)) ++skew;
  CHECK(skew == 16);

  CHECK_THROWS_AS(a3->is_opposite(flag_of(*a3, points[0]), flag_of(*a3, points[1])),
                  contract_violation);
}

TEST_CASE("oriflamme classes in D4(2)") {
  auto d4 = parse_building("D4(2)");
  const auto& maximals = d4->isotropic(4);
  int plus = 0, minus = 0;
  for (const auto& m : maximals) (d4->type_d_class(m) == '+' ? plus : minus)++;
  CHECK(plus == 135);
  CHECK(minus == 135);

  Subspace ref = d4->e_block(4);
  CHECK(d4->type_d_class(ref) == '+');
  // a maximal meeting the reference in dimension 3 sits in the other class
  for (const auto& m : maximals)
    if (intersection_dim(d4->F(), m, ref) == 3) {
      CHECK(d4->type_d_class(m) == '-');
      break;
    }
  CHECK_THROWS_AS(d4->type_d_class(d4->isotropic(2)[0]), contract_violation);

  // incidence between the two classes: codimension-1 intersection
  auto [A, Astar] = d4->standard_pair(4);
  CHECK(d4->element_type(A.elems[0].sub) == 4);
  CHECK(d4->is_opposite(A, Astar));
  int opp = 0;
  for (const auto& m : d4->elements_of_type(4))
    if (d4->is_opposite(flag_of(*d4, m), Astar)) ++opp;
  CHECK(opp == 64);  // 2^{n(n-1)/2}
}

TEST_CASE("apply is a form-compatible group action") {
  std::mt19937 rng(5150);
  auto c3 = parse_building("C3(2)");
  const FieldSpec& F = c3->F();
  const auto& maxes = c3->isotropic(3);

  // adapted frames give honest form-preserving elements to act with
  auto [A, Astar] = c3->standard_pair(3);
  GroupElement g1{c3->adapted_frame(maxes[40], maxes[7])};
  GroupElement g2{c3->adapted_frame(maxes[100], maxes[3])};
  REQUIRE(c3->preserves_form(g1.m));
  REQUIRE(c3->preserves_form(g2.m));

  GroupElement id{identity_mat(F, c3->dim())};
  GroupElement g12{mat_mul(F, g1.m, g2.m)};
  for (int idx = 0; idx < 135; idx += 13) {
    const Subspace& s = maxes[idx];
    CHECK(apply(*c3, id, s) == s);
    CHECK(c3->totally_singular(apply(*c3, g1, s).basis));
    CHECK(apply(*c3, g12, s) == apply(*c3, g1, apply(*c3, g2, s)));
  }

  // frames carry the standard pair onto the requested one
  CHECK(apply(*c3, g1, A.elems[0].sub) == maxes[40]);
  CHECK(apply(*c3, g1, Astar.elems[0].sub) == maxes[7]);
}

TEST_CASE("adapted frames exist for every opposite pair, all families") {
  for (const char* name : {"C3(2)", "B3(3)", "D4(2)", "2A5(2)", "2D4(2)"}) {
    auto b = parse_building(name);
    auto [A, Astar] = b->standard_pair(b->rank());
    const auto& maxes = b->isotropic(b->witt());
    int checked = 0;
    for (size_t i = 0; i < maxes.size() && checked < 5; i += maxes.size() / 5 + 1) {
      const Subspace& m = maxes[i];
      if (intersection_dim(b->F(), m, Astar.elems[0].sub) != 0) continue;
      PackedMat T = b->adapted_frame(m, Astar.elems[0].sub);
      CHECK(b->preserves_form(T));
      CHECK(apply(*b, GroupElement{T}, b->e_block(b->witt())) == m);
      ++checked;
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("subspaces_of enumerates the grassmannian of a small space") {
  auto a3 = parse_building("A3(2)");
  Subspace whole = a3->e_block(4);  // the whole 4-space
  CHECK(subspaces_of(a3->F(), whole, 2).size() == 35);
  CHECK(subspaces_of(a3->F(), whole, 1).size() == 15);
  CHECK(subspaces_of(a3->F(), whole, 0).size() == 1);
  CHECK(subspaces_of(a3->F(), whole, 5).empty());
}

TEST_CASE("perp is an involution on subspaces") {
  auto c3 = parse_building("C3(2)");
  for (int k : {1, 2, 3})
    for (size_t i = 0; i < c3->isotropic(k).size(); i += 29) {
      const Subspace& s = c3->isotropic(k)[i];
      Subspace p = c3->perp(s);
      CHECK(p.dim() == 6 - k);
      CHECK(c3->perp(p) == s);
      CHECK(contains(c3->F(), p, s));  // totally isotropic
    }
}

TEST_CASE("building name parsing") {
  CHECK(parse_building("C3(2)")->rank() == 3);
  CHECK(parse_building("2A5(2)")->dim() == 6);
  CHECK(parse_building("2A6(2)")->dim() == 7);
  CHECK(parse_building("2A6(2)")->witt() == 3);
  CHECK(parse_building("2D4(2)")->dim() == 8);
  CHECK(parse_building("2D4(2)")->rank() == 3);
  CHECK_THROWS_AS(parse_building("E8(2)"), error);
  CHECK_THROWS_AS(parse_building("C3"), contract_violation);
  CHECK_THROWS_AS(parse_building("B3(2)"), unsupported_error);
}
