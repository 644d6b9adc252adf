#include "doctest.h"

#include "bge/hull.hpp"
#include "bge/veronese.hpp"

using namespace bge;

TEST_CASE("coset enumeration of tiny presentations") {
  Presentation cyc;
  cyc.ngens = 1;
  cyc.orders = {3};
  cyc.relators = {{1, 1, 1}};
  auto r = todd_coxeter(cyc);
  REQUIRE(r.status == TCStatus::complete);
  CHECK(r.order == 3);

  // infinite dihedral group overflows and reports a high-water mark
  Presentation dih;
  dih.ngens = 2;
  dih.orders = {2, 2};
  dih.relators = {{1, 1}, {2, 2}};
  auto o = todd_coxeter(dih, 64);
  CHECK(o.status == TCStatus::overflowed);
  CHECK(o.high_water > 0);

  Presentation sym;  // S_3 = <a, b | a^2, b^2, (ab)^3>
  sym.ngens = 2;
  sym.orders = {2, 2};
  sym.relators = {{1, 1}, {2, 2}, {1, 2, 1, 2, 1, 2}};
  auto s = todd_coxeter(sym);
  REQUIRE(s.status == TCStatus::complete);
  CHECK(s.order == 6);
  CHECK_FALSE(is_elementary_abelian(s, sym));
}

TEST_CASE("enumeration is deterministic") {
  Presentation sym;
  sym.ngens = 2;
  sym.orders = {2, 2};
  sym.relators = {{1, 1}, {2, 2}, {1, 2, 1, 2, 1, 2}};
  auto a = todd_coxeter(sym);
  auto b = todd_coxeter(sym);
  CHECK(table_hash(a) == table_hash(b));
  CHECK(a.table.entries == b.table.entries);
}

TEST_CASE("presentation of the natural embedding of PG(2,2)") {
  auto nat = natural_embedding(parse_building("A2(2)"));
  auto pres = build_presentation(nat);
  CHECK(pres.ngens == 7);
  // 7 squares + 21 commutators + 7 sum relations
  CHECK(pres.relators.size() == 35);
  auto r = todd_coxeter(pres);
  REQUIRE(r.status == TCStatus::complete);
  CHECK(r.order == 8);  // the natural embedding of a projective space is dominant
  CHECK(is_elementary_abelian(r, pres));
  CHECK(abelian_hull_dim(nat) == 3);
}

TEST_CASE("quadratic Veronesean of PG(2,2): hull order 128") {
  auto v = veronese_quadratic(3, 2);
  CHECK(v.geom.num_points == 7);
  auto pres = build_presentation(v);
  // conic points are linearly independent inside each line image
  CHECK(pres.relators.size() == 7 + 21);
  auto r = todd_coxeter(pres);
  REQUIRE(r.status == TCStatus::complete);
  CHECK(r.order == 128);
  CHECK(is_elementary_abelian(r, pres));
  CHECK(abelian_hull_dim(v) == 7);
  CHECK(cover_degree(r.order, v.codomain->size()) == Rational{2, 1});
}

TEST_CASE("quadratic Veronesean of PG(3,2): abelian hull dimension 15") {
  auto v = veronese_quadratic(4, 2);
  CHECK(v.geom.num_points == 15);
  CHECK(abelian_hull_dim(v) == 15);
}

TEST_CASE("quadratic Veronesean of PG(2,3) is dominant") {
  auto v = veronese_quadratic(3, 3);
  CHECK(v.geom.num_points == 13);
  CHECK(v.codomain->size() == 729);
  auto pres = build_presentation(v);
  // each conic of PG(2,3) has 4 points in a 3-dimensional image: 1 relation
  int linear = 0;
  for (auto& r : pres.relators)
    if (r.size() > 1 && std::all_of(r.begin(), r.end(), [](int s) { return s > 0; }) &&
        !(r.size() == 3 && r[0] == r[1] && r[1] == r[2]))
      ++linear;
  CHECK(linear == 13);
  auto r = todd_coxeter(pres);
  REQUIRE(r.status == TCStatus::complete);
  CHECK(r.order == 729);
  CHECK(cover_degree(r.order, v.codomain->size()) == Rational{1, 1});
}

TEST_CASE("hermitian Veronesean of PG(2,4): hull order 2048") {
  auto v = veronese_hermitian(3, 2);
  CHECK(v.geom.num_points == 21);
  CHECK(v.codomain->size() == 512);
  auto pres = build_presentation(v);
  // per line: 10 commutators and exactly one linear relation among 5 points
  CHECK(pres.relators.size() == 21 + 210 + 21);
  auto r = todd_coxeter(pres);
  REQUIRE(r.status == TCStatus::complete);
  CHECK(r.order == 2048);
  CHECK(is_elementary_abelian(r, pres));
  CHECK(abelian_hull_dim(v) == 11);
  CHECK(cover_degree(r.order, v.codomain->size()) == Rational{4, 1});
}

TEST_CASE("wedge embedding of the line grassmannian: dominant of order 64") {
  auto v = wedge_embedding(4, 2);
  CHECK(v.geom.num_points == 35);
  CHECK(v.geom.lines.size() == 105);
  CHECK(v.codomain->size() == 64);
  auto pres = build_presentation(v);
  auto r = todd_coxeter(pres);
  REQUIRE(r.status == TCStatus::complete);
  CHECK(r.order == 64);
  CHECK(abelian_hull_dim(v) == 6);
  CHECK(cover_degree(r.order, v.codomain->size()) == Rational{1, 1});
}

TEST_CASE("abelian hull dimension bounds the codomain") {
  for (auto v : {veronese_quadratic(3, 2), veronese_hermitian(3, 2), wedge_embedding(4, 2),
                 natural_embedding(parse_building("A2(2)"))}) {
    long c = v.codomain->size();
    int logp = 0;
    int p = *v.prime;
    while (c > 1) {
      c /= p;
      ++logp;
    }
    CHECK(abelian_hull_dim(v) >= logp);
  }
}

TEST_CASE("generating sets bound the abelian hull of locally projective embeddings") {
  // the wedge embedding is projective; its six coordinate points generate
  auto v = wedge_embedding(4, 2);
  auto a3 = parse_building("A3(2)");
  auto sg = shadow_geometry(a3, 2);
  std::set<int> seed;
  const FieldSpec& F = a3->F();
  for (size_t i = 0; i < sg.points.size(); ++i) {
    const PackedMat& m = sg.points[i].elems[0].sub.basis;
    // coordinate lines: both basis vectors are unit vectors
    int units = 0;
    for (int r = 0; r < 2; ++r) {
      Word w = m.r[r];
      int nz = 0, ones = 0;
      for (int c = 0; c < 4; ++c) {
        if (vget(F, w, c)) ++nz;
        if (vget(F, w, c) == 1) ++ones;
      }
      if (nz == 1 && ones == 1) ++units;
    }
    if (units == 2) seed.insert(static_cast<int>(i));
  }
  CHECK(seed.size() == 6);
  CHECK(generated_subspace(v.geom, seed).size() == 35);
  CHECK(abelian_hull_dim(v) <= 6);

  auto nat = natural_embedding(parse_building("A2(2)"));
  // three non-collinear points generate PG(2,2)
  CHECK(abelian_hull_dim(nat) <= 3);
}

TEST_CASE("amalgam file round trip") {
  auto v = veronese_quadratic(3, 2);
  auto pres = build_presentation(v);
  std::string text = amalgam_to_string(pres);
  auto back = amalgam_from_string(text);
  CHECK(back.ngens == pres.ngens);
  CHECK(back.orders == pres.orders);
  CHECK(back.relators == pres.relators);
  auto r1 = todd_coxeter(pres);
  auto r2 = todd_coxeter(back);
  CHECK(table_hash(r1) == table_hash(r2));

  CHECK_THROWS_AS(amalgam_from_string("BOGUS"), contract_violation);
}
