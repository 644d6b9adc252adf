#include "doctest.h"

#include <set>

#include "bge/grouprep.hpp"

using namespace bge;

TEST_CASE("unipotent radical orders across every family") {
  struct Row {
    const char* name;
    long order;
  };
  for (Row r : {Row{"C3(2)", 64}, Row{"C4(2)", 1024}, Row{"B3(3)", 729}, Row{"D4(2)", 64},
                Row{"2A5(2)", 512}, Row{"2D4(2)", 512}}) {
    auto b = parse_building(r.name);
    auto [A, Astar] = b->standard_pair(b->rank());
    auto U = unipotent_radical(b, Astar);
    CHECK(U->size() == r.order);
  }
  auto h7 = parse_building("2A6(2)");
  auto [A7, As7] = h7->standard_pair(3);
  CHECK(unipotent_radical(h7, As7)->size() == 32768);  // q^{n^2 + 2n}
}

TEST_CASE("radical of a point of C3(2) and of a line of A3(2)") {
  auto c3 = parse_building("C3(2)");
  auto [a, astar] = c3->standard_pair(1);
  auto U = unipotent_radical(c3, astar);
  CHECK(U->size() == 32);  // q^{2n-1}
  // the commutator coefficients vanish in characteristic 2
  CHECK(is_abelian(*U));
  CHECK(derived_subgroup(*U).size() == 1);

  // over an odd field the point radical is genuinely nonabelian
  auto c33 = parse_building("C3(3)");
  auto [a3p, astar3p] = c33->standard_pair(1);
  auto U3 = unipotent_radical(c33, astar3p);
  CHECK(U3->size() == 243);
  CHECK_FALSE(is_abelian(*U3));
  CHECK(derived_subgroup(*U3).size() == 3);

  auto a3 = parse_building("A3(2)");
  auto [L, Lstar] = a3->standard_pair(2);
  CHECK(unipotent_radical(a3, Lstar)->size() == 16);

  CHECK_THROWS_AS(unipotent_radical(c3, c3->standard_pair(2).second), unsupported_error);
}

TEST_CASE("radicals at non-standard flags via frames") {
  auto c3 = parse_building("C3(2)");
  const auto& maxes = c3->isotropic(3);
  BuildingFlag As = flag_of(*c3, maxes[77]);
  auto U = unipotent_radical(c3, As);
  CHECK(U->size() == 64);
  for (int i = 0; i < U->size(); ++i) {
    CHECK(c3->preserves_form(U->mat(i)));
    CHECK(apply(*c3, GroupElement{U->mat(i)}, maxes[77]) == maxes[77]);
  }
}

TEST_CASE("the dual polar representation of C3(2)") {
  auto c3 = parse_building("C3(2)");
  auto rep = unipotent_rep(c3, 3);
  CHECK(rep.emb.geom.num_points == 7);
  CHECK(rep.U->size() == 64);
  CHECK(rep.emb.abelian);
  CHECK(rep.emb.prime == 2);
  for (auto& img : rep.emb.point_images) CHECK(img.size() == 2);
  for (auto& img : rep.emb.line_images) CHECK(img.size() == 8);

  // the three point images on a line are in general position inside it
  for (size_t l = 0; l < rep.emb.line_images.size(); ++l) {
    std::vector<int> two;
    const auto& pts = rep.emb.geom.lines[l];
    REQUIRE(pts.size() == 3);
    for (int i = 0; i < 2; ++i)
      for (int g : rep.emb.point_images[pts[i]]) two.push_back(g);
    auto span2 = subgroup_closure(*rep.U, two);
    CHECK(span2.size() == 4);
    int g3 = rep.emb.point_images[pts[2]][1];
    CHECK_FALSE(std::binary_search(span2.begin(), span2.end(), g3));
  }

  CHECK(check_axioms(rep.emb).pass());
  auto sharp = sharp_transitivity_check(rep);
  CHECK(sharp.pass());
  CHECK(sharp.op_count == 64);
  CHECK(sharp.u_order == 64);
}

TEST_CASE("hermitian representation of 2A5(2): caps in line images") {
  auto h = parse_building("2A5(2)");
  auto rep = unipotent_rep(h, 3);
  CHECK(rep.emb.geom.num_points == 21);
  CHECK(rep.U->size() == 512);
  CHECK(rep.emb.abelian);
  for (auto& img : rep.emb.point_images) CHECK(img.size() == 2);
  for (auto& img : rep.emb.line_images) CHECK(img.size() == 16);
  // each line image contains exactly its 5 point images, no 3 coplanar
  for (size_t l = 0; l < rep.emb.line_images.size(); ++l) {
    const auto& pts = rep.emb.geom.lines[l];
    REQUIRE(pts.size() == 5);
    std::set<int> gens;
    for (int p : pts) gens.insert(rep.emb.point_images[p][1]);
    int count = 0;
    for (size_t p2 = 0; p2 < rep.emb.point_images.size(); ++p2)
      if (std::includes(rep.emb.line_images[l].begin(), rep.emb.line_images[l].end(),
                        rep.emb.point_images[p2].begin(), rep.emb.point_images[p2].end()))
        ++count;
    CHECK(count == 5);
    for (int a : gens)
      for (int b : gens)
        if (a < b)
          for (int c : gens)
            if (b < c) {
              auto span = subgroup_closure(*rep.U, {a, b});
              CHECK_FALSE(std::binary_search(span.begin(), span.end(), c));
            }
  }
  CHECK(check_axioms(rep.emb).pass());
}

TEST_CASE("axioms pass for the other in-scope representations") {
  for (auto [name, j] : {std::pair{"D4(2)", 4}, {"A3(2)", 2}, {"B3(3)", 3}, {"2D4(2)", 3}}) {
    auto b = parse_building(name);
    auto rep = unipotent_rep(b, j);
    CAPTURE(name);
    CHECK(check_axioms(rep.emb).pass());
  }
}

TEST_CASE("E1 failure carries a witness") {
  auto c3 = parse_building("C3(2)");
  auto rep = unipotent_rep(c3, 3);
  GroupEmbedding bad = rep.emb;
  bad.point_images[1] = bad.point_images[0];
  auto r = check_axioms(bad);
  CHECK_FALSE(r.pass());
  bool found = false;
  for (auto& c : r.checks)
    if (!c.pass && c.axiom.substr(0, 2) == "E1") {
      CHECK(c.witness.find("0,1") != std::string::npos);
      found = true;
    }
  CHECK(found);
}

TEST_CASE("corrupted radical fails the sharp transitivity check") {
  auto c3 = parse_building("C3(2)");
  auto rep = unipotent_rep(c3, 3);
  std::vector<PackedMat> mats;
  for (int i = 0; i < rep.U->size() - 1; ++i) mats.push_back(rep.U->mat(i));
  UnipotentRep bad = rep;
  bad.U = std::make_shared<MatrixGroup>(c3, mats, std::vector<PackedMat>{});
  auto r = sharp_transitivity_check(bad);
  CHECK_FALSE(r.orbit_regular);
  CHECK_FALSE(r.failure.empty());
}

TEST_CASE("quotients: trivial subgroup and the subgroup W of B3(3)") {
  auto c3 = parse_building("C3(2)");
  auto rep = unipotent_rep(c3, 3);
  auto triv = quotient_check(rep.emb, {rep.U->identity()});
  CHECK(triv.defines_quotient());
  REQUIRE(triv.quotient.has_value());
  CHECK(triv.quotient->codomain->size() == 64);
  CHECK(check_axioms(*triv.quotient).pass());

  auto b3 = parse_building("B3(3)");
  auto rep3 = unipotent_rep(b3, 3);
  CHECK(rep3.U->size() == 729);
  CHECK_FALSE(rep3.emb.abelian);
  auto W = tail_fixing_subgroup(rep3);
  CHECK(W.size() == 27);
  auto der = derived_subgroup(*rep3.U);
  CHECK(der == W);  // in odd characteristic the derived subgroup is W
  auto qc = quotient_check(rep3.emb, W);
  CHECK_FALSE(qc.q1);
  CHECK(qc.q1_witness.find("line") != std::string::npos);
  CHECK_FALSE(qc.defines_quotient());
}

TEST_CASE("abelianization of the 2A6(2) representation") {
  auto h = parse_building("2A6(2)");
  auto rep = unipotent_rep(h, 3);
  CHECK(rep.U->size() == 32768);
  CHECK_FALSE(rep.emb.abelian);
  auto ab = abelianization_check(rep);
  CHECK(ab.derived_order == 512);               // V(n^2, F_2)
  CHECK(32768 / ab.derived_order == 64);        // V(n, F_4)
  CHECK(ab.b3);
  CHECK_FALSE(ab.b1);  // the derived subgroup does not define a quotient here
}

TEST_CASE("abelianization of C3(2) is the representation itself") {
  auto c3 = parse_building("C3(2)");
  auto rep = unipotent_rep(c3, 3);
  auto ab = abelianization_check(rep);
  CHECK(ab.derived_order == 1);
  CHECK(ab.b1);
  CHECK(ab.b2);
  CHECK(ab.b3);
  CHECK_FALSE(ab.b4);  // line images are 3-dimensional, not projective
  REQUIRE(ab.abelianization.has_value());
  CHECK(ab.abelianization->codomain->size() == 64);
}

TEST_CASE("restriction of C4(2) to a point residue is the C3(2) representation") {
  auto c4 = parse_building("C4(2)");
  auto rep4 = unipotent_rep(c4, 4);
  CHECK(rep4.U->size() == 1024);
  CHECK(rep4.emb.geom.num_points == 15);

  Subspace pt = subspaces_of(c4->F(), rep4.A.elems[0].sub, 1)[0];
  BuildingFlag F{{FlagElem{1, pt}}};
  auto res = restrict_embedding(rep4, F);
  CHECK_FALSE(res.identity);
  CHECK(res.emb.codomain->size() == 64);
  CHECK(res.equals_flag_stabilizer);
  CHECK(res.emb.geom.num_points == 7);
  CHECK(check_axioms(res.emb).pass());

  auto rep3 = unipotent_rep(parse_building("C3(2)"), 3);
  auto iso = embedding_isomorphism(res.emb, rep3.emb);
  REQUIRE(iso.has_value());
  CHECK(iso->group_map.size() == 64);

  // restriction by the empty flag is the identity restriction
  auto idres = restrict_embedding(rep4, BuildingFlag{});
  CHECK(idres.identity);
  CHECK(idres.emb.codomain->size() == 1024);

  // too small a residue is rejected
  auto rep3b = unipotent_rep(parse_building("C3(2)"), 3);
  Subspace pt3 = subspaces_of(parse_building("C3(2)")->F(), rep3b.A.elems[0].sub, 1)[0];
  CHECK_THROWS_AS(restrict_embedding(rep3b, BuildingFlag{{FlagElem{1, pt3}}}), unsupported_error);
}

TEST_CASE("embedding isomorphism rejects mismatched geometries") {
  auto c3 = parse_building("C3(2)");
  auto d4 = parse_building("D4(2)");
  auto r1 = unipotent_rep(c3, 3);
  auto r2 = unipotent_rep(d4, 4);
  CHECK_FALSE(embedding_isomorphism(r1.emb, r2.emb).has_value());
}

TEST_CASE("abelian coordinates") {
  auto c3 = parse_building("C3(2)");
  auto rep = unipotent_rep(c3, 3);
  auto coords = abelian_coordinates(*rep.U);
  REQUIRE(coords.has_value());
  CHECK(coords->cols == 6);
  CHECK(coords->rows == 64);
  // coordinates turn multiplication into addition
  for (int a = 0; a < 64; a += 7)
    for (int b = 0; b < 64; b += 11) {
      int c = rep.U->mult(a, b);
      for (int i = 0; i < 6; ++i)
        CHECK((coords->at(a, i) + coords->at(b, i)) % 2 == coords->at(c, i));
    }

  AdditiveGroup add(3, 4);
  CHECK(add.size() == 81);
  CHECK(add.mult(add.from_digits({1, 2, 0, 1}), add.from_digits({2, 2, 1, 0})) ==
        add.from_digits({0, 1, 1, 1}));
  CHECK(is_elementary_abelian_group(add, 3));
}
