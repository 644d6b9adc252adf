#include "doctest.h"

#include "bge/gf.hpp"

using namespace bge;

TEST_CASE("pinned moduli and basic arithmetic") {
  auto F4 = make_field(2, 2);
  CHECK(F4->modulus() == std::pair<int, int>(1, 1));  // x^2 + x + 1
  // x * (x+1) = x^2 + x = 1
  int x = 2, x1 = 3;
  CHECK(F4->mul(x, x1) == 1);

  auto F3 = make_field(3, 1);
  CHECK(F3->inv(2) == 2);

  auto F2 = make_field(2, 1);
  CHECK(F2->add(1, 1) == 0);

  auto F9 = make_field(3, 2);
  CHECK(F9->modulus() == std::pair<int, int>(1, 0));  // x^2 + 1
}

TEST_CASE("frobenius") {
  auto F4 = make_field(2, 2);
  CHECK(F4->frobenius(2) == 3);  // x -> x+1
  CHECK(F4->frobenius(1) == 1);

  auto F9 = make_field(3, 2);
  // x^3 = x * x^2 = -x = 2x, code of x is 3, code of 2x is 6
  CHECK(F9->frobenius(3) == 6);

  auto F2 = make_field(2, 1);
  CHECK_THROWS_AS(F2->frobenius(1), unsupported_error);
}

TEST_CASE("field axioms hold exhaustively for every field in scope") {
  for (auto [p, k] : {std::pair{2, 1}, {3, 1}, {2, 2}, {3, 2}}) {
    auto F = make_field(p, k);
    int q = F->q();
    for (int a = 0; a < q; ++a) {
      CHECK(F->add(a, 0) == a);
      CHECK(F->mul(a, 1) == a);
      CHECK(F->add(a, F->neg(a)) == 0);
      if (a != 0) CHECK(F->mul(a, F->inv(a)) == 1);
      for (int b = 0; b < q; ++b) {
        CHECK(F->add(a, b) == F->add(b, a));
        CHECK(F->mul(a, b) == F->mul(b, a));
        for (int c = 0; c < q; ++c) {
          CHECK(F->add(F->add(a, b), c) == F->add(a, F->add(b, c)));
          CHECK(F->mul(F->mul(a, b), c) == F->mul(a, F->mul(b, c)));
          CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
        }
      }
    }
    if (k == 2) {
      int fixed = 0;
      for (int a = 0; a < q; ++a) {
        CHECK(F->frobenius(F->frobenius(a)) == a);
        if (F->frobenius(a) == a) ++fixed;
        // frobenius is a field automorphism
        for (int b = 0; b < q; ++b) {
          CHECK(F->frobenius(F->add(a, b)) == F->add(F->frobenius(a), F->frobenius(b)));
          CHECK(F->frobenius(F->mul(a, b)) == F->mul(F->frobenius(a), F->frobenius(b)));
        }
      }
      CHECK(fixed == p);
    }
  }
}

TEST_CASE("errors") {
  auto F3 = make_field(3, 1);
  CHECK_THROWS_AS(F3->inv(0), math_domain_error);
  CHECK_THROWS_AS(make_field(4, 1), contract_violation);
  CHECK_THROWS_AS(make_field(2, 3), unsupported_error);
}

TEST_CASE("element literals") {
  auto [F, e] = parse_fq_literal("2^2:1,1");
  CHECK(F->q() == 4);
  CHECK(e.code == 3);  // x + 1
  CHECK(F->literal(e.code) == "2^2:1,1");

  auto [F3, e3] = parse_fq_literal("3^1:2");
  CHECK(e3.code == 2);
  CHECK(F3->literal(2) == "3^1:2");

  auto a = FqElement{2, F.get()}, b = FqElement{3, F.get()};
  CHECK(field_arith(a, b, FieldOp::mul).code == 1);
  CHECK(field_arith(a, a, FieldOp::add).code == 0);
  CHECK(frobenius(a).code == 3);
  CHECK_THROWS_AS(parse_fq_literal("nonsense"), contract_violation);
}
