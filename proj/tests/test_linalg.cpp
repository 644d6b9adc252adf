#include "doctest.h"

#include <random>

#include "bge/linalg.hpp"

using namespace bge;

namespace {

PackedMat random_mat(const FieldSpec& F, int rows, int cols, std::mt19937& rng) {
  PackedMat m;
  m.rows = static_cast<uint8_t>(rows);
  m.cols = static_cast<uint8_t>(cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) mset(F, m, i, j, static_cast<int>(rng() % F.q()));
  return m;
}

// random invertible row operations applied to m
PackedMat scramble_rows(const FieldSpec& F, PackedMat m, std::mt19937& rng) {
  for (int step = 0; step < 20; ++step) {
    int i = static_cast<int>(rng() % m.rows), j = static_cast<int>(rng() % m.rows);
    int c = static_cast<int>(rng() % (F.q() - 1)) + 1;
    if (i == j)
      m.r[i] = vscale(F, m.r[i], c, m.cols);
    else
      m.r[i] = vadd(F, m.r[i], vscale(F, m.r[j], c, m.cols), m.cols);
  }
  return m;
}

}  // namespace

TEST_CASE("packed vector ops") {
  auto F4 = make_field(2, 2);
  Word v = 0;
  v = vset(*F4, v, 0, 2);
  v = vset(*F4, v, 3, 3);
  CHECK(vget(*F4, v, 0) == 2);
  CHECK(vget(*F4, v, 3) == 3);
  CHECK(vget(*F4, v, 1) == 0);
  Word w = vscale(*F4, v, 2, 4);  // multiply by x
  CHECK(vget(*F4, w, 0) == 3);    // x*x = x+1
  CHECK(vget(*F4, w, 3) == 1);    // x*(x+1) = 1

  auto F3 = make_field(3, 1);
  Word a = vset(*F3, vset(*F3, 0, 0, 2), 1, 1);
  Word b = vset(*F3, vset(*F3, 0, 0, 2), 1, 2);
  Word s = vadd(*F3, a, b, 2);
  CHECK(vget(*F3, s, 0) == 1);
  CHECK(vget(*F3, s, 1) == 0);
}

TEST_CASE("rref canonical under row scrambles") {
  std::mt19937 rng(12345);
  for (auto [p, k] : {std::pair{2, 1}, {3, 1}, {2, 2}}) {
    auto F = make_field(p, k);
    for (int trial = 0; trial < 50; ++trial) {
      PackedMat m = random_mat(*F, 3, 6, rng);
      PackedMat a = m, b = scramble_rows(*F, m, rng);
      int ra = rref(*F, a);
      // row scrambles keep the row space, as long as no scale-by-zero happened
      int rb = rref(*F, b);
      if (ra == 3 && rb == 3) CHECK(a == b);
    }
  }
}

TEST_CASE("kernel and inverse") {
  std::mt19937 rng(999);
  for (auto [p, k] : {std::pair{2, 1}, {3, 1}, {2, 2}}) {
    auto F = make_field(p, k);
    for (int trial = 0; trial < 40; ++trial) {
      PackedMat m = random_mat(*F, 4, 7, rng);
      PackedMat ker = right_kernel(*F, m);
      CHECK(mat_rank(*F, m) + ker.rows == 7);  // rank-nullity
      for (int i = 0; i < ker.rows; ++i) {
        Word img = mat_vec(*F, m, ker.r[i]);
        CHECK(img == 0);
      }
      PackedMat sq = random_mat(*F, 5, 5, rng);
      auto inv = mat_inverse(*F, sq);
      if (inv) {
        PackedMat prod = mat_mul(*F, sq, *inv);
        CHECK(prod == identity_mat(*F, 5));
      } else {
        CHECK(mat_rank(*F, sq) < 5);
      }
    }
  }
}

TEST_CASE("matmul vs matvec") {
  std::mt19937 rng(7);
  auto F = make_field(3, 1);
  PackedMat a = random_mat(*F, 4, 4, rng), b = random_mat(*F, 4, 4, rng);
  PackedMat ab = mat_mul(*F, a, b);
  for (int trial = 0; trial < 10; ++trial) {
    Word v = 0;
    for (int i = 0; i < 4; ++i) v = vset(*F, v, i, static_cast<int>(rng() % 3));
    CHECK(mat_vec(*F, ab, v) == mat_vec(*F, a, mat_vec(*F, b, v)));
  }
}

TEST_CASE("fp matrices") {
  // incidence relations of the Fano plane have 2-rank 4 -> kernel dim 3
  int fano[7][3] = {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}};
  FpMat m(2, 7, 7);
  for (int l = 0; l < 7; ++l)
    for (int j = 0; j < 3; ++j) m.at(l, fano[l][j]) = 1;
  CHECK(fp_rank(m) == 4);
  FpMat ker = fp_right_kernel(m);
  CHECK(ker.rows == 3);
  for (int i = 0; i < ker.rows; ++i)
    for (int l = 0; l < 7; ++l) {
      int s = 0;
      for (int j = 0; j < 7; ++j) s ^= m.at(l, j) & ker.at(i, j);
      CHECK(s == 0);
    }

  FpMat t(3, 2, 2);
  t.at(0, 0) = 1;
  t.at(0, 1) = 2;
  t.at(1, 0) = 2;
  t.at(1, 1) = 1;
  CHECK(fp_rank(t) == 1);
}
