#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bge/gf.hpp"

namespace bge {

// Vectors over F_q (q <= 4) are packed into 16-bit words, entry i in bits
// [i*w, (i+1)*w) with w = bits_per_entry().  All enumeration-heavy code
// (isotropic subspaces, unipotent radicals) runs on these words, so vector
// equality and hashing are single integer comparisons.
using Word = uint16_t;

inline int vget(const FieldSpec& F, Word v, int i) {
  int w = F.bits_per_entry();
  return (v >> (i * w)) & ((1 << w) - 1);
}

inline Word vset(const FieldSpec& F, Word v, int i, int c) {
  int w = F.bits_per_entry();
  Word mask = static_cast<Word>(((1 << w) - 1) << (i * w));
  return static_cast<Word>((v & ~mask) | (static_cast<Word>(c) << (i * w)));
}

Word vadd(const FieldSpec& F, Word a, Word b, int n);
Word vscale(const FieldSpec& F, Word a, int c, int n);
int vdot(const FieldSpec& F, Word a, Word b, int n);
Word vfrob(const FieldSpec& F, Word a, int n);

// Dense packed matrix, at most 8 rows of at most 16 packed entries.
// Rows double as vectors: subspace bases store basis vectors as rows.
struct PackedMat {
  uint8_t rows = 0, cols = 0;
  std::array<Word, 8> r{};

  bool operator==(const PackedMat& o) const {
    if (rows != o.rows || cols != o.cols) return false;
    for (int i = 0; i < rows; ++i)
      if (r[i] != o.r[i]) return false;
    return true;
  }
};

// 128-bit row encoding; doubles as canonical sort key and hash key.
struct Enc128 {
  uint64_t hi = 0, lo = 0;
  friend bool operator==(const Enc128& a, const Enc128& b) {
    return a.hi == b.hi && a.lo == b.lo;
  }
  friend bool operator<(const Enc128& a, const Enc128& b) {
    return a.hi != b.hi ? a.hi < b.hi : a.lo < b.lo;
  }
};

struct Enc128Hash {
  size_t operator()(const Enc128& e) const {
    uint64_t x = e.hi * 0x9e3779b97f4a7c15ULL ^ e.lo;
    x ^= x >> 32;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 32;
    return static_cast<size_t>(x);
  }
};

Enc128 encode(const PackedMat& m);

inline int mget(const FieldSpec& F, const PackedMat& m, int i, int j) {
  return vget(F, m.r[i], j);
}
inline void mset(const FieldSpec& F, PackedMat& m, int i, int j, int c) {
  m.r[i] = vset(F, m.r[i], j, c);
}

PackedMat identity_mat(const FieldSpec& F, int n);
PackedMat mat_mul(const FieldSpec& F, const PackedMat& a, const PackedMat& b);
Word mat_vec(const FieldSpec& F, const PackedMat& a, Word v);  // column action
PackedMat transpose(const FieldSpec& F, const PackedMat& m);
PackedMat conj_transpose(const FieldSpec& F, const PackedMat& m);

// In-place reduction to the canonical reduced row-echelon form.  Zero rows
// are dropped, so two equal row spaces always produce identical matrices.
int rref(const FieldSpec& F, PackedMat& m);

int mat_rank(const FieldSpec& F, PackedMat m);

// Right kernel {v : m v = 0}, returned in canonical RREF.
PackedMat right_kernel(const FieldSpec& F, const PackedMat& m);

std::optional<PackedMat> mat_inverse(const FieldSpec& F, const PackedMat& m);

// Dynamic matrix over a prime field, for relation matrices and
// coordinatizations that exceed the packed 8x16 budget.
struct FpMat {
  int p = 2;
  int rows = 0, cols = 0;
  std::vector<uint8_t> a;

  FpMat() = default;
  FpMat(int p_, int r_, int c_) : p(p_), rows(r_), cols(c_), a(static_cast<size_t>(r_) * c_, 0) {}
  uint8_t& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  uint8_t at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

int fp_rref(FpMat& m);
int fp_rank(FpMat m);
FpMat fp_right_kernel(const FpMat& m);  // rows span {v : m v = 0}, canonical

}  // namespace bge
