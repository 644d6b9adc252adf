#include "bge/linalg.hpp"

namespace bge {

Word vadd(const FieldSpec& F, Word a, Word b, int n) {
  if (F.p() == 2) return a ^ b;  // char 2: componentwise xor in both packings
  Word r = 0;
  for (int i = 0; i < n; ++i) r = vset(F, r, i, F.add(vget(F, a, i), vget(F, b, i)));
  return r;
}

Word vscale(const FieldSpec& F, Word a, int c, int n) {
  if (c == 0) return 0;
  if (c == 1) return a;
  Word r = 0;
  for (int i = 0; i < n; ++i) r = vset(F, r, i, F.mul(vget(F, a, i), c));
  return r;
}

int vdot(const FieldSpec& F, Word a, Word b, int n) {
  int s = 0;
  for (int i = 0; i < n; ++i) s = F.add(s, F.mul(vget(F, a, i), vget(F, b, i)));
  return s;
}

Word vfrob(const FieldSpec& F, Word a, int n) {
  Word r = 0;
  for (int i = 0; i < n; ++i) r = vset(F, r, i, F.frobenius(vget(F, a, i)));
  return r;
}

Enc128 encode(const PackedMat& m) {
  // rows are nonzero in every canonical basis and group matrix, so the raw
  // 8x16-bit row image is collision-free across row counts
  Enc128 e;
  for (int i = 0; i < m.rows && i < 4; ++i)
    e.lo |= static_cast<uint64_t>(m.r[i]) << (16 * i);
  for (int i = 4; i < m.rows; ++i)
    e.hi |= static_cast<uint64_t>(m.r[i]) << (16 * (i - 4));
  return e;
}

PackedMat identity_mat(const FieldSpec& F, int n) {
  PackedMat m;
  m.rows = m.cols = static_cast<uint8_t>(n);
  for (int i = 0; i < n; ++i) m.r[i] = vset(F, 0, i, 1);
  return m;
}

PackedMat mat_mul(const FieldSpec& F, const PackedMat& a, const PackedMat& b) {
  PackedMat c;
  c.rows = a.rows;
  c.cols = b.cols;
  // row i of the product is the a(i,k)-combination of the rows of b
  for (int i = 0; i < a.rows; ++i) {
    Word acc = 0;
    for (int k = 0; k < a.cols; ++k) {
      int s = vget(F, a.r[i], k);
      if (s) acc = vadd(F, acc, vscale(F, b.r[k], s, b.cols), b.cols);
    }
    c.r[i] = acc;
  }
  return c;
}

Word mat_vec(const FieldSpec& F, const PackedMat& a, Word v) {
  Word acc = 0;
  for (int k = 0; k < a.cols; ++k) {
    int s = vget(F, v, k);
    if (s) {
      Word col = 0;
      for (int i = 0; i < a.rows; ++i) col = vset(F, col, i, mget(F, a, i, k));
      acc = vadd(F, acc, vscale(F, col, s, a.rows), a.rows);
    }
  }
  return acc;
}

PackedMat transpose(const FieldSpec& F, const PackedMat& m) {
  PackedMat t;
  t.rows = m.cols;
  t.cols = m.rows;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) mset(F, t, j, i, mget(F, m, i, j));
  return t;
}

PackedMat conj_transpose(const FieldSpec& F, const PackedMat& m) {
  PackedMat t = transpose(F, m);
  for (int i = 0; i < t.rows; ++i) t.r[i] = vfrob(F, t.r[i], t.cols);
  return t;
}

int rref(const FieldSpec& F, PackedMat& m) {
  int rank = 0;
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int pivot = -1;
    for (int i = rank; i < m.rows; ++i)
      if (vget(F, m.r[i], col)) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    std::swap(m.r[rank], m.r[pivot]);
    int lead = vget(F, m.r[rank], col);
    if (lead != 1) m.r[rank] = vscale(F, m.r[rank], F.inv(lead), m.cols);
    for (int i = 0; i < m.rows; ++i) {
      if (i == rank) continue;
      int c = vget(F, m.r[i], col);
      if (c) m.r[i] = vadd(F, m.r[i], vscale(F, m.r[rank], F.neg(c), m.cols), m.cols);
    }
    ++rank;
  }
  for (int i = rank; i < m.rows; ++i) m.r[i] = 0;
  m.rows = static_cast<uint8_t>(rank);
  return rank;
}

int mat_rank(const FieldSpec& F, PackedMat m) { return rref(F, m); }

PackedMat right_kernel(const FieldSpec& F, const PackedMat& m) {
  PackedMat e = m;
  rref(F, e);
  std::array<int, 16> pivot_of_col;
  pivot_of_col.fill(-1);
  for (int i = 0, col = 0; i < e.rows; ++i) {
    while (col < e.cols && vget(F, e.r[i], col) == 0) ++col;
    if (col < e.cols) pivot_of_col[col] = i;
  }
  PackedMat k;
  k.cols = m.cols;
  for (int col = 0; col < e.cols; ++col) {
    if (pivot_of_col[col] >= 0) continue;
    Word v = vset(F, 0, col, 1);
    for (int c2 = 0; c2 < col; ++c2) {
      int pr = pivot_of_col[c2];
      if (pr >= 0) v = vset(F, v, c2, F.neg(vget(F, e.r[pr], col)));
    }
    k.r[k.rows++] = v;
  }
  rref(F, k);
  return k;
}

std::optional<PackedMat> mat_inverse(const FieldSpec& F, const PackedMat& m) {
  if (m.rows != m.cols) return std::nullopt;
  int n = m.rows;
  // augmented elimination on [m | I] held as parallel matrices
  PackedMat a = m, inv = identity_mat(F, n);
  int rank = 0;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int i = rank; i < n; ++i)
      if (vget(F, a.r[i], col)) {
        pivot = i;
        break;
      }
    if (pivot < 0) return std::nullopt;
    std::swap(a.r[rank], a.r[pivot]);
    std::swap(inv.r[rank], inv.r[pivot]);
    int lead = vget(F, a.r[rank], col);
    if (lead != 1) {
      int s = F.inv(lead);
      a.r[rank] = vscale(F, a.r[rank], s, n);
      inv.r[rank] = vscale(F, inv.r[rank], s, n);
    }
    for (int i = 0; i < n; ++i) {
      if (i == rank) continue;
      int c = vget(F, a.r[i], col);
      if (c) {
        a.r[i] = vadd(F, a.r[i], vscale(F, a.r[rank], F.neg(c), n), n);
        inv.r[i] = vadd(F, inv.r[i], vscale(F, inv.r[rank], F.neg(c), n), n);
      }
    }
    ++rank;
  }
  return inv;
}

int fp_rref(FpMat& m) {
  int p = m.p, rank = 0;
  auto scale_row = [&](int i, int s) {
    for (int j = 0; j < m.cols; ++j) m.at(i, j) = static_cast<uint8_t>(m.at(i, j) * s % p);
  };
  auto axpy_row = [&](int dst, int src, int s) {
    for (int j = 0; j < m.cols; ++j)
      m.at(dst, j) = static_cast<uint8_t>((m.at(dst, j) + s * m.at(src, j)) % p);
  };
  for (int col = 0; col < m.cols && rank < m.rows; ++col) {
    int pivot = -1;
    for (int i = rank; i < m.rows; ++i)
      if (m.at(i, col)) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m.at(rank, j), m.at(pivot, j));
    int lead = m.at(rank, col);
    if (lead != 1) {
      int s = 1;
      for (int t = 1; t < p; ++t)
        if (t * lead % p == 1) s = t;
      scale_row(rank, s);
    }
    for (int i = 0; i < m.rows; ++i) {
      if (i == rank) continue;
      int c = m.at(i, col);
      if (c) axpy_row(i, rank, p - c);
    }
    ++rank;
  }
  m.a.resize(static_cast<size_t>(rank) * m.cols);
  m.rows = rank;
  return rank;
}

int fp_rank(FpMat m) { return fp_rref(m); }

FpMat fp_right_kernel(const FpMat& m) {
  FpMat e = m;
  fp_rref(e);
  std::vector<int> pivot_of_col(m.cols, -1);
  for (int i = 0, col = 0; i < e.rows; ++i) {
    while (col < e.cols && e.at(i, col) == 0) ++col;
    if (col < e.cols) pivot_of_col[col] = i;
  }
  FpMat k(m.p, 0, m.cols);
  for (int col = 0; col < m.cols; ++col) {
    if (pivot_of_col[col] >= 0) continue;
    std::vector<uint8_t> v(m.cols, 0);
    v[col] = 1;
    for (int c2 = 0; c2 < col; ++c2) {
      int pr = pivot_of_col[c2];
      if (pr >= 0) v[c2] = static_cast<uint8_t>((m.p - e.at(pr, col)) % m.p);
    }
    k.a.insert(k.a.end(), v.begin(), v.end());
    ++k.rows;
  }
  fp_rref(k);
  return k;
}

}  // namespace bge
