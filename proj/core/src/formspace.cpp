#include "bge/formspace.hpp"

#include <algorithm>
#include <unordered_set>

namespace bge {

namespace {

// field of order q = p or p^2
Field field_from_order(int q) {
  for (int p = 2; p * p <= q; ++p)
    if (q % p == 0) {
      if (p * p != q) throw unsupported_error("field order is not a prime or a prime square");
      return make_field(p, 2);
    }
  return make_field(q, 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// flags and subspace helpers

std::vector<int> BuildingFlag::type_set() const {
  std::vector<int> t;
  for (auto& e : elems) t.push_back(e.type);
  return t;
}

const FlagElem* BuildingFlag::of_type(int t) const {
  for (auto& e : elems)
    if (e.type == t) return &e;
  return nullptr;
}

bool BuildingFlag::operator<(const BuildingFlag& o) const {
  if (elems.size() != o.elems.size()) return elems.size() < o.elems.size();
  for (size_t i = 0; i < elems.size(); ++i) {
    if (elems[i].type != o.elems[i].type) return elems[i].type < o.elems[i].type;
    auto ka = elems[i].sub.key(), kb = o.elems[i].sub.key();
    if (!(ka == kb)) return ka < kb;
  }
  return false;
}

Subspace make_subspace(const FieldSpec& F, PackedMat rows) {
  rref(F, rows);
  return Subspace{rows};
}

Subspace zero_subspace(int ambient_dim) {
  PackedMat m;
  m.rows = 0;
  m.cols = static_cast<uint8_t>(ambient_dim);
  return Subspace{m};
}

BuildingFlag flag_of(const BuildingModel& b, const Subspace& s) {
  return BuildingFlag{{FlagElem{b.element_type(s), s}}};
}

BuildingFlag flag_union(const BuildingModel& b, const BuildingFlag& f, const BuildingFlag& g) {
  std::vector<FlagElem> elems = f.elems;
  for (auto& e : g.elems) {
    if (std::find(elems.begin(), elems.end(), e) == elems.end()) elems.push_back(e);
  }
  if (!b.is_flag(elems)) throw contract_violation("flag_union: union is not a flag");
  std::sort(elems.begin(), elems.end(),
            [](const FlagElem& a, const FlagElem& c) { return a.type < c.type; });
  return BuildingFlag{elems};
}

Subspace span_of(const FieldSpec& F, const Subspace& a, const Subspace& b) {
  PackedMat m;
  m.cols = a.basis.cols;
  for (int i = 0; i < a.basis.rows; ++i) m.r[m.rows++] = a.basis.r[i];
  for (int i = 0; i < b.basis.rows; ++i) m.r[m.rows++] = b.basis.r[i];
  return make_subspace(F, m);
}

int intersection_dim(const FieldSpec& F, const Subspace& a, const Subspace& b) {
  PackedMat m;
  m.cols = a.basis.cols;
  for (int i = 0; i < a.basis.rows; ++i) m.r[m.rows++] = a.basis.r[i];
  for (int i = 0; i < b.basis.rows; ++i) m.r[m.rows++] = b.basis.r[i];
  return a.dim() + b.dim() - rref(F, m);
}

Subspace intersect(const FieldSpec& F, const Subspace& a, const Subspace& b) {
  // coefficient pairs (x, y) with x*A + y*B = 0 give intersection vectors x*A
  int ka = a.dim(), kb = b.dim();
  PackedMat stacked;  // columns = the ka+kb coefficients, rows = ambient coords
  stacked.rows = a.basis.cols;
  stacked.cols = static_cast<uint8_t>(ka + kb);
  for (int j = 0; j < ka; ++j)
    for (int i = 0; i < stacked.rows; ++i) mset(F, stacked, i, j, vget(F, a.basis.r[j], i));
  for (int j = 0; j < kb; ++j)
    for (int i = 0; i < stacked.rows; ++i) mset(F, stacked, i, ka + j, vget(F, b.basis.r[j], i));
  PackedMat ker = right_kernel(F, stacked);
  PackedMat out;
  out.cols = a.basis.cols;
  for (int i = 0; i < ker.rows; ++i) {
    Word v = 0;
    for (int j = 0; j < ka; ++j) {
      int c = vget(F, ker.r[i], j);
      if (c) v = vadd(F, v, vscale(F, a.basis.r[j], c, a.basis.cols), a.basis.cols);
    }
    out.r[out.rows++] = v;
  }
  return make_subspace(F, out);
}

bool contains(const FieldSpec& F, const Subspace& big, const Subspace& small) {
  PackedMat m = big.basis;
  for (int i = 0; i < small.basis.rows; ++i) m.r[m.rows++] = small.basis.r[i];
  return rref(F, m) == big.dim();
}

std::vector<Subspace> subspaces_of(const FieldSpec& F, const Subspace& inside, int j) {
  int k = inside.dim();
  std::vector<Subspace> out;
  if (j < 0 || j > k) return out;
  if (j == 0) {
    out.push_back(zero_subspace(inside.basis.cols));
    return out;
  }
  // enumerate j-subspaces of F^k, then push through the basis of `inside`
  std::vector<PackedMat> level;
  {
    PackedMat z;
    z.rows = 0;
    z.cols = static_cast<uint8_t>(k);
    level.push_back(z);
  }
  long total = 1;
  for (int i = 0; i < k; ++i) total *= F.q();
  for (int step = 0; step < j; ++step) {
    std::unordered_set<Enc128, Enc128Hash> seen;
    std::vector<PackedMat> next;
    for (auto& s : level) {
      for (long code = 1; code < total; ++code) {
        Word v = 0;
        long c = code;
        for (int i = 0; i < k; ++i) {
          v = vset(F, v, i, static_cast<int>(c % F.q()));
          c /= F.q();
        }
        int lead = -1;
        for (int i = 0; i < k; ++i)
          if (vget(F, v, i)) {
            lead = i;
            break;
          }
        if (vget(F, v, lead) != 1) continue;  // normalized representatives only
        PackedMat m = s;
        m.r[m.rows++] = v;
        if (rref(F, m) != s.rows + 1) continue;
        if (seen.insert(encode(m)).second) next.push_back(m);
      }
    }
    level = std::move(next);
  }
  for (auto& m : level) {
    PackedMat big;
    big.cols = inside.basis.cols;
    for (int i = 0; i < m.rows; ++i) {
      Word v = 0;
      for (int c = 0; c < k; ++c) {
        int s = vget(F, m.r[i], c);
        if (s) v = vadd(F, v, vscale(F, inside.basis.r[c], s, inside.basis.cols), inside.basis.cols);
      }
      big.r[big.rows++] = v;
    }
    out.push_back(make_subspace(F, big));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// BuildingModel

BuildingModel::BuildingModel(std::string name, char family, int rank, int q)
    : name_(std::move(name)), family_(family), rank_(rank), qname_(q) {
  switch (family_) {
    case 'A':
      field_ = field_from_order(q);
      dim_ = rank_ + 1;
      witt_ = rank_;
      kind_ = FormKind::linear;
      break;
    case 'C':
      field_ = field_from_order(q);
      dim_ = 2 * rank_;
      witt_ = rank_;
      kind_ = FormKind::symplectic;
      break;
    case 'B':
      if (q % 2 == 0)
        throw unsupported_error("B_n over even fields coincides with C_n; use C instead");
      field_ = field_from_order(q);
      dim_ = 2 * rank_ + 1;
      witt_ = rank_;
      kind_ = FormKind::quadratic_odd;
      break;
    case 'D':
      field_ = field_from_order(q);
      dim_ = 2 * rank_;
      witt_ = rank_;
      kind_ = FormKind::quadratic_plus;
      break;
    case 'a': {  // 2A_m, rank = floor((m+1)/2), matrix entries in F_{q^2}
      field_ = make_field(q, 2);
      dim_ = rank_ + 1;  // here rank_ temporarily carries m; fixed below
      break;
    }
    case 'd': {  // 2D_s, polar rank s-1 on 2s coordinates
      field_ = field_from_order(q);
      dim_ = 2 * rank_;
      witt_ = rank_ - 1;
      rank_ = witt_;
      kind_ = FormKind::quadratic_minus;
      break;
    }
    default:
      throw unsupported_error("unknown building family");
  }
  if (family_ == 'a') {
    int m = rank_;
    dim_ = m + 1;
    witt_ = (m + 1) / 2;
    rank_ = witt_;
    kind_ = FormKind::hermitian;
  }
  if (dim_ > 8) throw unsupported_error("ambient dimension above 8 is not supported");
  if (field_->q() > 4) throw unsupported_error("matrix fields above F_4 are not supported");
  if (field_->p() != 2 && dim_ > 8) throw unsupported_error("space too large");

  const FieldSpec& F = *field_;
  int w = witt_;
  gram_ = PackedMat{};
  gram_.rows = gram_.cols = static_cast<uint8_t>(dim_);
  quad_ = PackedMat{};
  quad_.rows = quad_.cols = static_cast<uint8_t>(dim_);

  switch (kind_) {
    case FormKind::linear:
      gram_.rows = gram_.cols = 0;
      quad_.rows = quad_.cols = 0;
      break;
    case FormKind::symplectic:
      for (int i = 0; i < w; ++i) {
        mset(F, gram_, i, w + i, 1);
        mset(F, gram_, w + i, i, F.neg(1));
      }
      quad_.rows = quad_.cols = 0;
      break;
    case FormKind::quadratic_odd:
      for (int i = 0; i < w; ++i) mset(F, quad_, i, w + i, 1);
      mset(F, quad_, 2 * w, 2 * w, 1);
      break;
    case FormKind::quadratic_plus:
      for (int i = 0; i < w; ++i) mset(F, quad_, i, w + i, 1);
      break;
    case FormKind::quadratic_minus: {
      for (int i = 0; i < w; ++i) mset(F, quad_, i, w + i, 1);
      int s = 2 * w, t = 2 * w + 1;
      // anisotropic tail z^2 + b z t + c t^2, lexicographically first
      // irreducible choice of (b, c)
      bool found = false;
      for (int b = 0; b < F.q() && !found; ++b)
        for (int c = 0; c < F.q() && !found; ++c) {
          bool irred = c != 0;
          for (int z = 0; z < F.q() && irred; ++z)
            if (F.add(F.add(F.mul(z, z), F.mul(b, z)), c) == 0) irred = false;
          if (irred) {
            mset(F, quad_, s, s, 1);
            mset(F, quad_, s, t, b);
            mset(F, quad_, t, t, c);
            found = true;
          }
        }
      if (!found) throw unsupported_error("no anisotropic binary form found");
      break;
    }
    case FormKind::hermitian: {
      for (int i = 0; i < w; ++i) {
        mset(F, gram_, i, w + i, 1);
        mset(F, gram_, w + i, i, 1);
      }
      if (dim_ % 2 == 1) mset(F, gram_, dim_ - 1, dim_ - 1, 1);
      quad_.rows = quad_.cols = 0;
      break;
    }
  }
  if (kind_ == FormKind::quadratic_odd || kind_ == FormKind::quadratic_plus ||
      kind_ == FormKind::quadratic_minus) {
    // polarization b(u,v) = Q(u+v) - Q(u) - Q(v)
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        int v = F.add(mget(F, quad_, i, j), mget(F, quad_, j, i));
        mset(F, gram_, i, j, v);
      }
  }
}

int BuildingModel::bilinear(Word u, Word v) const {
  if (kind_ == FormKind::linear) throw contract_violation("no form on a linear space");
  const FieldSpec& F = *field_;
  Word vv = kind_ == FormKind::hermitian ? vfrob(F, v, dim_) : v;
  Word gv = 0;
  for (int i = 0; i < dim_; ++i) {
    int s = 0;
    for (int j = 0; j < dim_; ++j) s = F.add(s, F.mul(mget(F, gram_, i, j), vget(F, vv, j)));
    gv = vset(F, gv, i, s);
  }
  int r = 0;
  for (int i = 0; i < dim_; ++i) r = F.add(r, F.mul(vget(F, u, i), vget(F, gv, i)));
  return r;
}

int BuildingModel::quad_value(Word v) const {
  const FieldSpec& F = *field_;
  int r = 0;
  for (int i = 0; i < dim_; ++i) {
    int vi = vget(F, v, i);
    if (!vi) continue;
    for (int j = i; j < dim_; ++j) {
      int c = mget(F, quad_, i, j);
      if (c) r = F.add(r, F.mul(c, F.mul(vi, vget(F, v, j))));
    }
  }
  return r;
}

bool BuildingModel::singular_vector(Word v) const {
  switch (kind_) {
    case FormKind::linear:
    case FormKind::symplectic:
      return true;
    case FormKind::hermitian:
      return bilinear(v, v) == 0;
    default:
      return quad_value(v) == 0;
  }
}

bool BuildingModel::totally_singular(const PackedMat& rows) const {
  if (kind_ == FormKind::linear) return true;
  for (int i = 0; i < rows.rows; ++i) {
    if (!singular_vector(rows.r[i])) return false;
    for (int j = i + 1; j < rows.rows; ++j)
      if (bilinear(rows.r[i], rows.r[j]) != 0) return false;
  }
  return true;
}

Subspace BuildingModel::perp(const Subspace& s) const {
  const FieldSpec& F = *field_;
  PackedMat constraints;
  constraints.cols = static_cast<uint8_t>(dim_);
  for (int i = 0; i < s.basis.rows; ++i) {
    // row: v satisfies bilinear(s_i, v) = 0
    Word row = 0;
    for (int j = 0; j < dim_; ++j) {
      int c = 0;
      for (int l = 0; l < dim_; ++l)
        c = F.add(c, F.mul(vget(F, s.basis.r[i], l), mget(F, gram_, l, j)));
      if (kind_ == FormKind::hermitian) c = F.frobenius(c);
      row = vset(F, row, j, c);
    }
    constraints.r[constraints.rows++] = row;
  }
  PackedMat ker = right_kernel(F, constraints);
  return make_subspace(F, ker);
}

bool BuildingModel::preserves_form(const PackedMat& g) const {
  const FieldSpec& F = *field_;
  if (g.rows != dim_ || g.cols != dim_) return false;
  if (mat_rank(F, g) != dim_) return false;
  if (kind_ == FormKind::linear) return true;
  std::array<Word, 8> col{};
  for (int j = 0; j < dim_; ++j) {
    Word v = 0;
    for (int i = 0; i < dim_; ++i) v = vset(F, v, i, mget(F, g, i, j));
    col[j] = v;
  }
  bool quadratic = kind_ == FormKind::quadratic_odd || kind_ == FormKind::quadratic_plus ||
                   kind_ == FormKind::quadratic_minus;
  for (int i = 0; i < dim_; ++i) {
    if (quadratic && quad_value(col[i]) != quad_value(vset(F, 0, i, 1))) return false;
    for (int j = quadratic ? i + 1 : i; j < dim_; ++j)
      if (bilinear(col[i], col[j]) != mget(F, gram_, i, j)) return false;
  }
  return true;
}

const std::vector<Subspace>& BuildingModel::isotropic(int k) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = iso_cache_.find(k);
    if (it != iso_cache_.end()) return it->second;
  }

  std::vector<Subspace> out;
  int maxdim = kind_ == FormKind::linear ? rank_ : witt_;
  if (k == 0) {
    out.push_back(zero_subspace(dim_));
  } else if (k <= maxdim) {
    const FieldSpec& F = *field_;
    long total = 1;
    for (int i = 0; i < dim_; ++i) total *= F.q();
    if (k == 1) {
      for (long code = 1; code < total; ++code) {
        Word v = 0;
        long c = code;
        for (int i = 0; i < dim_; ++i) {
          v = vset(F, v, i, static_cast<int>(c % F.q()));
          c /= F.q();
        }
        int lead = -1;
        for (int i = 0; i < dim_; ++i)
          if (vget(F, v, i)) {
            lead = i;
            break;
          }
        if (vget(F, v, lead) != 1) continue;
        if (!singular_vector(v)) continue;
        PackedMat m;
        m.cols = static_cast<uint8_t>(dim_);
        m.r[m.rows++] = v;
        out.push_back(Subspace{m});
      }
    } else {
      const std::vector<Subspace>& prev = isotropic(k - 1);
      const std::vector<Subspace>& points = isotropic(1);
      std::unordered_set<Enc128, Enc128Hash> seen;
      for (const auto& s : prev) {
        for (const auto& p : points) {
          Word pv = p.basis.r[0];
          if (kind_ != FormKind::linear) {
            bool ortho = true;
            for (int i = 0; i < s.basis.rows && ortho; ++i)
              if (bilinear(s.basis.r[i], pv) != 0) ortho = false;
            if (!ortho) continue;
          }
          PackedMat m = s.basis;
          m.r[m.rows++] = pv;
          if (rref(F, m) != k) continue;
          if (seen.insert(encode(m)).second) out.push_back(Subspace{m});
        }
      }
    }
    std::sort(out.begin(), out.end());
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto it = iso_cache_.find(k);
  if (it == iso_cache_.end()) it = iso_cache_.emplace(k, std::move(out)).first;
  return it->second;
}

char BuildingModel::type_d_class(const Subspace& m) const {
  if (family_ != 'D') throw contract_violation("oriflamme classes exist only in family D");
  if (m.dim() != witt_ || !totally_singular(m.basis))
    throw contract_violation("type_d_class requires a maximal singular subspace");
  Subspace ref = e_block(witt_);
  int codim = witt_ - intersection_dim(*field_, m, ref);
  return codim % 2 == 0 ? '+' : '-';
}

int BuildingModel::type_of_maximal(const Subspace& m) const {
  return type_d_class(m) == '+' ? rank_ : rank_ - 1;
}

int BuildingModel::element_type(const Subspace& s) const {
  if (family_ == 'D' && s.dim() == witt_) return type_of_maximal(s);
  return s.dim();
}

const std::vector<Subspace>& BuildingModel::elements_of_type(int t) const {
  if (t < 1 || t > rank_) throw contract_violation("type out of range");
  if (family_ != 'D' || t < rank_ - 1) return isotropic(t);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = type_cache_.find(t);
    if (it != type_cache_.end()) return it->second;
  }
  std::vector<Subspace> filtered;
  for (const auto& m : isotropic(witt_))
    if (type_of_maximal(m) == t) filtered.push_back(m);
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = type_cache_[t];
  if (slot.empty()) slot = std::move(filtered);
  return slot;
}

bool BuildingModel::incident(const FlagElem& a, const FlagElem& b) const {
  const FieldSpec& F = *field_;
  if (a.type == b.type) return a.sub == b.sub;
  if (family_ == 'D') {
    bool amax = a.type >= rank_ - 1, bmax = b.type >= rank_ - 1;
    if (amax && bmax)
      return intersection_dim(F, a.sub, b.sub) == witt_ - 1;
    if (amax) return contains(F, a.sub, b.sub);
    if (bmax) return contains(F, b.sub, a.sub);
  }
  return a.sub.dim() < b.sub.dim() ? contains(F, b.sub, a.sub) : contains(F, a.sub, b.sub);
}

bool BuildingModel::is_flag(const std::vector<FlagElem>& elems) const {
  for (size_t i = 0; i < elems.size(); ++i)
    for (size_t j = i + 1; j < elems.size(); ++j) {
      if (elems[i].type == elems[j].type && !(elems[i].sub == elems[j].sub)) return false;
      if (!incident(elems[i], elems[j])) return false;
    }
  return true;
}

int BuildingModel::opposite_type(int t) const {
  if (family_ == 'A') return rank_ + 1 - t;
  if (family_ == 'D' && rank_ % 2 == 1 && t >= rank_ - 1) return 2 * rank_ - 1 - t;
  return t;
}

bool BuildingModel::is_opposite_elem(const FlagElem& a, const FlagElem& b) const {
  if (b.type != opposite_type(a.type))
    throw contract_violation("opposition tested across non-opposite types");
  const FieldSpec& F = *field_;
  if (family_ == 'A' || (family_ == 'D' && a.type >= rank_ - 1)) {
    // complementary position: trivial intersection
    return intersection_dim(F, a.sub, b.sub) == 0;
  }
  // polar characterization: a meets perp(b) trivially, i.e. the pairing
  // between the two subspaces is nondegenerate
  int k = a.sub.dim();
  PackedMat pairing;
  pairing.rows = pairing.cols = static_cast<uint8_t>(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      mset(F, pairing, i, j, bilinear(a.sub.basis.r[i], b.sub.basis.r[j]));
  return mat_rank(F, pairing) == k;
}

bool BuildingModel::is_opposite(const BuildingFlag& f, const BuildingFlag& g) const {
  std::vector<int> want;
  for (auto& e : f.elems) want.push_back(opposite_type(e.type));
  std::sort(want.begin(), want.end());
  std::vector<int> have = g.type_set();
  std::sort(have.begin(), have.end());
  if (want != have) throw contract_violation("flag types do not match under the opposition involution");
  for (auto& e : f.elems) {
    const FlagElem* o = g.of_type(opposite_type(e.type));
    if (!is_opposite_elem(e, *o)) return false;
  }
  return true;
}

std::vector<int> BuildingModel::diagram_neighbors(int t) const {
  std::vector<int> nb;
  if (family_ == 'D') {
    int n = rank_;
    if (t <= n - 3) {
      if (t > 1) nb.push_back(t - 1);
      nb.push_back(t + 1);
    } else if (t == n - 2) {
      if (t > 1) nb.push_back(t - 1);
      nb.push_back(n - 1);
      nb.push_back(n);
    } else {
      nb.push_back(n - 2);
    }
  } else {
    if (t > 1) nb.push_back(t - 1);
    if (t < rank_) nb.push_back(t + 1);
  }
  return nb;
}

int BuildingModel::gonality(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto nb = diagram_neighbors(i);
  if (std::find(nb.begin(), nb.end(), j) == nb.end()) return 2;
  bool double_bond = (family_ == 'C' || family_ == 'B' || family_ == 'a' || family_ == 'd') &&
                     i == rank_ - 1 && j == rank_;
  return double_bond ? 4 : 3;
}

int BuildingModel::residue_order(int t) const {
  int q = qname_;
  switch (family_) {
    case 'A':
    case 'C':
    case 'B':
    case 'D':
      return q;
    case 'a': {
      int m = dim_ - 1;
      if (t < rank_) return q * q;
      return m % 2 == 1 ? q : q * q * q;  // 2A_{2n-1} vs 2A_{2n}
    }
    case 'd':
      return t < rank_ ? q : q * q;
  }
  throw contract_violation("unknown family");
}

Subspace BuildingModel::e_block(int k) const {
  const FieldSpec& F = *field_;
  PackedMat m;
  m.cols = static_cast<uint8_t>(dim_);
  for (int i = 0; i < k; ++i) m.r[m.rows++] = vset(F, 0, i, 1);
  return Subspace{m};
}

Subspace BuildingModel::f_block(int k) const {
  const FieldSpec& F = *field_;
  PackedMat m;
  m.cols = static_cast<uint8_t>(dim_);
  for (int i = 0; i < k; ++i) m.r[m.rows++] = vset(F, 0, witt_ + i, 1);
  return Subspace{m};
}

std::pair<BuildingFlag, BuildingFlag> BuildingModel::standard_pair(int j) const {
  const FieldSpec& F = *field_;
  if (j < 1 || j > rank_) throw contract_violation("type out of range");
  if (family_ == 'A') {
    Subspace A = e_block(j);
    PackedMat m;
    m.cols = static_cast<uint8_t>(dim_);
    for (int i = j; i < dim_; ++i) m.r[m.rows++] = vset(F, 0, i, 1);
    Subspace As{m};
    return {BuildingFlag{{FlagElem{j, A}}}, BuildingFlag{{FlagElem{dim_ - j, As}}}};
  }
  if (family_ == 'D' && j >= rank_ - 1) {
    int n = rank_;
    Subspace A = e_block(n), As = f_block(n);
    if (j == n - 1) {
      // swap the last hyperbolic coordinate to land in the other class
      PackedMat a, b;
      a.cols = b.cols = static_cast<uint8_t>(dim_);
      for (int i = 0; i < n - 1; ++i) a.r[a.rows++] = vset(F, 0, i, 1);
      a.r[a.rows++] = vset(F, 0, witt_ + (n - 1), 1);
      for (int i = 0; i < n - 1; ++i) b.r[b.rows++] = vset(F, 0, witt_ + i, 1);
      b.r[b.rows++] = vset(F, 0, n - 1, 1);
      A = make_subspace(F, a);
      As = make_subspace(F, b);
    }
    int ta = element_type(A), tb = element_type(As);
    if (ta != j || tb != opposite_type(j))
      throw contract_violation("standard pair has unexpected oriflamme classes");
    return {BuildingFlag{{FlagElem{ta, A}}}, BuildingFlag{{FlagElem{tb, As}}}};
  }
  return {BuildingFlag{{FlagElem{j, e_block(j)}}}, BuildingFlag{{FlagElem{j, f_block(j)}}}};
}

PackedMat BuildingModel::adapted_frame(const Subspace& A, const Subspace& Astar) const {
  const FieldSpec& F = *field_;
  int k = A.dim();
  PackedMat T;
  T.rows = T.cols = static_cast<uint8_t>(dim_);

  auto set_col = [&](int j, Word v) {
    for (int i = 0; i < dim_; ++i) mset(F, T, i, j, vget(F, v, i));
  };

  if (family_ == 'A') {
    if (A.dim() + Astar.dim() != dim_ || intersection_dim(F, A, Astar) != 0)
      throw contract_violation("adapted_frame: flags are not opposite");
    for (int i = 0; i < k; ++i) set_col(i, A.basis.r[i]);
    for (int i = 0; i < Astar.dim(); ++i) set_col(k + i, Astar.basis.r[i]);
    if (mat_rank(F, T) != dim_) throw contract_violation("adapted_frame: degenerate frame");
    return T;
  }

  if (k != witt_ || Astar.dim() != witt_)
    throw contract_violation("adapted_frame requires maximal singular subspaces");
  if (!totally_singular(A.basis) || !totally_singular(Astar.basis))
    throw contract_violation("adapted_frame requires singular subspaces");

  // dual basis of Astar against the rows of A
  PackedMat P;
  P.rows = P.cols = static_cast<uint8_t>(k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) mset(F, P, i, j, bilinear(A.basis.r[i], Astar.basis.r[j]));
  auto Pinv = mat_inverse(F, P);
  if (!Pinv) throw contract_violation("adapted_frame: flags are not opposite");
  PackedMat lambda = *Pinv;
  if (kind_ == FormKind::hermitian)
    for (int i = 0; i < k; ++i) lambda.r[i] = vfrob(F, lambda.r[i], k);
  std::array<Word, 8> dual{};
  for (int j = 0; j < k; ++j) {
    Word v = 0;
    for (int l = 0; l < k; ++l) {
      int c = mget(F, lambda, l, j);
      if (c) v = vadd(F, v, vscale(F, Astar.basis.r[l], c, dim_), dim_);
    }
    dual[j] = v;
  }
  for (int i = 0; i < k; ++i) set_col(i, A.basis.r[i]);
  for (int i = 0; i < k; ++i) set_col(witt_ + i, dual[i]);

  // anisotropic tail: the perp of A + Astar, normalized onto the standard one
  int tail = dim_ - 2 * witt_;
  if (tail > 0) {
    Subspace W = perp(span_of(F, A, Astar));
    if (W.dim() != tail) throw contract_violation("adapted_frame: unexpected radical");
    long total = 1;
    for (int i = 0; i < tail; ++i) total *= F.q();
    auto vec_in_W = [&](long code) {
      Word v = 0;
      for (int i = 0; i < tail; ++i) {
        int c = static_cast<int>(code % F.q());
        code /= F.q();
        if (c) v = vadd(F, v, vscale(F, W.basis.r[i], c, dim_), dim_);
      }
      return v;
    };
    if (tail == 1) {
      int target = kind_ == FormKind::hermitian ? mget(F, gram_, dim_ - 1, dim_ - 1)
                                                : mget(F, quad_, dim_ - 1, dim_ - 1);
      bool done = false;
      for (long c = 1; c < total && !done; ++c) {
        Word v = vec_in_W(c);
        int val = kind_ == FormKind::hermitian ? bilinear(v, v) : quad_value(v);
        if (val == target) {
          set_col(dim_ - 1, v);
          done = true;
        }
      }
      if (!done) throw contract_violation("adapted_frame: tail normalization failed");
    } else if (tail == 2) {
      int s = dim_ - 2, t = dim_ - 1;
      int qs = mget(F, quad_, s, s), qt = mget(F, quad_, t, t), bst = mget(F, gram_, s, t);
      bool done = false;
      for (long c1 = 1; c1 < total && !done; ++c1)
        for (long c2 = 1; c2 < total && !done; ++c2) {
          Word u = vec_in_W(c1), v = vec_in_W(c2);
          if (quad_value(u) == qs && quad_value(v) == qt && bilinear(u, v) == bst) {
            set_col(s, u);
            set_col(t, v);
            done = true;
          }
        }
      if (!done) throw contract_violation("adapted_frame: tail normalization failed");
    } else {
      throw unsupported_error("adapted_frame: tail dimension above 2");
    }
  }

  if (!preserves_form(T)) throw contract_violation("adapted_frame: frame does not preserve the form");
  return T;
}

Subspace apply(const BuildingModel& b, const GroupElement& g, const Subspace& s) {
  const FieldSpec& F = b.F();
  PackedMat m;
  m.cols = static_cast<uint8_t>(b.dim());
  for (int i = 0; i < s.basis.rows; ++i) m.r[m.rows++] = mat_vec(F, g.m, s.basis.r[i]);
  return make_subspace(F, m);
}

BuildingFlag apply(const BuildingModel& b, const GroupElement& g, const BuildingFlag& f) {
  BuildingFlag out;
  for (auto& e : f.elems) {
    Subspace img = apply(b, g, e.sub);
    out.elems.push_back(FlagElem{b.element_type(img), img});
  }
  std::sort(out.elems.begin(), out.elems.end(),
            [](const FlagElem& a, const FlagElem& c) { return a.type < c.type; });
  return out;
}

Building parse_building(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, Building> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;

  size_t pos = 0;
  bool twisted = false;
  if (pos < name.size() && name[pos] == '2') {
    twisted = true;
    ++pos;
  }
  if (pos >= name.size()) throw contract_violation("bad building name: " + name);
  char letter = name[pos++];
  size_t digits_start = pos;
  while (pos < name.size() && isdigit(static_cast<unsigned char>(name[pos]))) ++pos;
  if (pos == digits_start || pos >= name.size() || name[pos] != '(' || name.back() != ')')
    throw contract_violation("bad building name: " + name);
  int sub = std::stoi(name.substr(digits_start, pos - digits_start));
  int q = std::stoi(name.substr(pos + 1, name.size() - pos - 2));

  char family;
  if (!twisted && (letter == 'A' || letter == 'B' || letter == 'C' || letter == 'D'))
    family = letter;
  else if (twisted && letter == 'A')
    family = 'a';
  else if (twisted && letter == 'D')
    family = 'd';
  else
    throw unsupported_error("unsupported building family in name: " + name);

  Building b(new BuildingModel(name, family, sub, q));
  cache.emplace(name, b);
  return b;
}

}  // namespace bge
