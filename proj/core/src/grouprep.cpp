#include "bge/grouprep.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

namespace bge {

// ---------------------------------------------------------------------------
// concrete groups

MatrixGroup::MatrixGroup(Building b, std::vector<PackedMat> elems, std::vector<PackedMat> gens)
    : b_(std::move(b)) {
  std::sort(elems.begin(), elems.end(),
            [](const PackedMat& x, const PackedMat& y) { return encode(x) < encode(y); });
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  elems_ = std::move(elems);
  n_ = static_cast<int>(elems_.size());
  index_.reserve(elems_.size());
  for (int i = 0; i < n_; ++i) index_.emplace_back(encode(elems_[i]), i);
  // index_ is sorted because elems_ is sorted by encoding
  PackedMat id = identity_mat(b_->F(), b_->dim());
  id_ = index_of(id);
  if (id_ < 0) throw contract_violation("matrix group without identity");
  for (const auto& g : gens) {
    int i = index_of(g);
    if (i < 0) throw contract_violation("matrix group generator outside the element list");
    gens_.push_back(i);
  }
}

int MatrixGroup::index_of(const PackedMat& m) const {
  Enc128 key = encode(m);
  auto it = std::lower_bound(index_.begin(), index_.end(), key,
                             [](const std::pair<Enc128, int>& a, const Enc128& k) { return a.first < k; });
  if (it == index_.end() || !(it->first == key)) return -1;
  return it->second;
}

int MatrixGroup::mult(int a, int b) const {
  int r = index_of(mat_mul(b_->F(), elems_[a], elems_[b]));
  if (r < 0) throw contract_violation("matrix group not closed under multiplication");
  return r;
}

int MatrixGroup::inverse(int a) const {
  auto inv = mat_inverse(b_->F(), elems_[a]);
  if (!inv) throw contract_violation("singular matrix in a matrix group");
  int r = index_of(*inv);
  if (r < 0) throw contract_violation("matrix group not closed under inversion");
  return r;
}

std::string MatrixGroup::describe(int a) const {
  std::ostringstream os;
  const FieldSpec& F = b_->F();
  os << "[";
  for (int i = 0; i < elems_[a].rows; ++i) {
    if (i) os << "; ";
    for (int j = 0; j < elems_[a].cols; ++j) {
      if (j) os << " ";
      os << mget(F, elems_[a], i, j);
    }
  }
  os << "]";
  return os.str();
}

AdditiveGroup::AdditiveGroup(int p, int d) : p_(p), d_(d) {
  long n = 1;
  for (int i = 0; i < d; ++i) {
    n *= p;
    if (n > (1L << 26)) throw resource_error("additive group too large");
  }
  n_ = static_cast<int>(n);
  id_ = 0;
  long unit = 1;
  for (int i = 0; i < d; ++i) {
    gens_.push_back(static_cast<int>(unit));
    unit *= p;
  }
}

int AdditiveGroup::digit(int a, int i) const {
  for (int k = 0; k < i; ++k) a /= p_;
  return a % p_;
}

int AdditiveGroup::from_digits(const std::vector<int>& digits) const {
  long a = 0, unit = 1;
  for (int i = 0; i < d_; ++i) {
    a += (i < static_cast<int>(digits.size()) ? digits[i] % p_ : 0) * unit;
    unit *= p_;
  }
  return static_cast<int>(a);
}

int AdditiveGroup::mult(int a, int b) const {
  long r = 0, unit = 1;
  for (int i = 0; i < d_; ++i) {
    int da = static_cast<int>(a / unit) % p_, db = static_cast<int>(b / unit) % p_;
    r += static_cast<long>((da + db) % p_) * unit;
    unit *= p_;
  }
  return static_cast<int>(r);
}

int AdditiveGroup::inverse(int a) const {
  int r = 0;
  long unit = 1;
  for (int i = 0; i < d_; ++i) {
    int dig = static_cast<int>(a / unit) % p_;
    r += static_cast<int>(((p_ - dig) % p_) * unit);
    unit *= p_;
  }
  return r;
}

CayleyGroup::CayleyGroup(std::vector<std::vector<int>> table, int id, std::vector<int> gens)
    : table_(std::move(table)) {
  n_ = static_cast<int>(table_.size());
  id_ = id;
  gens_ = std::move(gens);
  inv_.assign(n_, -1);
  for (int a = 0; a < n_; ++a)
    for (int b = 0; b < n_; ++b)
      if (table_[a][b] == id_) inv_[a] = b;
}

// ---------------------------------------------------------------------------
// group utilities

std::vector<int> subgroup_closure(const FiniteGroup& g, std::vector<int> gens) {
  std::vector<char> in(g.size(), 0);
  std::vector<int> queue;
  in[g.identity()] = 1;
  queue.push_back(g.identity());
  for (int x : gens)
    if (!in[x]) {
      in[x] = 1;
      queue.push_back(x);
    }
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int x = queue[qi];
    for (int s : gens) {
      int y = g.mult(x, s);
      if (!in[y]) {
        in[y] = 1;
        queue.push_back(y);
      }
    }
  }
  std::vector<int> out;
  for (int i = 0; i < g.size(); ++i)
    if (in[i]) out.push_back(i);
  return out;
}

std::vector<int> derived_subgroup(const FiniteGroup& g) {
  const auto& gens = g.generators();
  std::vector<int> comms;
  for (int a : gens)
    for (int b : gens) {
      int c = g.mult(g.mult(a, b), g.mult(g.inverse(a), g.inverse(b)));
      comms.push_back(c);
    }
  std::vector<int> n = subgroup_closure(g, comms);
  // normal closure under conjugation by the group generators
  for (;;) {
    std::vector<int> extra;
    std::set<int> have(n.begin(), n.end());
    for (int x : n)
      for (int s : gens) {
        int y = g.mult(g.mult(s, x), g.inverse(s));
        if (!have.count(y)) extra.push_back(y);
      }
    if (extra.empty()) break;
    std::vector<int> newgens = n;
    newgens.insert(newgens.end(), extra.begin(), extra.end());
    n = subgroup_closure(g, newgens);
  }
  return n;
}

bool is_abelian(const FiniteGroup& g) {
  const auto& gens = g.generators();
  for (int a : gens)
    for (int b : gens)
      if (g.mult(a, b) != g.mult(b, a)) return false;
  return true;
}

bool is_normal(const FiniteGroup& g, const std::vector<int>& n) {
  std::set<int> have(n.begin(), n.end());
  for (int x : n)
    for (int s : g.generators())
      if (!have.count(g.mult(g.mult(s, x), g.inverse(s)))) return false;
  return true;
}

int element_order(const FiniteGroup& g, int a) {
  int x = a, ord = 1;
  while (x != g.identity()) {
    x = g.mult(x, a);
    ++ord;
    if (ord > g.size()) throw contract_violation("element order exceeds group size");
  }
  return ord;
}

bool is_elementary_abelian_group(const FiniteGroup& g, int p) {
  if (!is_abelian(g)) return false;
  for (int s : g.generators()) {
    if (s == g.identity()) continue;
    if (element_order(g, s) != p) return false;
  }
  return true;
}

std::optional<FpMat> abelian_coordinates(const FiniteGroup& g) {
  if (!is_abelian(g)) return std::nullopt;
  int p = 0;
  for (int s : g.generators())
    if (s != g.identity()) {
      int o = element_order(g, s);
      if (p == 0) p = o;
      if (o != p) return std::nullopt;
    }
  if (p == 0) p = 2;  // trivial group

  std::unordered_map<int, std::vector<uint8_t>> coords;
  coords[g.identity()] = {};
  std::vector<int> basis;
  for (int s : g.generators()) {
    if (coords.count(s)) continue;
    basis.push_back(s);
    std::vector<std::pair<int, std::vector<uint8_t>>> snapshot(coords.begin(), coords.end());
    for (auto& [x, cx] : snapshot) {
      int y = x;
      for (int k = 1; k < p; ++k) {
        y = g.mult(y, s);
        auto cy = cx;
        cy.resize(basis.size(), 0);
        cy[basis.size() - 1] = static_cast<uint8_t>(k);
        coords[y] = cy;
      }
    }
  }
  if (static_cast<int>(coords.size()) != g.size()) return std::nullopt;
  FpMat m(p, g.size(), static_cast<int>(basis.size()));
  for (auto& [x, cx] : coords)
    for (size_t i = 0; i < cx.size(); ++i) m.at(x, static_cast<int>(i)) = cx[i];
  return m;
}

// ---------------------------------------------------------------------------
// unipotent radicals: block parametrizations in the standard frame

namespace {

struct ParamScheme {
  // one entry per digit: the allowed field codes (first is 0) and the codes
  // whose single-digit elements generate that digit's span
  std::vector<std::vector<int>> values;
  std::vector<std::vector<int>> genvals;
  std::function<PackedMat(const std::vector<int>&)> build;
};

struct StdUnipotent {
  std::vector<PackedMat> elems;
  std::vector<PackedMat> gens;
};

std::vector<int> full_field_codes(const FieldSpec& F) {
  std::vector<int> v(F.q());
  for (int i = 0; i < F.q(); ++i) v[i] = i;
  return v;
}

std::vector<int> field_gen_codes(const FieldSpec& F) {
  if (F.k() == 1) return {1};
  return {1, F.p()};  // 1 and x form an F_p-basis of F_{p^2}
}

std::vector<int> trace_zero_codes(const FieldSpec& F) {
  std::vector<int> v;
  for (int z = 0; z < F.q(); ++z)
    if (F.add(z, F.frobenius(z)) == 0) v.push_back(z);
  return v;
}

StdUnipotent realize(const BuildingModel& b, const ParamScheme& scheme,
                     const BuildingFlag& fixed_flag) {
  StdUnipotent out;
  size_t digits = scheme.values.size();
  std::vector<int> cur(digits, 0);
  long total = 1;
  for (auto& v : scheme.values) total *= static_cast<long>(v.size());
  if (total > (1L << 22)) throw resource_error("unipotent radical too large");
  std::vector<size_t> idx(digits, 0);
  for (long step = 0; step < total; ++step) {
    for (size_t d2 = 0; d2 < digits; ++d2) cur[d2] = scheme.values[d2][idx[d2]];
    PackedMat m = scheme.build(cur);
    if (!b.preserves_form(m))
      throw contract_violation("unipotent parametrization violates the form");
    for (const auto& e : fixed_flag.elems)
      if (!(apply(b, GroupElement{m}, e.sub) == e.sub))
        throw contract_violation("unipotent parametrization does not fix the base flag");
    out.elems.push_back(m);
    for (size_t d2 = 0; d2 < digits; ++d2) {
      if (++idx[d2] < scheme.values[d2].size()) break;
      idx[d2] = 0;
    }
  }
  for (size_t d2 = 0; d2 < digits; ++d2)
    for (int v : scheme.genvals[d2]) {
      std::vector<int> one(digits, 0);
      one[d2] = v;
      out.gens.push_back(scheme.build(one));
    }
  return out;
}

// radical of the standard maximal singular subspace spanned by the f-block
StdUnipotent std_max_radical(const BuildingModel& b) {
  const FieldSpec& F = b.F();
  int w = b.witt(), dim = b.dim();
  int tail = dim - 2 * w;
  bool hermitian = b.kind() == FormKind::hermitian;
  bool symplectic = b.kind() == FormKind::symplectic;

  ParamScheme scheme;
  struct TailDigit {
    int c, r;
  };  // coefficient of tail coordinate r in the image of e_c
  std::vector<TailDigit> tail_digits;
  struct PairDigit {
    int i, j;
  };
  std::vector<PairDigit> pair_digits;  // strictly upper for skew/hermitian part
  std::vector<int> diag_digits;        // hermitian diagonal; symmetric diagonal for C

  for (int c = 0; c < w; ++c)
    for (int r = 0; r < tail; ++r) tail_digits.push_back({c, r});
  if (symplectic) {
    for (int i = 0; i < w; ++i) diag_digits.push_back(i);
    for (int i = 0; i < w; ++i)
      for (int j = i + 1; j < w; ++j) pair_digits.push_back({i, j});
  } else if (hermitian) {
    for (int i = 0; i < w; ++i) diag_digits.push_back(i);
    for (int i = 0; i < w; ++i)
      for (int j = i + 1; j < w; ++j) pair_digits.push_back({i, j});
  } else {
    for (int i = 0; i < w; ++i)
      for (int j = i + 1; j < w; ++j) pair_digits.push_back({i, j});
  }

  size_t ntail = tail_digits.size(), npair = pair_digits.size(), ndiag = diag_digits.size();
  for (size_t d = 0; d < ntail; ++d) {
    scheme.values.push_back(full_field_codes(F));
    scheme.genvals.push_back(field_gen_codes(F));
  }
  for (size_t d = 0; d < npair; ++d) {
    scheme.values.push_back(full_field_codes(F));
    scheme.genvals.push_back(field_gen_codes(F));
  }
  for (size_t d = 0; d < ndiag; ++d) {
    if (hermitian) {
      auto tz = trace_zero_codes(F);
      scheme.values.push_back(tz);
      scheme.genvals.push_back(std::vector<int>(tz.begin() + 1, tz.begin() + 2));
    } else {
      scheme.values.push_back(full_field_codes(F));
      scheme.genvals.push_back(field_gen_codes(F));
    }
  }

  scheme.build = [&b, &F, w, dim, tail, hermitian, symplectic, tail_digits, pair_digits,
                  diag_digits, ntail, npair](const std::vector<int>& v) {
    PackedMat m = identity_mat(F, dim);
    // tail vectors t_c attached to each e-column
    std::array<Word, 8> t{};
    for (size_t d = 0; d < ntail; ++d)
      if (v[d]) t[tail_digits[d].c] = vset(F, t[tail_digits[d].c], 2 * w + tail_digits[d].r, v[d]);
    for (int c = 0; c < w; ++c)
      for (int r = 0; r < tail; ++r) mset(F, m, 2 * w + r, c, vget(F, t[c], 2 * w + r));

    // f-block coefficients M of the e-columns
    std::array<std::array<int, 8>, 8> M{};
    for (auto& row : M) row.fill(0);
    if (tail > 0) {
      for (int c = 0; c < w; ++c) {
        int hcc = b.bilinear(t[c], t[c]);
        if (hermitian) {
          // solve z + frob(z) = -h(t,t), lexicographically least solution
          int target = F.neg(hcc);
          for (int z = 0; z < F.q(); ++z)
            if (F.add(z, F.frobenius(z)) == target) {
              M[c][c] = z;
              break;
            }
        } else {
          M[c][c] = F.neg(b.quad_value(t[c]));
        }
        for (int k = c + 1; k < w; ++k) M[c][k] = F.neg(b.bilinear(t[c], t[k]));
      }
    }
    for (size_t d = 0; d < npair; ++d) {
      int s = v[ntail + d];
      if (!s) continue;
      int i = pair_digits[d].i, j = pair_digits[d].j;
      M[i][j] = F.add(M[i][j], s);
      int sj = symplectic ? s : (hermitian ? F.frobenius(F.neg(s)) : F.neg(s));
      M[j][i] = F.add(M[j][i], sj);
    }
    for (size_t d = 0; d < diag_digits.size(); ++d) {
      int s = v[ntail + npair + d];
      if (s) M[diag_digits[d]][diag_digits[d]] = F.add(M[diag_digits[d]][diag_digits[d]], s);
    }
    for (int c = 0; c < w; ++c)
      for (int r = 0; r < w; ++r)
        if (M[c][r]) mset(F, m, w + r, c, M[c][r]);

    // tail columns: image of tail basis vector gains f-coefficients
    for (int r = 0; r < tail; ++r) {
      Word tau = vset(F, 0, 2 * w + r, 1);
      for (int i = 0; i < w; ++i) {
        int val = b.bilinear(t[i], tau);
        int coeff = hermitian ? F.frobenius(F.neg(val)) : F.neg(val);
        if (coeff) mset(F, m, w + i, 2 * w + r, coeff);
      }
    }
    return m;
  };
  BuildingFlag fixed = BuildingFlag{{FlagElem{b.element_type(b.f_block(w)), b.f_block(w)}}};
  return realize(b, scheme, fixed);
}

// radical of the span of the last dim-k coordinates, family A
StdUnipotent std_a_radical(const BuildingModel& b, int k) {
  const FieldSpec& F = b.F();
  int dim = b.dim();
  ParamScheme scheme;
  struct D {
    int i, r;
  };
  std::vector<D> ds;
  for (int i = 0; i < k; ++i)
    for (int r = k; r < dim; ++r) ds.push_back({i, r});
  for (size_t d = 0; d < ds.size(); ++d) {
    scheme.values.push_back(full_field_codes(F));
    scheme.genvals.push_back(field_gen_codes(F));
  }
  scheme.build = [&F, dim, ds](const std::vector<int>& v) {
    PackedMat m = identity_mat(F, dim);
    for (size_t d = 0; d < ds.size(); ++d)
      if (v[d]) mset(F, m, ds[d].r, ds[d].i, v[d]);
    return m;
  };
  PackedMat fb;
  fb.cols = static_cast<uint8_t>(dim);
  for (int i = k; i < dim; ++i) fb.r[fb.rows++] = vset(F, 0, i, 1);
  BuildingFlag fixed{{FlagElem{dim - k, Subspace{fb}}}};
  return realize(b, scheme, fixed);
}

// radical of the isotropic point f_1, family C
StdUnipotent std_c_point_radical(const BuildingModel& b) {
  const FieldSpec& F = b.F();
  int w = b.witt(), dim = b.dim();
  std::vector<int> mids;
  for (int i = 1; i < w; ++i) mids.push_back(i);
  for (int i = w + 1; i < dim; ++i) mids.push_back(i);
  ParamScheme scheme;
  for (size_t d = 0; d < mids.size() + 1; ++d) {
    scheme.values.push_back(full_field_codes(F));
    scheme.genvals.push_back(field_gen_codes(F));
  }
  scheme.build = [&b, &F, w, dim, mids](const std::vector<int>& v) {
    PackedMat m = identity_mat(F, dim);
    Word rvec = 0;
    for (size_t d = 0; d < mids.size(); ++d)
      if (v[d]) rvec = vset(F, rvec, mids[d], v[d]);
    // image of e_1: e_1 + r + c f_1
    for (size_t d = 0; d < mids.size(); ++d)
      if (v[d]) mset(F, m, mids[d], 0, v[d]);
    mset(F, m, w, 0, v[mids.size()]);
    // middle basis vectors pick up an f_1 component
    for (int mc : mids) {
      Word basis = vset(F, 0, mc, 1);
      int phi = F.neg(b.bilinear(rvec, basis));
      if (phi) mset(F, m, w, mc, phi);
    }
    return m;
  };
  PackedMat pt;
  pt.cols = static_cast<uint8_t>(dim);
  pt.r[pt.rows++] = vset(F, 0, w, 1);
  BuildingFlag fixed{{FlagElem{1, Subspace{pt}}}};
  return realize(b, scheme, fixed);
}

const StdUnipotent& std_unipotent_cached(const Building& b, const std::string& kind, int k) {
  static std::mutex mu;
  static std::map<std::string, StdUnipotent> cache;
  std::lock_guard<std::mutex> lock(mu);
  std::string key = b->name() + "/" + kind + std::to_string(k);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  StdUnipotent s;
  if (kind == "max")
    s = std_max_radical(*b);
  else if (kind == "a")
    s = std_a_radical(*b, k);
  else if (kind == "cpt")
    s = std_c_point_radical(*b);
  else
    throw contract_violation("unknown radical kind");
  // validated once: closure of the generators recovers every element
  MatrixGroup g(b, s.elems, s.gens);
  if (g.size() != static_cast<int>(s.elems.size()))
    throw contract_violation("duplicate elements in unipotent parametrization");
  if (subgroup_closure(g, g.generators()).size() != static_cast<size_t>(g.size()))
    throw contract_violation("unipotent generators do not generate the radical");
  return cache.emplace(key, std::move(s)).first->second;
}

// symplectic basis completion for a pair of opposite isotropic points
PackedMat c_point_frame(const BuildingModel& b, const Subspace& A, const Subspace& Astar) {
  const FieldSpec& F = b.F();
  int dim = b.dim(), w = b.witt();
  Word a = A.basis.r[0], astar = Astar.basis.r[0];
  int c = b.bilinear(a, astar);
  if (c == 0) throw contract_violation("points are not opposite");
  Word f1 = vscale(F, astar, F.inv(c), dim);

  PackedMat span;
  span.cols = static_cast<uint8_t>(dim);
  span.r[span.rows++] = a;
  span.r[span.rows++] = f1;
  Subspace rest = b.perp(Subspace{span});
  std::vector<Word> basis;
  for (int i = 0; i < rest.basis.rows; ++i) basis.push_back(rest.basis.r[i]);

  std::vector<Word> es{a}, fs{f1};
  while (!basis.empty()) {
    Word u = basis.front();
    basis.erase(basis.begin());
    int vi = -1, s = 0;
    for (size_t i = 0; i < basis.size(); ++i) {
      s = b.bilinear(u, basis[i]);
      if (s) {
        vi = static_cast<int>(i);
        break;
      }
    }
    if (vi < 0) throw contract_violation("degenerate middle space");
    Word v = vscale(F, basis[vi], F.inv(s), dim);
    basis.erase(basis.begin() + vi);
    for (auto& x : basis) {
      // make x orthogonal to the pair (u, v)
      int bxv = b.bilinear(x, v), bxu = b.bilinear(x, u);
      x = vadd(F, x, vscale(F, u, F.neg(bxv), dim), dim);
      x = vadd(F, x, vscale(F, v, bxu, dim), dim);
    }
    es.push_back(u);
    fs.push_back(v);
  }
  PackedMat T;
  T.rows = T.cols = static_cast<uint8_t>(dim);
  for (int i = 0; i < w; ++i)
    for (int r = 0; r < dim; ++r) {
      mset(F, T, r, i, vget(F, es[i], r));
      mset(F, T, r, w + i, vget(F, fs[i], r));
    }
  if (!b.preserves_form(T)) throw contract_violation("point frame does not preserve the form");
  return T;
}

}  // namespace

std::shared_ptr<const MatrixGroup> unipotent_radical(const Building& b, const BuildingFlag& Astar) {
  if (Astar.elems.size() != 1)
    throw unsupported_error("unipotent radicals are supported for single-element flags only");
  const FieldSpec& F = b->F();
  const FlagElem& as = Astar.elems[0];
  int t = as.type;
  char fam = b->family();

  const StdUnipotent* std_u = nullptr;
  PackedMat T = identity_mat(F, b->dim());
  bool need_frame = true;

  if (fam == 'A') {
    int k = b->dim() - t;
    std_u = &std_unipotent_cached(b, "a", k);
    // any complement works as the opposite flag of the frame
    const Subspace* A = nullptr;
    for (const auto& m : b->elements_of_type(b->opposite_type(t)))
      if (intersection_dim(F, m, as.sub) == 0) {
        A = &m;
        break;
      }
    if (!A) throw contract_violation("no complement found");
    T = b->adapted_frame(*A, as.sub);
  } else if (fam == 'C' && t == 1) {
    std_u = &std_unipotent_cached(b, "cpt", 0);
    const Subspace* A = nullptr;
    for (const auto& m : b->elements_of_type(1))
      if (b->bilinear(m.basis.r[0], as.sub.basis.r[0]) != 0) {
        A = &m;
        break;
      }
    if (!A) throw contract_violation("no opposite point found");
    if (as.sub == b->f_block(1) && *A == b->e_block(1))
      need_frame = false;
    else
      T = c_point_frame(*b, *A, as.sub);
  } else if (as.sub.dim() == b->witt() &&
             (fam == 'C' || fam == 'B' || fam == 'D' || fam == 'a' || fam == 'd')) {
    std_u = &std_unipotent_cached(b, "max", 0);
    if (as.sub == b->f_block(b->witt())) {
      need_frame = false;
    } else {
      const Subspace* A = nullptr;
      int opt = b->opposite_type(t);
      for (const auto& m : b->elements_of_type(opt)) {
        BuildingFlag f = flag_of(*b, m);
        if (b->is_opposite(f, Astar)) {
          A = &m;
          break;
        }
      }
      if (!A) throw contract_violation("no opposite flag found");
      T = b->adapted_frame(*A, as.sub);
    }
  } else {
    throw unsupported_error("unipotent radical not supported for " + b->name() + " type " +
                            std::to_string(t));
  }

  std::vector<PackedMat> elems, gens;
  if (!need_frame && fam != 'A') {
    elems = std_u->elems;
    gens = std_u->gens;
  } else {
    auto Tinv = mat_inverse(F, T);
    if (!Tinv) throw contract_violation("frame not invertible");
    auto conj = [&](const PackedMat& m) { return mat_mul(F, mat_mul(F, T, m), *Tinv); };
    for (const auto& m : std_u->elems) elems.push_back(conj(m));
    for (const auto& m : std_u->gens) gens.push_back(conj(m));
  }
  return std::make_shared<MatrixGroup>(b, std::move(elems), std::move(gens));
}

// ---------------------------------------------------------------------------
// the representation in the unipotent radical

namespace {

bool fixes_flag(const BuildingModel& b, const PackedMat& m, const BuildingFlag& f) {
  GroupElement g{m};
  for (const auto& e : f.elems)
    if (!(apply(b, g, e.sub) == e.sub)) return false;
  return true;
}

std::optional<int> common_prime(const GroupEmbedding& e) {
  int p = 0;
  for (auto& img : e.point_images) {
    size_t s = img.size();
    bool prime = s >= 2;
    for (size_t d = 2; d * d <= s; ++d)
      if (s % d == 0) prime = false;
    if (!prime) return std::nullopt;
    if (p == 0) p = static_cast<int>(s);
    if (static_cast<size_t>(p) != s) return std::nullopt;
  }
  return p == 0 ? std::nullopt : std::optional<int>(p);
}

}  // namespace

UnipotentRep unipotent_rep(const Building& b, int j, const BuildingFlag& A,
                           const BuildingFlag& Astar) {
  if (!b->is_opposite(A, Astar)) throw contract_violation("base flags are not opposite");
  if (!star_condition(*b, j))
    throw contract_violation("the residue-parameter condition fails for this shadow type");
  UnipotentRep rep;
  rep.building = b;
  rep.j = j;
  rep.A = A;
  rep.Astar = Astar;
  rep.local = local_geometry(b, j, A);
  rep.U = unipotent_radical(b, Astar);

  auto filter = [&](const BuildingFlag& f) {
    std::vector<int> img;
    for (int i = 0; i < rep.U->size(); ++i)
      if (fixes_flag(*b, rep.U->mat(i), f)) img.push_back(i);
    return img;
  };
  rep.emb.geom = rep.local.geom;
  rep.emb.codomain = rep.U;
  for (auto& f : rep.local.point_flags) rep.emb.point_images.push_back(filter(f));
  for (auto& f : rep.local.line_flags) rep.emb.line_images.push_back(filter(f));
  rep.emb.abelian = is_abelian(*rep.U);
  rep.emb.prime = common_prime(rep.emb);
  return rep;
}

UnipotentRep unipotent_rep(const Building& b, int j) {
  auto [A, Astar] = b->standard_pair(j);
  return unipotent_rep(b, j, A, Astar);
}

// ---------------------------------------------------------------------------
// axiom and quotient checks

namespace {

std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool sorted_contains(const std::vector<int>& big, const std::vector<int>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

EmbeddingReport check_axioms(const GroupEmbedding& e) {
  EmbeddingReport rep;
  const FiniteGroup& G = *e.codomain;
  int id = G.identity();
  auto add = [&](const std::string& name, bool pass, const std::string& witness) {
    rep.checks.push_back({name, pass, pass ? "" : witness});
  };

  {
    bool ok = true;
    std::string w;
    for (size_t p = 0; p < e.point_images.size() && ok; ++p)
      if (e.point_images[p].size() < 2) {
        ok = false;
        w = "point " + std::to_string(p) + " has a trivial image";
      }
    for (size_t p = 0; p < e.point_images.size() && ok; ++p)
      for (size_t q = p + 1; q < e.point_images.size() && ok; ++q) {
        auto meet = sorted_intersection(e.point_images[p], e.point_images[q]);
        if (meet != std::vector<int>{id}) {
          ok = false;
          w = "points " + std::to_string(p) + "," + std::to_string(q) + " share a nontrivial element";
        }
      }
    add("E1 distinct points meet trivially", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (size_t p = 0; p < e.point_images.size() && ok; ++p)
      for (size_t l = 0; l < e.line_images.size() && ok; ++l) {
        bool on = std::binary_search(e.geom.lines[l].begin(), e.geom.lines[l].end(),
                                     static_cast<int>(p));
        bool inside = sorted_contains(e.line_images[l], e.point_images[p]);
        if (on != inside) {
          ok = false;
          w = "point " + std::to_string(p) + " vs line " + std::to_string(l);
        }
      }
    add("E2 containment matches incidence", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (size_t l = 0; l < e.line_images.size() && ok; ++l) {
      std::vector<int> gens;
      for (int p : e.geom.lines[l])
        gens.insert(gens.end(), e.point_images[p].begin(), e.point_images[p].end());
      if (subgroup_closure(G, gens) != e.line_images[l]) {
        ok = false;
        w = "line " + std::to_string(l) + " is not generated by its points";
      }
    }
    add("E3 lines generated by their points", ok, w);
  }
  {
    std::vector<int> gens;
    for (auto& img : e.point_images) gens.insert(gens.end(), img.begin(), img.end());
    bool ok = static_cast<int>(subgroup_closure(G, gens).size()) == G.size();
    add("E4 point images generate the codomain", ok, "proper subgroup generated");
  }
  return rep;
}

QuotientCheck quotient_check(const GroupEmbedding& e, const std::vector<int>& n) {
  const FiniteGroup& G = *e.codomain;
  QuotientCheck out;
  out.n_order = static_cast<long>(n.size());
  out.normal = is_normal(G, n);
  if (!out.normal) throw contract_violation("quotient_check requires a normal subgroup");

  std::vector<int> idonly{G.identity()};
  auto check_q1 = [&](const std::vector<int>& img, const std::string& what) {
    if (!out.q1) return;
    auto meet = sorted_intersection(img, n);
    if (meet != idonly) {
      out.q1 = false;
      out.q1_witness = what + " meets N in " + std::to_string(meet.size()) + " elements";
    }
  };
  for (size_t p = 0; p < e.point_images.size(); ++p)
    check_q1(e.point_images[p], "point " + std::to_string(p));
  for (size_t l = 0; l < e.line_images.size(); ++l)
    check_q1(e.line_images[l], "line " + std::to_string(l));

  auto coset_set = [&](const std::vector<int>& img) {
    std::set<int> s;
    for (int x : img)
      for (int y : n) s.insert(G.mult(x, y));
    return s;
  };
  std::set<int> nset(n.begin(), n.end());
  for (size_t p = 0; p < e.point_images.size() && out.q2; ++p)
    for (size_t q = p + 1; q < e.point_images.size() && out.q2; ++q) {
      if (e.geom.collinear(static_cast<int>(p), static_cast<int>(q))) continue;
      auto sp = coset_set(e.point_images[p]);
      auto sq = coset_set(e.point_images[q]);
      std::set<int> meet;
      std::set_intersection(sp.begin(), sp.end(), sq.begin(), sq.end(),
                            std::inserter(meet, meet.begin()));
      if (meet != nset) {
        out.q2 = false;
        out.q2_witness =
            "non-collinear points " + std::to_string(p) + "," + std::to_string(q);
      }
    }

  if (out.q1 && out.q2) {
    // cosets of N, represented by their least member
    std::vector<int> coset_of(G.size(), -1);
    std::vector<int> reps;
    for (int g = 0; g < G.size(); ++g) {
      if (coset_of[g] >= 0) continue;
      int c = static_cast<int>(reps.size());
      reps.push_back(g);
      for (int x : n) coset_of[G.mult(g, x)] = c;
    }
    int m = static_cast<int>(reps.size());
    std::vector<std::vector<int>> table(m, std::vector<int>(m));
    for (int a = 0; a < m; ++a)
      for (int b2 = 0; b2 < m; ++b2) table[a][b2] = coset_of[G.mult(reps[a], reps[b2])];
    std::vector<int> qgens;
    for (int s : G.generators()) qgens.push_back(coset_of[s]);
    std::sort(qgens.begin(), qgens.end());
    qgens.erase(std::unique(qgens.begin(), qgens.end()), qgens.end());
    auto qg = std::make_shared<CayleyGroup>(std::move(table), coset_of[G.identity()], qgens);

    GroupEmbedding q;
    q.geom = e.geom;
    q.codomain = qg;
    auto project = [&](const std::vector<int>& img) {
      std::set<int> s;
      for (int x : img) s.insert(coset_of[x]);
      return std::vector<int>(s.begin(), s.end());
    };
    for (auto& img : e.point_images) q.point_images.push_back(project(img));
    for (auto& img : e.line_images) q.line_images.push_back(project(img));
    q.abelian = is_abelian(*qg);
    q.prime = common_prime(q);
    out.quotient = std::move(q);
  }
  return out;
}

// ---------------------------------------------------------------------------

SharpTransitivityReport sharp_transitivity_check(const UnipotentRep& rep) {
  SharpTransitivityReport out;
  const BuildingModel& b = *rep.building;
  out.u_order = rep.U->size();

  std::vector<BuildingFlag> op;
  for (const auto& m : b.elements_of_type(rep.j)) {
    BuildingFlag f = flag_of(b, m);
    if (b.is_opposite(f, rep.Astar)) op.push_back(f);
  }
  std::sort(op.begin(), op.end());
  out.op_count = static_cast<long>(op.size());

  std::vector<BuildingFlag> orbit;
  for (int i = 0; i < rep.U->size(); ++i)
    orbit.push_back(apply(b, GroupElement{rep.U->mat(i)}, rep.A));
  std::sort(orbit.begin(), orbit.end());
  bool free = std::adjacent_find(orbit.begin(), orbit.end()) == orbit.end();
  out.orbit_regular = free && orbit == op;
  if (!out.orbit_regular) {
    out.failure = !free ? "nontrivial stabilizer of the base flag" : "orbit differs from op(A*)";
    out.refined_regular = false;
    return out;
  }

  out.refined_regular = true;
  auto refined = [&](const BuildingFlag& fx, const std::vector<int>& img, const std::string& what) {
    if (!out.refined_regular) return;
    std::vector<BuildingFlag> opf;
    for (const auto& p : op)
      if (flags_compatible(b, fx, p)) opf.push_back(p);
    std::vector<BuildingFlag> orb;
    for (int u : img) orb.push_back(apply(b, GroupElement{rep.U->mat(u)}, rep.A));
    std::sort(orb.begin(), orb.end());
    bool f2 = std::adjacent_find(orb.begin(), orb.end()) == orb.end();
    if (!f2 || orb != opf) {
      out.refined_regular = false;
      out.failure = "flag-refined regularity fails at " + what;
    }
  };
  for (size_t i = 0; i < rep.local.point_flags.size(); ++i)
    refined(rep.local.point_flags[i], rep.emb.point_images[i], "point " + std::to_string(i));
  for (size_t i = 0; i < rep.local.line_flags.size(); ++i)
    refined(rep.local.line_flags[i], rep.emb.line_images[i], "line " + std::to_string(i));
  return out;
}

RestrictionResult restrict_embedding(const UnipotentRep& rep, const BuildingFlag& f0) {
  const BuildingModel& b = *rep.building;
  RestrictionResult out;

  // drop any members of A itself; an empty remainder restricts nothing
  BuildingFlag f;
  for (const auto& e : f0.elems)
    if (std::find(rep.A.elems.begin(), rep.A.elems.end(), e) == rep.A.elems.end())
      f.elems.push_back(e);
  if (f.empty()) {
    out.identity = true;
    out.emb = rep.emb;
    for (int i = 0; i < rep.U->size(); ++i) out.parent_indices.push_back(i);
    out.equals_flag_stabilizer = true;
    out.point_flags = rep.local.point_flags;
    out.line_flags = rep.local.line_flags;
    return out;
  }
  if (!flags_compatible(b, f, rep.A)) throw contract_violation("flag is not incident to A");

  // the component of j in the diagram minus tau(F) must keep rank >= 3
  std::set<int> cut;
  for (auto& e : f.elems) cut.insert(e.type);
  std::set<int> comp{rep.j};
  std::vector<int> stack{rep.j};
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    for (int nb : b.diagram_neighbors(t))
      if (!cut.count(nb) && !comp.count(nb)) {
        comp.insert(nb);
        stack.push_back(nb);
      }
  }
  if (comp.size() < 3) throw unsupported_error("residue rank below 3");

  std::vector<int> kept_points;
  for (size_t i = 0; i < rep.local.point_flags.size(); ++i)
    if (flags_compatible(b, rep.local.point_flags[i], f)) kept_points.push_back(static_cast<int>(i));
  std::vector<int> kept_lines;
  for (size_t i = 0; i < rep.local.line_flags.size(); ++i) {
    if (!comp.count(rep.local.line_second_type[i])) continue;
    if (flags_compatible(b, rep.local.line_flags[i], f)) kept_lines.push_back(static_cast<int>(i));
  }

  std::vector<int> point_index(rep.local.point_flags.size(), -1);
  for (size_t i = 0; i < kept_points.size(); ++i) point_index[kept_points[i]] = static_cast<int>(i);

  // the restricted codomain: the subgroup generated by the kept point images
  std::vector<int> gens;
  for (int p : kept_points)
    gens.insert(gens.end(), rep.emb.point_images[p].begin(), rep.emb.point_images[p].end());
  out.parent_indices = subgroup_closure(*rep.U, gens);

  std::vector<int> stab;
  for (int i = 0; i < rep.U->size(); ++i)
    if (fixes_flag(b, rep.U->mat(i), f)) stab.push_back(i);
  out.equals_flag_stabilizer = stab == out.parent_indices;

  std::vector<PackedMat> mats, gmats;
  for (int i : out.parent_indices) mats.push_back(rep.U->mat(i));
  for (int p : kept_points)
    for (int g : rep.emb.point_images[p])
      if (g != rep.U->identity()) gmats.push_back(rep.U->mat(g));
  auto sub = std::make_shared<MatrixGroup>(rep.building, mats, gmats);

  out.emb.geom.num_points = static_cast<int>(kept_points.size());
  for (int l : kept_lines) {
    std::vector<int> pts;
    for (int p : rep.emb.geom.lines[l]) {
      if (point_index[p] < 0) throw contract_violation("restricted line leaves the restriction");
      pts.push_back(point_index[p]);
    }
    std::sort(pts.begin(), pts.end());
    out.emb.geom.lines.push_back(pts);
  }
  out.emb.codomain = sub;
  auto remap = [&](const std::vector<int>& img) {
    std::vector<int> r;
    for (int g : img) {
      int s = sub->index_of(rep.U->mat(g));
      if (s < 0) throw contract_violation("restricted image not inside the restricted codomain");
      r.push_back(s);
    }
    std::sort(r.begin(), r.end());
    return r;
  };
  for (int p : kept_points) {
    out.emb.point_images.push_back(remap(rep.emb.point_images[p]));
    out.point_flags.push_back(rep.local.point_flags[p]);
  }
  for (int l : kept_lines) {
    out.emb.line_images.push_back(remap(rep.emb.line_images[l]));
    out.line_flags.push_back(rep.local.line_flags[l]);
  }
  out.emb.abelian = is_abelian(*sub);
  out.emb.prime = common_prime(out.emb);
  return out;
}

AbelianizationReport abelianization_check(const UnipotentRep& rep) {
  AbelianizationReport out;
  std::vector<int> derived = derived_subgroup(*rep.U);
  out.derived_order = static_cast<long>(derived.size());

  QuotientCheck qc = quotient_check(rep.emb, derived);
  out.b1 = qc.q1;
  out.b1_witness = qc.q1_witness;
  out.b2 = qc.q2;
  out.b2_witness = qc.q2_witness;

  // structure of U/U' and the image dimensions, independent of B1/B2
  std::vector<int> coset_of(rep.U->size(), -1);
  std::vector<int> reps;
  for (int g = 0; g < rep.U->size(); ++g) {
    if (coset_of[g] >= 0) continue;
    int c = static_cast<int>(reps.size());
    reps.push_back(g);
    for (int x : derived) coset_of[rep.U->mult(g, x)] = c;
  }
  int m = static_cast<int>(reps.size());
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  for (int a = 0; a < m; ++a)
    for (int b2 = 0; b2 < m; ++b2) table[a][b2] = coset_of[rep.U->mult(reps[a], reps[b2])];
  std::vector<int> qgens;
  for (int s : rep.U->generators()) qgens.push_back(coset_of[s]);
  std::sort(qgens.begin(), qgens.end());
  qgens.erase(std::unique(qgens.begin(), qgens.end()), qgens.end());
  CayleyGroup quot(std::move(table), coset_of[rep.U->identity()], qgens);

  int p = rep.building->F().p();
  out.b3 = is_elementary_abelian_group(quot, p);

  auto dim_of = [&](const std::vector<int>& img) {
    std::set<int> cosets;
    for (int x : img) cosets.insert(coset_of[x]);
    size_t s = cosets.size();
    int d = 0;
    while (s > 1) {
      s /= p;
      ++d;
    }
    return d;
  };
  out.b4 = true;
  for (auto& img : rep.emb.point_images) {
    out.point_dims.push_back(dim_of(img));
    if (out.point_dims.back() != 1) out.b4 = false;
  }
  for (auto& img : rep.emb.line_images) {
    out.line_dims.push_back(dim_of(img));
    if (out.line_dims.back() != 2) out.b4 = false;
  }
  if (qc.defines_quotient()) out.abelianization = qc.quotient;
  return out;
}

std::vector<int> tail_fixing_subgroup(const UnipotentRep& rep) {
  const BuildingModel& b = *rep.building;
  Subspace tail = b.perp(span_of(b.F(), rep.A.elems[0].sub, rep.Astar.elems[0].sub));
  std::vector<int> out;
  for (int i = 0; i < rep.U->size(); ++i) {
    bool fixes = true;
    for (int r = 0; r < tail.basis.rows && fixes; ++r)
      if (mat_vec(b.F(), rep.U->mat(i), tail.basis.r[r]) != tail.basis.r[r]) fixes = false;
    if (fixes) out.push_back(i);
  }
  return out;
}

std::optional<EmbeddingIso> embedding_isomorphism(const GroupEmbedding& e1,
                                                  const GroupEmbedding& e2) {
  if (e1.codomain->size() != e2.codomain->size()) return std::nullopt;
  if (!e1.prime || !e2.prime || *e1.prime != *e2.prime) return std::nullopt;
  std::vector<int> gamma = find_geometry_isomorphism(e1.geom, e2.geom);
  if (gamma.empty() && e1.geom.num_points > 0) return std::nullopt;
  int p = *e1.prime;
  const FiniteGroup& G1 = *e1.codomain;
  const FiniteGroup& G2 = *e2.codomain;

  // line map induced by gamma
  std::map<std::vector<int>, int> line_of;
  for (size_t l = 0; l < e2.geom.lines.size(); ++l) line_of[e2.geom.lines[l]] = static_cast<int>(l);
  std::vector<int> line_gamma(e1.geom.lines.size(), -1);
  for (size_t l = 0; l < e1.geom.lines.size(); ++l) {
    std::vector<int> img;
    for (int q : e1.geom.lines[l]) img.push_back(gamma[q]);
    std::sort(img.begin(), img.end());
    auto it = line_of.find(img);
    if (it == line_of.end()) return std::nullopt;
    line_gamma[l] = it->second;
  }

  auto gen_of = [](const GroupEmbedding& e, int x) {
    const auto& img = e.point_images[x];
    for (int g : img)
      if (g != e.codomain->identity()) return g;
    return e.codomain->identity();
  };

  // map point generators, then extend multiplicatively over the Cayley graph;
  // for odd p also try the uniform power twists of the target generators
  for (int k = 1; k < std::max(2, p); ++k) {
    std::vector<int> m(G1.size(), -1);
    m[G1.identity()] = G2.identity();
    std::vector<int> queue{G1.identity()};
    bool ok = true;
    std::vector<std::pair<int, int>> genpairs;
    for (int x = 0; x < e1.geom.num_points; ++x) {
      int a = gen_of(e1, x);
      int bgen = gen_of(e2, gamma[x]);
      int t = bgen;
      for (int i = 1; i < k; ++i) t = G2.mult(t, bgen);
      genpairs.emplace_back(a, t);
    }
    for (size_t qi = 0; qi < queue.size() && ok; ++qi) {
      int g = queue[qi];
      for (auto& [a, t] : genpairs) {
        int h = G1.mult(g, a);
        int target = G2.mult(m[g], t);
        if (m[h] < 0) {
          m[h] = target;
          queue.push_back(h);
        } else if (m[h] != target) {
          ok = false;
          break;
        }
      }
    }
    if (!ok) continue;
    if (queue.size() != static_cast<size_t>(G1.size())) continue;  // gens do not reach everything
    std::vector<char> hit(G2.size(), 0);
    bool inj = true;
    for (int x : m) {
      if (x < 0 || hit[x]) {
        inj = false;
        break;
      }
      hit[x] = 1;
    }
    if (!inj) continue;
    // image subgroups must match elementwise
    auto image_ok = [&](const std::vector<int>& src, const std::vector<int>& dst) {
      std::vector<int> img;
      for (int x : src) img.push_back(m[x]);
      std::sort(img.begin(), img.end());
      return img == dst;
    };
    bool match = true;
    for (int x = 0; x < e1.geom.num_points && match; ++x)
      match = image_ok(e1.point_images[x], e2.point_images[gamma[x]]);
    for (size_t l = 0; l < e1.geom.lines.size() && match; ++l)
      match = image_ok(e1.line_images[l], e2.line_images[line_gamma[l]]);
    if (!match) continue;
    return EmbeddingIso{gamma, m};
  }
  return std::nullopt;
}

}  // namespace bge
