#include "bge/hull.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace bge {

namespace {

constexpr int32_t kUndef = -1;

struct Enumerator {
  int ncols;
  long max_cosets;
  std::vector<int32_t> table;  // ncosets x ncols
  std::vector<int32_t> rep;    // union-find towards smaller numbers
  long live = 0, high_water = 0, defined = 0;
  std::vector<int32_t> queue;  // dead cosets awaiting row transfer

  explicit Enumerator(int ncols_, long max_) : ncols(ncols_), max_cosets(max_) { new_coset(); }

  int32_t& at(long c, int col) { return table[c * ncols + col]; }

  long new_coset() {
    if (defined >= max_cosets) throw std::overflow_error("coset limit");
    long c = defined++;
    table.resize((c + 1) * ncols, kUndef);
    rep.push_back(static_cast<int32_t>(c));
    ++live;
    high_water = std::max(high_water, live);
    return c;
  }

  int32_t find(int32_t c) {
    while (rep[c] != c) {
      rep[c] = rep[rep[c]];
      c = rep[c];
    }
    return c;
  }

  void merge(int32_t a, int32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    rep[b] = a;
    --live;
    queue.push_back(b);
  }

  void coincidence(int32_t a, int32_t b) {
    merge(a, b);
    while (!queue.empty()) {
      int32_t e = queue.back();
      queue.pop_back();
      for (int c = 0; c < ncols; ++c) {
        int32_t f = at(e, c);
        if (f == kUndef) continue;
        at(e, c) = kUndef;
        int inv = c ^ 1;
        if (at(f, inv) == e) at(f, inv) = kUndef;
        int32_t e1 = find(e), f1 = find(f);
        if (at(e1, c) != kUndef)
          merge(f1, at(e1, c));
        else if (at(f1, inv) != kUndef)
          merge(e1, at(f1, inv));
        else {
          at(e1, c) = f1;
          at(f1, inv) = e1;
        }
      }
    }
  }

  // scan the relator (as a column word) at alpha, defining cosets to fill
  void scan_and_fill(int32_t alpha, const std::vector<int>& w) {
    int32_t f = alpha, b = alpha;
    int i = 0, j = static_cast<int>(w.size()) - 1;
    for (;;) {
      while (i <= j && at(f, w[i]) != kUndef) f = at(f, w[i++]);
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && at(b, w[j] ^ 1) != kUndef) b = at(b, w[j--] ^ 1);
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (j == i) {
        at(f, w[i]) = b;
        at(b, w[i] ^ 1) = f;
        return;
      }
      long n = new_coset();
      at(f, w[i]) = static_cast<int32_t>(n);
      at(n, w[i] ^ 1) = f;
      f = static_cast<int32_t>(n);
      ++i;
    }
  }
};

std::vector<int> to_columns(const std::vector<int>& relator) {
  std::vector<int> w;
  for (int s : relator) {
    if (s == 0) throw contract_violation("zero letter in relator");
    int g = std::abs(s) - 1;
    w.push_back(2 * g + (s < 0 ? 1 : 0));
  }
  return w;
}

}  // namespace

ToddCoxeterResult todd_coxeter(const Presentation& pres, long max_cosets) {
  ToddCoxeterResult out;
  for (size_t g = 0; g < static_cast<size_t>(pres.ngens); ++g) {
    bool seen = false;
    for (auto& r : pres.relators)
      for (int s : r)
        if (std::abs(s) - 1 == static_cast<int>(g)) seen = true;
    if (!seen) throw contract_violation("generator " + std::to_string(g + 1) + " occurs in no relator");
  }
  std::vector<std::vector<int>> words;
  for (auto& r : pres.relators) words.push_back(to_columns(r));

  Enumerator en(2 * pres.ngens, max_cosets);
  try {
    for (long a = 0; a < en.defined; ++a) {
      if (en.find(static_cast<int32_t>(a)) != a) continue;
      for (auto& w : words) {
        en.scan_and_fill(static_cast<int32_t>(a), w);
        if (en.find(static_cast<int32_t>(a)) != a) break;  // the row died
      }
    }
  } catch (const std::overflow_error&) {
    out.status = TCStatus::overflowed;
    out.high_water = en.high_water;
    out.defined = en.defined;
    return out;
  }

  // compress: renumber live cosets in increasing order
  std::vector<int32_t> renum(en.defined, kUndef);
  long n = 0;
  for (long c = 0; c < en.defined; ++c)
    if (en.find(static_cast<int32_t>(c)) == c) renum[c] = static_cast<int32_t>(n++);
  CosetTable t;
  t.ngens = pres.ngens;
  t.coset_count = n;
  t.entries.assign(n * 2 * pres.ngens, kUndef);
  for (long c = 0; c < en.defined; ++c) {
    if (renum[c] == kUndef) continue;
    for (int col = 0; col < 2 * pres.ngens; ++col) {
      int32_t x = en.at(c, col);
      if (x == kUndef) throw contract_violation("incomplete table after enumeration");
      t.entries[renum[c] * 2 * pres.ngens + col] = renum[en.find(x)];
    }
  }
  out.status = TCStatus::complete;
  out.order = static_cast<unsigned long>(n);
  out.high_water = en.high_water;
  out.defined = en.defined;
  out.table = std::move(t);
  return out;
}

std::string table_hash(const ToddCoxeterResult& r) {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&](uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<uint64_t>(r.table.ngens));
  mix(static_cast<uint64_t>(r.table.coset_count));
  for (int32_t e : r.table.entries) mix(static_cast<uint64_t>(static_cast<uint32_t>(e)));
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

bool is_elementary_abelian(const ToddCoxeterResult& r, const Presentation& pres) {
  if (r.status != TCStatus::complete) return false;
  long n = r.table.coset_count;
  int p = pres.orders.empty() ? 2 : pres.orders[0];
  for (int o : pres.orders)
    if (o != p) return false;
  auto act = [&](long c, int g) { return r.table.at(c, 2 * g); };
  for (int g = 0; g < pres.ngens; ++g)
    for (long c = 0; c < n; ++c) {
      long x = c;
      for (int i = 0; i < p; ++i) x = act(x, g);
      if (x != c) return false;
    }
  for (int g = 0; g < pres.ngens; ++g)
    for (int h2 = g + 1; h2 < pres.ngens; ++h2)
      for (long c = 0; c < n; ++c)
        if (act(act(c, g), h2) != act(act(c, h2), g)) return false;
  return true;
}

// ---------------------------------------------------------------------------

namespace {

struct LineRelations {
  // kernel basis rows over the points of one line
  std::vector<std::vector<uint8_t>> rows;  // length = #points on the line
};

LineRelations line_relations(const GroupEmbedding& e, size_t l, int p) {
  const FiniteGroup& G = *e.codomain;
  const auto& pts = e.geom.lines[l];
  int k = static_cast<int>(pts.size());
  std::vector<int> gens;
  for (int q : pts) {
    const auto& img = e.point_images[q];
    int g = G.identity();
    for (int x : img)
      if (x != G.identity()) {
        g = x;
        break;
      }
    gens.push_back(g);
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (G.mult(gens[i], gens[j]) != G.mult(gens[j], gens[i]))
        throw unsupported_error("line image is not abelian; the reduced presentation does not apply");

  // brute force the combination lattice: p^k evaluations
  long total = 1;
  for (int i = 0; i < k; ++i) {
    total *= p;
    if (total > (1L << 20)) throw resource_error("line too long for relation search");
  }
  FpMat kernel(p, 0, k);
  for (long code = 1; code < total; ++code) {
    long c = code;
    std::vector<uint8_t> combo(k);
    int x = G.identity();
    for (int i = 0; i < k; ++i) {
      combo[i] = static_cast<uint8_t>(c % p);
      c /= p;
      for (int t = 0; t < combo[i]; ++t) x = G.mult(x, gens[i]);
    }
    if (x == G.identity()) {
      kernel.a.insert(kernel.a.end(), combo.begin(), combo.end());
      ++kernel.rows;
    }
  }
  fp_rref(kernel);
  LineRelations out;
  for (int r = 0; r < kernel.rows; ++r) {
    std::vector<uint8_t> row(k);
    for (int c = 0; c < k; ++c) row[c] = kernel.at(r, c);
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

FpMat line_relation_matrix(const GroupEmbedding& e) {
  if (!e.prime) throw unsupported_error("point images are not cyclic of prime order");
  int p = *e.prime;
  FpMat m(p, 0, e.geom.num_points);
  for (size_t l = 0; l < e.geom.lines.size(); ++l) {
    auto rel = line_relations(e, l, p);
    for (auto& row : rel.rows) {
      std::vector<uint8_t> full(e.geom.num_points, 0);
      for (size_t i = 0; i < e.geom.lines[l].size(); ++i) full[e.geom.lines[l][i]] = row[i];
      m.a.insert(m.a.end(), full.begin(), full.end());
      ++m.rows;
    }
  }
  return m;
}

Presentation build_presentation(const GroupEmbedding& e) {
  if (!e.prime) throw unsupported_error("point images are not cyclic of prime order");
  int p = *e.prime;
  Presentation pres;
  pres.ngens = e.geom.num_points;
  pres.orders.assign(pres.ngens, p);
  pres.gen_point.resize(pres.ngens);
  std::iota(pres.gen_point.begin(), pres.gen_point.end(), 0);

  for (int g = 1; g <= pres.ngens; ++g) pres.relators.push_back(std::vector<int>(p, g));
  for (auto& line : e.geom.lines)
    for (size_t i = 0; i < line.size(); ++i)
      for (size_t j = i + 1; j < line.size(); ++j) {
        int a = line[i] + 1, b = line[j] + 1;
        pres.relators.push_back({a, b, -a, -b});
      }
  for (size_t l = 0; l < e.geom.lines.size(); ++l) {
    auto rel = line_relations(e, l, p);
    for (auto& row : rel.rows) {
      std::vector<int> word;
      for (size_t i = 0; i < row.size(); ++i)
        for (int t = 0; t < row[i]; ++t) word.push_back(e.geom.lines[l][i] + 1);
      if (!word.empty()) pres.relators.push_back(std::move(word));
    }
  }
  return pres;
}

int abelian_hull_dim(const GroupEmbedding& e) {
  FpMat m = line_relation_matrix(e);
  return e.geom.num_points - fp_rank(m);
}

Rational cover_degree(unsigned long hull_order, long codomain_order) {
  long num = static_cast<long>(hull_order), den = codomain_order;
  long g = std::gcd(num, den);
  return Rational{num / g, den / g};
}

Rational cover_degree(const ToddCoxeterResult& hull, const UnipotentRep& rep) {
  if (hull.status != TCStatus::complete)
    throw resource_error("coset enumeration did not complete");
  return cover_degree(hull.order, rep.U->size());
}

// ---------------------------------------------------------------------------

std::string amalgam_to_string(const Presentation& p) {
  std::ostringstream os;
  os << "AMG 1\n";
  os << "gens " << p.ngens << "\n";
  os << "orders";
  for (int o : p.orders) os << " " << o;
  os << "\n";
  os << "relators " << p.relators.size() << "\n";
  for (auto& r : p.relators) {
    for (size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << r[i];
    os << "\n";
  }
  return os.str();
}

Presentation amalgam_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next = [&](std::string& out) {
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      out = line;
      return true;
    }
    return false;
  };
  Presentation p;
  std::string l;
  if (!next(l) || l.rfind("AMG 1", 0) != 0) throw contract_violation("bad amalgam header");
  if (!next(l)) throw contract_violation("truncated amalgam file");
  {
    std::istringstream ls(l);
    std::string kw;
    ls >> kw >> p.ngens;
    if (kw != "gens" || p.ngens <= 0) throw contract_violation("bad gens line");
  }
  if (!next(l)) throw contract_violation("truncated amalgam file");
  {
    std::istringstream ls(l);
    std::string kw;
    ls >> kw;
    if (kw != "orders") throw contract_violation("bad orders line");
    int o;
    while (ls >> o) p.orders.push_back(o);
    if (static_cast<int>(p.orders.size()) != p.ngens)
      throw contract_violation("order count mismatch");
  }
  long nrel = 0;
  if (!next(l)) throw contract_violation("truncated amalgam file");
  {
    std::istringstream ls(l);
    std::string kw;
    ls >> kw >> nrel;
    if (kw != "relators") throw contract_violation("bad relators line");
  }
  for (long i = 0; i < nrel; ++i) {
    if (!next(l)) throw contract_violation("truncated amalgam file");
    std::istringstream ls(l);
    std::vector<int> w;
    int s;
    while (ls >> s) {
      if (s == 0 || std::abs(s) > p.ngens) throw contract_violation("relator letter out of range");
      w.push_back(s);
    }
    p.relators.push_back(std::move(w));
  }
  p.gen_point.assign(p.ngens, -1);
  return p;
}

}  // namespace bge
