#include "bge/veronese.hpp"

#include <algorithm>

namespace bge {

namespace {

bool is_prime_int(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// geometry of points and lines of a building, in canonical element order
PointLineGeometry point_line_truncation(const BuildingModel& b) {
  PointLineGeometry g;
  const auto& pts = b.isotropic(1);
  g.num_points = static_cast<int>(pts.size());
  for (const auto& l : b.isotropic(2)) {
    std::vector<int> row;
    for (size_t i = 0; i < pts.size(); ++i)
      if (contains(b.F(), l, pts[i])) row.push_back(static_cast<int>(i));
    g.lines.push_back(std::move(row));
  }
  return g;
}

std::vector<int> span_of_element(const FiniteGroup& G, int g) {
  std::vector<int> img{G.identity()};
  int x = g;
  while (x != G.identity()) {
    img.push_back(x);
    x = G.mult(x, g);
  }
  std::sort(img.begin(), img.end());
  return img;
}

void finish_embedding(GroupEmbedding& e, const std::shared_ptr<AdditiveGroup>& G,
                      const std::vector<int>& point_elems) {
  e.codomain = G;
  for (int pe : point_elems) e.point_images.push_back(span_of_element(*G, pe));
  for (auto& line : e.geom.lines) {
    std::vector<int> gens;
    for (int p : line)
      gens.insert(gens.end(), e.point_images[p].begin(), e.point_images[p].end());
    e.line_images.push_back(subgroup_closure(*G, gens));
  }
  e.abelian = true;
  e.prime = G->p();
}

}  // namespace

GroupEmbedding veronese_quadratic(int n, int q) {
  if (n < 3) throw contract_violation("the quadratic Veronesean needs n >= 3");
  if (!is_prime_int(q)) throw unsupported_error("quadratic Veronesean over prime fields only");
  Building a = parse_building("A" + std::to_string(n - 1) + "(" + std::to_string(q) + ")");
  const FieldSpec& F = a->F();

  GroupEmbedding e;
  e.geom = point_line_truncation(*a);
  int d = n * (n + 1) / 2;
  auto G = std::make_shared<AdditiveGroup>(q, d);

  // digit order: entries of v^T v at (i, j), i <= j, lexicographically
  std::vector<int> point_elems;
  for (const auto& p : a->isotropic(1)) {
    Word v = p.basis.r[0];
    std::vector<int> digits;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) digits.push_back(F.mul(vget(F, v, i), vget(F, v, j)));
    point_elems.push_back(G->from_digits(digits));
  }
  finish_embedding(e, G, point_elems);
  return e;
}

GroupEmbedding veronese_hermitian(int n, int q) {
  if (n < 3) throw contract_violation("the hermitian Veronesean needs n >= 3");
  if (!is_prime_int(q)) throw unsupported_error("hermitian Veronesean over prime base fields only");
  Building a = parse_building("A" + std::to_string(n - 1) + "(" + std::to_string(q * q) + ")");
  const FieldSpec& K = a->F();

  GroupEmbedding e;
  e.geom = point_line_truncation(*a);
  int d = n * n;  // F_q-dimension of the hermitian matrices
  auto G = std::make_shared<AdditiveGroup>(q, d);

  // coordinates: diagonal entries (values in F_q), then for each i < j the
  // two F_q-components of the (i, j) entry in the basis {1, x} of F_{q^2}
  std::vector<int> point_elems;
  for (const auto& p : a->isotropic(1)) {
    Word v = p.basis.r[0];
    std::vector<int> digits;
    for (int i = 0; i < n; ++i) {
      int mii = K.mul(K.frobenius(vget(K, v, i)), vget(K, v, i));  // a norm, lies in F_q
      if (mii >= q) throw contract_violation("norm left the base field");
      digits.push_back(mii);
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        int mij = K.mul(K.frobenius(vget(K, v, i)), vget(K, v, j));
        digits.push_back(mij % q);  // coefficient of 1
        digits.push_back(mij / q);  // coefficient of x
      }
    point_elems.push_back(G->from_digits(digits));
  }
  finish_embedding(e, G, point_elems);
  return e;
}

GroupEmbedding wedge_embedding(int n, int q) {
  if (n < 4) throw contract_violation("the line grassmannian needs n >= 4");
  if (!is_prime_int(q)) throw unsupported_error("wedge embedding over prime fields only");
  Building a = parse_building("A" + std::to_string(n - 1) + "(" + std::to_string(q) + ")");
  const FieldSpec& F = a->F();
  auto sg = shadow_geometry(a, 2);

  GroupEmbedding e;
  e.geom.num_points = static_cast<int>(sg.points.size());
  for (auto& l : sg.lines) e.geom.lines.push_back(l.points);

  int d = n * (n - 1) / 2;
  auto G = std::make_shared<AdditiveGroup>(q, d);
  std::vector<int> point_elems;
  for (const auto& pf : sg.points) {
    const PackedMat& m = pf.elems[0].sub.basis;
    Word v1 = m.r[0], v2 = m.r[1];
    std::vector<int> digits;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        digits.push_back(F.sub(F.mul(vget(F, v1, i), vget(F, v2, j)),
                               F.mul(vget(F, v1, j), vget(F, v2, i))));
    point_elems.push_back(G->from_digits(digits));
  }
  finish_embedding(e, G, point_elems);
  return e;
}

GroupEmbedding natural_embedding(const Building& b) {
  const FieldSpec& F = b->F();
  if (F.k() != 1) throw unsupported_error("natural embedding over prime fields only");
  GroupEmbedding e;
  e.geom = point_line_truncation(*b);
  auto G = std::make_shared<AdditiveGroup>(F.p(), b->dim());
  std::vector<int> point_elems;
  for (const auto& p : b->isotropic(1)) {
    std::vector<int> digits;
    for (int i = 0; i < b->dim(); ++i) digits.push_back(vget(F, p.basis.r[0], i));
    point_elems.push_back(G->from_digits(digits));
  }
  finish_embedding(e, G, point_elems);
  return e;
}

IdentifyResult identify_with_unipotent(const GroupEmbedding& v, const UnipotentRep& rep) {
  IdentifyResult out;
  if (find_geometry_isomorphism(v.geom, rep.emb.geom).empty() && v.geom.num_points > 0) {
    out.witness = "geometries are not isomorphic (" + std::to_string(v.geom.num_points) + " vs " +
                  std::to_string(rep.emb.geom.num_points) + " points)";
    return out;
  }
  auto iso = embedding_isomorphism(v, rep.emb);
  if (!iso) {
    out.witness = "no group isomorphism matches the image subgroups";
    return out;
  }
  out.ok = true;
  out.iso = std::move(iso);
  return out;
}

}  // namespace bge
