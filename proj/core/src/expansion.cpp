#include "bge/expansion.hpp"

#include <algorithm>
#include <map>

namespace bge {

ExpansionGeometry expansion(const GroupEmbedding& e, long max_order) {
  const FiniteGroup& G = *e.codomain;
  if (G.size() > max_order) throw resource_error("codomain too large for expansion");
  ExpansionGeometry ex;
  ex.G = e.codomain;

  auto cosets_of = [&](const std::vector<int>& image, int elem, std::vector<ExpansionGeometry::Coset>& out) {
    std::vector<char> covered(G.size(), 0);
    for (int g = 0; g < G.size(); ++g) {
      if (covered[g]) continue;
      ExpansionGeometry::Coset c;
      c.elem = elem;
      for (int h : image) {
        int x = G.mult(g, h);
        covered[x] = 1;
        c.members.push_back(x);
      }
      std::sort(c.members.begin(), c.members.end());
      out.push_back(std::move(c));
    }
  };
  for (size_t p = 0; p < e.point_images.size(); ++p)
    cosets_of(e.point_images[p], static_cast<int>(p), ex.lines);
  for (size_t l = 0; l < e.line_images.size(); ++l)
    cosets_of(e.line_images[l], static_cast<int>(l), ex.planes);
  return ex;
}

PointLineGeometry expansion_point_residue(const ExpansionGeometry& ex, int g) {
  PointLineGeometry res;
  std::vector<int> lines_through;
  for (size_t i = 0; i < ex.lines.size(); ++i)
    if (std::binary_search(ex.lines[i].members.begin(), ex.lines[i].members.end(), g))
      lines_through.push_back(static_cast<int>(i));
  res.num_points = static_cast<int>(lines_through.size());
  for (const auto& pl : ex.planes) {
    if (!std::binary_search(pl.members.begin(), pl.members.end(), g)) continue;
    std::vector<int> pts;
    for (size_t k = 0; k < lines_through.size(); ++k) {
      const auto& ln = ex.lines[lines_through[k]];
      if (std::includes(pl.members.begin(), pl.members.end(), ln.members.begin(),
                        ln.members.end()))
        pts.push_back(static_cast<int>(k));
    }
    res.lines.push_back(std::move(pts));
  }
  return res;
}

FarMatch expansion_matches_far(const UnipotentRep& rep, const FarTruncation& far) {
  FarMatch out;
  const BuildingModel& b = *rep.building;

  // u -> u(A) is a bijection from the radical onto the far points
  std::map<BuildingFlag, int> to_u;
  for (int i = 0; i < rep.U->size(); ++i)
    to_u[apply(b, GroupElement{rep.U->mat(i)}, rep.A)] = i;
  if (static_cast<long>(to_u.size()) != rep.U->size()) {
    out.counterexample = "the orbit of A is smaller than the radical";
    return out;
  }
  if (far.points.size() != static_cast<size_t>(rep.U->size())) {
    out.counterexample = "far point count differs from the radical order";
    return out;
  }
  out.point_map.reserve(far.points.size());
  for (const auto& p : far.points) {
    auto it = to_u.find(p);
    if (it == to_u.end()) {
      out.counterexample = "a far point is not in the orbit of A";
      return out;
    }
    out.point_map.push_back(it->second);
  }

  ExpansionGeometry ex = expansion(rep.emb);

  auto match_level = [&](const std::vector<ShadowElem>& far_elems,
                         const std::vector<ExpansionGeometry::Coset>& ex_elems,
                         std::vector<int>& level_map, const char* what) {
    if (far_elems.size() != ex_elems.size()) {
      out.counterexample = std::string(what) + " counts differ (" +
                           std::to_string(far_elems.size()) + " vs " +
                           std::to_string(ex_elems.size()) + ")";
      return false;
    }
    std::map<std::vector<int>, int> lookup;
    for (size_t i = 0; i < ex_elems.size(); ++i) lookup[ex_elems[i].members] = static_cast<int>(i);
    std::vector<char> used(ex_elems.size(), 0);
    for (size_t i = 0; i < far_elems.size(); ++i) {
      std::vector<int> img;
      for (int p : far_elems[i].points) img.push_back(out.point_map[p]);
      std::sort(img.begin(), img.end());
      auto it = lookup.find(img);
      if (it == lookup.end()) {
        out.counterexample = std::string(what) + " " + std::to_string(i) +
                             " does not map onto a coset";
        return false;
      }
      if (used[it->second]) {
        out.counterexample = std::string(what) + " map is not injective";
        return false;
      }
      used[it->second] = 1;
      level_map.push_back(it->second);
    }
    return true;
  };
  if (!match_level(far.lines, ex.lines, out.line_map, "line")) return out;
  if (!match_level(far.planes, ex.planes, out.plane_map, "plane")) return out;

  // incidence in both directions: containment before and after the transport
  for (size_t l = 0; l < far.lines.size(); ++l)
    for (size_t p = 0; p < far.planes.size(); ++p) {
      bool far_inc = std::includes(far.planes[p].points.begin(), far.planes[p].points.end(),
                                   far.lines[l].points.begin(), far.lines[l].points.end());
      const auto& exl = ex.lines[out.line_map[l]].members;
      const auto& exp = ex.planes[out.plane_map[p]].members;
      bool ex_inc = std::includes(exp.begin(), exp.end(), exl.begin(), exl.end());
      if (far_inc != ex_inc) {
        out.counterexample =
            "incidence mismatch at line " + std::to_string(l) + ", plane " + std::to_string(p);
        return out;
      }
    }
  out.ok = true;
  return out;
}

}  // namespace bge
