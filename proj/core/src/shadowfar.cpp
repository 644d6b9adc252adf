#include "bge/shadowfar.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bge {

namespace {

std::vector<int> sorted_unique(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool subspace_typed(const BuildingModel& b, int t) {
  return b.family() != 'D' || t <= b.rank() - 2;
}

}  // namespace

std::vector<int> shadow_line_cotype(const BuildingModel& b, int j) {
  return sorted_unique(b.diagram_neighbors(j));
}

std::vector<PlaneKind> shadow_plane_kinds(const BuildingModel& b, int j) {
  std::vector<PlaneKind> out;
  for (int j2 : b.diagram_neighbors(j)) {
    std::vector<int> nb = b.diagram_neighbors(j);
    for (int t : b.diagram_neighbors(j2)) nb.push_back(t);
    nb = sorted_unique(nb);
    nb.erase(std::remove(nb.begin(), nb.end(), j), nb.end());
    nb.erase(std::remove(nb.begin(), nb.end(), j2), nb.end());
    if (!nb.empty()) out.push_back(PlaneKind{j2, nb});
  }
  return out;
}

std::vector<BuildingFlag> flags_of_types(const BuildingModel& b, const std::vector<int>& types,
                                         const BuildingFlag* base) {
  const FieldSpec& F = b.F();
  std::vector<BuildingFlag> cur;
  cur.push_back(base ? *base : BuildingFlag{});
  for (int t : types) {
    std::vector<BuildingFlag> next;
    for (const auto& f : cur) {
      const Subspace* smin = nullptr;
      if (subspace_typed(b, t)) {
        for (const auto& e : f.elems)
          if (e.sub.dim() > t && (!smin || e.sub.dim() < smin->dim())) smin = &e.sub;
      }
      std::vector<Subspace> local;
      const std::vector<Subspace>* candidates;
      if (smin) {
        local = subspaces_of(F, *smin, t);
        candidates = &local;
      } else {
        candidates = &b.elements_of_type(t);
      }
      for (const auto& x : *candidates) {
        if (b.element_type(x) != t) continue;
        FlagElem fe{t, x};
        bool ok = true;
        for (const auto& e : f.elems)
          if (!b.incident(e, fe)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        BuildingFlag g = f;
        g.elems.push_back(fe);
        next.push_back(std::move(g));
      }
    }
    cur = std::move(next);
  }
  if (base) {
    for (auto& f : cur) {
      auto& es = f.elems;
      es.erase(std::remove_if(es.begin(), es.end(),
                              [&](const FlagElem& e) {
                                return std::find(base->elems.begin(), base->elems.end(), e) !=
                                       base->elems.end();
                              }),
               es.end());
    }
  }
  for (auto& f : cur)
    std::sort(f.elems.begin(), f.elems.end(),
              [](const FlagElem& a, const FlagElem& c) { return a.type < c.type; });
  std::sort(cur.begin(), cur.end());
  cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
  return cur;
}

namespace {

std::vector<BuildingFlag> j_flags(const BuildingModel& b, int j) {
  std::vector<BuildingFlag> pts;
  for (const auto& x : b.elements_of_type(j)) pts.push_back(BuildingFlag{{FlagElem{j, x}}});
  return pts;
}

std::vector<int> shadow_points(const BuildingModel& b, const std::vector<BuildingFlag>& pts,
                               const BuildingFlag& f) {
  std::vector<int> out;
  for (size_t i = 0; i < pts.size(); ++i)
    if (flags_compatible(b, f, pts[i])) out.push_back(static_cast<int>(i));
  return out;
}

}  // namespace

bool flags_compatible(const BuildingModel& b, const BuildingFlag& f, const BuildingFlag& g) {
  for (const auto& e : f.elems)
    for (const auto& h : g.elems) {
      if (e.type == h.type && !(e.sub == h.sub)) return false;
      if (!b.incident(e, h)) return false;
    }
  return true;
}

int ShadowGeometry::point_index(const BuildingFlag& p) const {
  auto it = std::lower_bound(points.begin(), points.end(), p);
  if (it == points.end() || !(*it == p)) return -1;
  return static_cast<int>(it - points.begin());
}

ShadowGeometry shadow_geometry(const Building& b, int j) {
  if (j < 1 || j > b->rank()) throw contract_violation("shadow type out of range");
  ShadowGeometry sg;
  sg.building = b;
  sg.j = j;
  sg.points = j_flags(*b, j);

  for (const auto& f : flags_of_types(*b, shadow_line_cotype(*b, j))) {
    ShadowElem e;
    e.shadow_type = 2;
    e.minimal_flag = f;
    e.points = shadow_points(*b, sg.points, f);
    sg.lines.push_back(std::move(e));
  }
  for (const auto& kind : shadow_plane_kinds(*b, j)) {
    for (const auto& f : flags_of_types(*b, kind.cotype)) {
      ShadowElem e;
      e.shadow_type = 3;
      e.minimal_flag = f;
      e.points = shadow_points(*b, sg.points, f);
      sg.planes.push_back(std::move(e));
    }
  }
  return sg;
}

LocalGeometry local_geometry(const Building& b, int j, const BuildingFlag& A) {
  if (!A.of_type(j) || A.elems.size() != 1)
    throw contract_violation("local geometry expects a singleton flag of type j");
  LocalGeometry lg;
  lg.building = b;
  lg.j = j;
  lg.A = A;

  lg.point_flags = flags_of_types(*b, shadow_line_cotype(*b, j), &A);
  for (const auto& kind : shadow_plane_kinds(*b, j)) {
    auto fs = flags_of_types(*b, kind.cotype, &A);
    lg.line_flags.insert(lg.line_flags.end(), fs.begin(), fs.end());
    lg.line_second_type.insert(lg.line_second_type.end(), fs.size(), kind.j2);
  }

  lg.geom.num_points = static_cast<int>(lg.point_flags.size());
  for (const auto& lf : lg.line_flags) {
    std::vector<int> pts;
    for (size_t i = 0; i < lg.point_flags.size(); ++i)
      if (flags_compatible(*b, lg.point_flags[i], lf)) pts.push_back(static_cast<int>(i));
    lg.geom.lines.push_back(std::move(pts));
  }
  return lg;
}

LocalGeometry local_geometry(const ShadowGeometry& sg, const BuildingFlag& A) {
  if (sg.point_index(A) < 0) throw contract_violation("A is not a point of the shadow geometry");
  return local_geometry(sg.building, sg.j, A);
}

bool star_condition(const BuildingModel& b, int j) {
  for (int t = 1; t <= b.rank(); ++t) {
    if (t == j) continue;
    int g = b.gonality(j, t);
    int si = b.residue_order(j), st = b.residue_order(t);
    if ((g == 6 && si == 2 && st == 2) || (g == 8 && si == 2 && st == 4) ||
        (g == 8 && si == 4 && st == 2))
      return false;
  }
  return true;
}

int FarTruncation::point_index(const BuildingFlag& p) const {
  auto it = std::lower_bound(points.begin(), points.end(), p);
  if (it == points.end() || !(*it == p)) return -1;
  return static_cast<int>(it - points.begin());
}

FarTruncation far_truncation(const Building& b, int j, const BuildingFlag& Astar) {
  if (Astar.elems.size() != 1 || Astar.elems[0].type != b->opposite_type(j))
    throw contract_violation("far truncation needs a singleton flag of the opposite type");
  FarTruncation far;
  far.building = b;
  far.j = j;
  far.Astar = Astar;
  far.star_ok = star_condition(*b, j);

  for (const auto& p : j_flags(*b, j))
    if (b->is_opposite(p, Astar)) far.points.push_back(p);

  auto cut = [&](const BuildingFlag& f, int shadow_type, std::vector<ShadowElem>& out,
                 std::set<std::vector<int>>& seen) {
    std::vector<int> pts;
    for (size_t i = 0; i < far.points.size(); ++i)
      if (flags_compatible(*b, f, far.points[i])) pts.push_back(static_cast<int>(i));
    if (pts.empty()) return;
    if (!seen.insert(pts).second) return;  // deduplicated by point set
    ShadowElem e;
    e.shadow_type = shadow_type;
    e.minimal_flag = f;
    e.points = std::move(pts);
    out.push_back(std::move(e));
  };

  std::set<std::vector<int>> seen_lines, seen_planes;
  for (const auto& f : flags_of_types(*b, shadow_line_cotype(*b, j)))
    cut(f, 2, far.lines, seen_lines);
  for (const auto& kind : shadow_plane_kinds(*b, j))
    for (const auto& f : flags_of_types(*b, kind.cotype)) cut(f, 3, far.planes, seen_planes);
  return far;
}

}  // namespace bge
