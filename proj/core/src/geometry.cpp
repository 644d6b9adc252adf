#include "bge/geometry.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

namespace bge {

const std::vector<std::vector<int>>& PointLineGeometry::adjacency() const {
  if (adj_.empty() && num_points > 0) {
    adj_.assign(num_points, {});
    std::vector<std::set<int>> tmp(num_points);
    for (auto& L : lines)
      for (size_t i = 0; i < L.size(); ++i)
        for (size_t j = i + 1; j < L.size(); ++j) {
          tmp[L[i]].insert(L[j]);
          tmp[L[j]].insert(L[i]);
        }
    for (int p = 0; p < num_points; ++p) adj_[p].assign(tmp[p].begin(), tmp[p].end());
  }
  return adj_;
}

bool PointLineGeometry::collinear(int a, int b) const {
  const auto& adj = adjacency();
  return std::binary_search(adj[a].begin(), adj[a].end(), b);
}

int PointLineGeometry::line_through(int a, int b) const {
  for (size_t i = 0; i < lines.size(); ++i) {
    const auto& L = lines[i];
    if (std::binary_search(L.begin(), L.end(), a) && std::binary_search(L.begin(), L.end(), b))
      return static_cast<int>(i);
  }
  return -1;
}

GeometryReport validate_geometry(const PointLineGeometry& g) {
  GeometryReport rep;
  auto add = [&](const std::string& axiom, bool pass, const std::string& witness) {
    rep.checks.push_back({axiom, pass, pass ? "" : witness});
  };

  {
    bool ok = true;
    std::string w;
    for (size_t i = 0; i < g.lines.size() && ok; ++i)
      if (g.lines[i].size() < 2) {
        ok = false;
        w = "line " + std::to_string(i) + " has " + std::to_string(g.lines[i].size()) + " points";
      }
    add("every line has at least two points", ok, w);
  }
  {
    std::vector<int> cnt(g.num_points, 0);
    for (auto& L : g.lines)
      for (int p : L) ++cnt[p];
    bool ok = true;
    std::string w;
    for (int p = 0; p < g.num_points && ok; ++p)
      if (cnt[p] < 2) {
        ok = false;
        w = "point " + std::to_string(p) + " lies on " + std::to_string(cnt[p]) + " lines";
      }
    add("every point lies on at least two lines", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (size_t i = 0; i < g.lines.size() && ok; ++i)
      for (size_t j = i + 1; j < g.lines.size() && ok; ++j) {
        std::vector<int> common;
        std::set_intersection(g.lines[i].begin(), g.lines[i].end(), g.lines[j].begin(),
                              g.lines[j].end(), std::back_inserter(common));
        if (common.size() > 1) {
          ok = false;
          std::ostringstream os;
          os << "lines " << i << " and " << j << " share points " << common[0] << "," << common[1];
          w = os.str();
        }
      }
    add("two lines share at most one point", ok, w);
  }
  {
    SpanningStructures s = spanning_structures(g);
    add("collinearity graph is connected", s.components == 1,
        std::to_string(s.components) + " components");
  }
  return rep;
}

bool is_subspace(const PointLineGeometry& g, const std::set<int>& s) {
  for (auto& L : g.lines) {
    int inside = 0;
    for (int p : L)
      if (s.count(p)) ++inside;
    if (inside >= 2 && inside < static_cast<int>(L.size())) return false;
  }
  return true;
}

std::set<int> generated_subspace(const PointLineGeometry& g, const std::set<int>& seed) {
  std::set<int> cur = seed;
  bool grew = true;
  while (grew) {
    grew = false;
    for (auto& L : g.lines) {
      int inside = 0;
      for (int p : L)
        if (cur.count(p)) ++inside;
      if (inside >= 2 && inside < static_cast<int>(L.size())) {
        for (int p : L) cur.insert(p);
        grew = true;
      }
    }
  }
  return cur;
}

bool is_hyperplane(const PointLineGeometry& g, const std::set<int>& h) {
  if (static_cast<int>(h.size()) == g.num_points) return false;  // proper
  if (!is_subspace(g, h)) return false;
  for (auto& L : g.lines) {
    bool meets = false;
    for (int p : L)
      if (h.count(p)) {
        meets = true;
        break;
      }
    if (!meets) return false;
  }
  return true;
}

SpanningStructures spanning_structures(const PointLineGeometry& g) {
  SpanningStructures s;
  s.bfs_parent.assign(g.num_points, -2);  // -2 unvisited, -1 root
  const auto& adj = g.adjacency();
  std::vector<int> dist(g.num_points, -1);

  auto bfs = [&](int root, std::vector<int>& d) {
    std::queue<int> q;
    q.push(root);
    d[root] = 0;
    int far = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int w : adj.empty() ? std::vector<int>{} : adj[v]) {
        if (d[w] < 0) {
          d[w] = d[v] + 1;
          far = std::max(far, d[w]);
          if (s.bfs_parent[w] == -2) s.bfs_parent[w] = v;
          q.push(w);
        }
      }
    }
    return far;
  };

  for (int p = 0; p < g.num_points; ++p) {
    if (s.bfs_parent[p] == -2) {
      ++s.components;
      s.bfs_parent[p] = -1;
      std::vector<int> d(g.num_points, -1);
      bfs(p, d);
    }
  }
  // diameter: the largest eccentricity over all points within components
  for (int p = 0; p < g.num_points; ++p) {
    std::vector<int> d(g.num_points, -1);
    s.diameter = std::max(s.diameter, bfs(p, d));
  }
  return s;
}

nlohmann::ordered_json geometry_to_json(const PointLineGeometry& g) {
  nlohmann::ordered_json j;
  j["points"] = g.num_points;
  j["lines"] = g.lines;
  return j;
}

PointLineGeometry geometry_from_json(const nlohmann::json& j) {
  PointLineGeometry g;
  g.num_points = j.at("points").get<int>();
  g.lines = j.at("lines").get<std::vector<std::vector<int>>>();
  for (auto& L : g.lines) std::sort(L.begin(), L.end());
  return g;
}

namespace {

struct IsoSearch {
  const PointLineGeometry& a;
  const PointLineGeometry& b;
  std::vector<int> map;       // a -> b, -1 unset
  std::vector<char> used;     // b side
  std::vector<long> inv_a, inv_b;
  std::vector<int> order;

  IsoSearch(const PointLineGeometry& a_, const PointLineGeometry& b_) : a(a_), b(b_) {}

  static std::vector<long> invariants(const PointLineGeometry& g) {
    std::vector<std::multiset<int>> through(g.num_points);
    for (auto& L : g.lines)
      for (int p : L) through[p].insert(static_cast<int>(L.size()));
    std::vector<long> inv(g.num_points);
    std::map<std::multiset<int>, long> code;
    for (int p = 0; p < g.num_points; ++p) {
      auto it = code.find(through[p]);
      if (it == code.end()) it = code.emplace(through[p], static_cast<long>(code.size())).first;
      // combine the class code with the collinearity degree
      inv[p] = it->second * 1000 + static_cast<long>(g.adjacency()[p].size());
    }
    return inv;
  }

  bool consistent(int pa, int pb) {
    for (int q = 0; q < a.num_points; ++q) {
      if (map[q] < 0 || q == pa) continue;
      if (a.collinear(pa, q) != b.collinear(pb, map[q])) return false;
      if (!a.collinear(pa, q)) continue;
      int la = a.line_through(pa, q), lb = b.line_through(pb, map[q]);
      if (a.lines[la].size() != b.lines[lb].size()) return false;
      // the partial map must respect the whole pencil of lines: a mapped
      // point lies on la exactly when its image lies on lb
      for (int r = 0; r < a.num_points; ++r) {
        if (map[r] < 0 || r == pa || r == q) continue;
        bool on_a = std::binary_search(a.lines[la].begin(), a.lines[la].end(), r);
        bool on_b = std::binary_search(b.lines[lb].begin(), b.lines[lb].end(), map[r]);
        if (on_a != on_b) return false;
      }
    }
    return true;
  }

  bool rec(size_t idx) {
    if (idx == order.size()) return verify();
    int pa = order[idx];
    for (int pb = 0; pb < b.num_points; ++pb) {
      if (used[pb] || inv_a[pa] != inv_b[pb]) continue;
      if (!consistent(pa, pb)) continue;
      map[pa] = pb;
      used[pb] = 1;
      if (rec(idx + 1)) return true;
      map[pa] = -1;
      used[pb] = 0;
    }
    return false;
  }

  bool verify() {
    std::set<std::vector<int>> blines(b.lines.begin(), b.lines.end());
    std::set<std::vector<int>> seen;
    for (auto& L : a.lines) {
      std::vector<int> img;
      for (int p : L) img.push_back(map[p]);
      std::sort(img.begin(), img.end());
      if (!blines.count(img) || seen.count(img)) return false;
      seen.insert(img);
    }
    return seen.size() == b.lines.size();
  }

  std::vector<int> run() {
    if (a.num_points != b.num_points || a.lines.size() != b.lines.size()) return {};
    inv_a = invariants(a);
    inv_b = invariants(b);
    {
      auto sa = inv_a, sb = inv_b;
      std::sort(sa.begin(), sa.end());
      std::sort(sb.begin(), sb.end());
      if (sa != sb) return {};
    }
    map.assign(a.num_points, -1);
    used.assign(b.num_points, 0);
    // BFS order from point 0 keeps partial maps connected, which prunes well
    order.clear();
    std::vector<char> vis(a.num_points, 0);
    std::queue<int> q;
    for (int root = 0; root < a.num_points; ++root) {
      if (vis[root]) continue;
      q.push(root);
      vis[root] = 1;
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        order.push_back(v);
        for (int w : a.adjacency()[v])
          if (!vis[w]) {
            vis[w] = 1;
            q.push(w);
          }
      }
    }
    if (rec(0)) return map;
    return {};
  }
};

}  // namespace

std::vector<int> find_geometry_isomorphism(const PointLineGeometry& a, const PointLineGeometry& b) {
  IsoSearch s(a, b);
  return s.run();
}

}  // namespace bge
