#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "zeroext/graph.hpp"
#include "zeroext/metric.hpp"

namespace zeroext {

inline bool is_modular(const FiniteMetric& m) {
  int n = m.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (medians(m, m.point(i), m.point(j), m.point(k)).empty()) return false;
  return true;
}

inline bool is_median_metric(const FiniteMetric& m) {
  int n = m.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        if (medians(m, m.point(i), m.point(j), m.point(k)).size() != 1) return false;
  return true;
}

struct Orbit {
  int id = 0;
  std::set<Edge> edges;
};

namespace detail {

// 4-circuit p-q-q'-p' gives the opposite (mate) pair pq, p'q'. The callback
// receives the ordered correspondence: tail p matches tail p', head q matches
// head q'.
template <typename F>
void for_each_mate_pair(const Graph& h, F&& cb) {
  for (const Edge& e : h.edges()) {
    for (int dir = 0; dir < 2; ++dir) {
      int p = dir ? e.v : e.u;
      int q = dir ? e.u : e.v;
      for (int pp : h.neighbors(p)) {
        if (pp == q) continue;
        for (int qq : h.neighbors(q)) {
          if (qq == p || qq == pp) continue;
          if (pp == p || qq == q) continue;
          if (h.has_edge(pp, qq)) cb(p, q, pp, qq);
        }
      }
    }
  }
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

// Orbits: equivalence classes of edges under the transitive closure of the
// mate relation (opposite edges of 4-circuits).
inline std::vector<Orbit> compute_orbits(const Graph& h) {
  if (!h.connected()) fail("DisconnectedGraph", "orbits need a connected graph");
  if (!h.bipartite()) fail("NotBipartite", "orbits need a bipartite graph");
  std::vector<Edge> edge_list(h.edges().begin(), h.edges().end());
  std::map<Edge, int> eid;
  for (std::size_t i = 0; i < edge_list.size(); ++i) eid[edge_list[i]] = static_cast<int>(i);
  detail::UnionFind uf(static_cast<int>(edge_list.size()));
  detail::for_each_mate_pair(h, [&](int p, int q, int pp, int qq) {
    uf.unite(eid[Edge(p, q)], eid[Edge(pp, qq)]);
  });
  std::map<int, Orbit> groups;
  for (std::size_t i = 0; i < edge_list.size(); ++i)
    groups[uf.find(static_cast<int>(i))].edges.insert(edge_list[i]);
  std::vector<Orbit> out;
  for (auto& [root, orb] : groups) out.push_back(std::move(orb));
  std::sort(out.begin(), out.end(),
            [](const Orbit& a, const Orbit& b) { return *a.edges.begin() < *b.edges.begin(); });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
  return out;
}

// Contract all non-orbit edges and identify parallel edges. Each contracted
// component is represented by its lexicographically smallest node id; the
// returned map sends that representative to the component's node set.
inline std::pair<Graph, std::map<std::string, std::set<std::string>>> orbit_graph(
    const Graph& h, const Orbit& q) {
  {
    auto orbits = compute_orbits(h);
    bool found = false;
    for (const Orbit& o : orbits)
      if (o.edges == q.edges) found = true;
    if (!found) fail("NotAnOrbit", "edge set is not an orbit of the graph");
  }
  detail::UnionFind uf(h.size());
  for (const Edge& e : h.edges())
    if (!q.edges.count(e)) uf.unite(e.u, e.v);
  std::map<int, std::set<std::string>> comps;
  for (int i = 0; i < h.size(); ++i) comps[uf.find(i)].insert(h.id(i));
  std::map<int, std::string> rep;
  for (auto& [root, members] : comps) rep[root] = *members.begin();
  Graph g;
  std::map<std::string, std::set<std::string>> part;
  for (auto& [root, members] : comps) {
    g.add_node(rep[root]);
    part[rep[root]] = members;
  }
  for (const Edge& e : q.edges) {
    int ru = uf.find(e.u), rv = uf.find(e.v);
    if (ru == rv) fail("NotAnOrbit", "orbit edge collapsed under contraction");
    g.add_edge(rep[ru], rep[rv]);
  }
  return {g, part};
}

struct OrbitDecomposition {
  Graph h;
  EdgeLengths lengths;  // metric restricted to the edges of h
  std::vector<Orbit> orbits;
  std::vector<Graph> orbit_graphs;
  std::vector<std::map<std::string, std::set<std::string>>> partitions;
  std::vector<Rat> weights;
  std::vector<FiniteMetric> orbit_metrics;  // on the original point set
};

// Checks that the metric is constant on each orbit of its underlying graph
// and collects the per-orbit values.
inline std::pair<bool, std::vector<Rat>> orbit_invariance(const FiniteMetric& m) {
  auto [h, lens] = underlying_graph(m);
  if (!h.bipartite()) return {false, {}};
  auto orbits = compute_orbits(h);
  std::vector<Rat> weights;
  for (const Orbit& q : orbits) {
    Rat w = lens.at(*q.edges.begin());
    for (const Edge& e : q.edges)
      if (lens.at(e) != w) return {false, {}};
    weights.push_back(w);
  }
  return {true, weights};
}

inline OrbitDecomposition orbit_decomposition(const FiniteMetric& m) {
  if (!is_modular(m)) fail("NotModular", "orbit decomposition needs a modular metric");
  OrbitDecomposition dec;
  std::tie(dec.h, dec.lengths) = underlying_graph(m);
  dec.orbits = compute_orbits(dec.h);
  for (const Orbit& q : dec.orbits) {
    Rat w = dec.lengths.at(*q.edges.begin());
    for (const Edge& e : q.edges)
      if (dec.lengths.at(e) != w)
        fail("NotOrbitInvariant", "modular metric varies on an orbit");
    dec.weights.push_back(w);
    auto [g, part] = orbit_graph(dec.h, q);
    dec.orbit_graphs.push_back(g);
    dec.partitions.push_back(part);
    EdgeLengths chi;
    chi.graph = dec.h;
    for (const Edge& e : dec.h.edges()) chi.len[e] = q.edges.count(e) ? Rat(1) : Rat(0);
    dec.orbit_metrics.push_back(weighted_path_metric(dec.h, chi));
  }
  // The decomposition must reproduce the metric pointwise.
  for (int i = 0; i < m.size(); ++i)
    for (int j = i + 1; j < m.size(); ++j) {
      Rat sum(0);
      for (std::size_t q = 0; q < dec.orbits.size(); ++q)
        sum += dec.weights[q] * dec.orbit_metrics[q].at(m.point(i), m.point(j));
      if (sum != m.at(i, j))
        fail("NotOrbitInvariant", "weighted orbit metrics do not sum to the metric");
    }
  return dec;
}

// Projective edge sequence e_0..e_k with e_k = e_0 and endpoints swapped:
// consecutive edges are opposite in the 4-circuit s_i t_i t_{i+1} s_{i+1}.
struct Twist {
  std::vector<std::pair<std::string, std::string>> seq;  // (s_i, t_i)
};

struct OrientResult {
  bool orientable = false;
  // For each edge (u <= v): +1 means u -> v, -1 means v -> u.
  std::map<Edge, int> direction;
  std::optional<Twist> twist;
};

// Propagates the 4-circuit orientation rule over directed edges: in a circuit
// p-q-q'-p', directing p to q forces p' to q'. A directed edge landing in the
// same propagation class as its reverse witnesses non-orientability; the
// propagation path gives the twist.
inline OrientResult orient(const Graph& h) {
  if (!h.bipartite()) fail("NotBipartite", "orientation needs a bipartite graph");
  std::vector<Edge> edge_list(h.edges().begin(), h.edges().end());
  std::map<Edge, int> eid;
  for (std::size_t i = 0; i < edge_list.size(); ++i) eid[edge_list[i]] = static_cast<int>(i);
  int m = static_cast<int>(edge_list.size());
  // Directed edge 2e is u->v, 2e+1 is v->u.
  auto did = [&](int p, int q) {
    int e = eid.at(Edge(p, q));
    return edge_list[e].u == p ? 2 * e : 2 * e + 1;
  };
  std::vector<std::vector<int>> adj(2 * m);
  detail::for_each_mate_pair(h, [&](int p, int q, int pp, int qq) {
    adj[did(p, q)].push_back(did(pp, qq));
  });

  OrientResult res;
  std::vector<int> comp(2 * m, -1);
  int ncomp = 0;
  for (int start = 0; start < 2 * m; ++start) {
    if (comp[start] != -1) continue;
    int c = ncomp++;
    std::queue<int> bfs;
    comp[start] = c;
    bfs.push(start);
    while (!bfs.empty()) {
      int d = bfs.front();
      bfs.pop();
      for (int d2 : adj[d])
        if (comp[d2] == -1) {
          comp[d2] = c;
          bfs.push(d2);
        }
    }
  }
  bool twisted = false;
  for (int d = 0; d < 2 * m && !twisted; ++d)
    if (comp[d] == comp[d ^ 1]) twisted = true;
  if (twisted) {
    // Shortest propagation path from any directed edge to its own reverse
    // keeps the twist (hence gadgets built on it) small.
    std::vector<int> best_path;
    for (int start = 0; start < 2 * m; ++start) {
      if (comp[start] != comp[start ^ 1]) continue;
      std::vector<int> parent(2 * m, -1);
      std::queue<int> bfs;
      parent[start] = start;
      bfs.push(start);
      int rev = start ^ 1;
      while (!bfs.empty() && parent[rev] == -1) {
        int d = bfs.front();
        bfs.pop();
        for (int d2 : adj[d])
          if (parent[d2] == -1) {
            parent[d2] = d;
            bfs.push(d2);
          }
      }
      std::vector<int> path;
      for (int d = rev; d != start; d = parent[d]) path.push_back(d);
      path.push_back(start);
      std::reverse(path.begin(), path.end());
      if (best_path.empty() || path.size() < best_path.size()) best_path = path;
    }
    // Tails give s_i, heads t_i; the last entry is the start edge reversed.
    Twist tw;
    for (int d : best_path) {
      const Edge& e = edge_list[d / 2];
      int tail = (d % 2 == 0) ? e.u : e.v;
      tw.seq.emplace_back(h.id(tail), h.id(e.other(tail)));
    }
    res.orientable = false;
    res.twist = std::move(tw);
    return res;
  }
  // No class meets its reverse: sign class pairs consistently.
  std::vector<int> sign(ncomp, 0);
  for (int d = 0; d < 2 * m; d += 2) {
    if (sign[comp[d]] == 0 && sign[comp[d ^ 1]] == 0) {
      sign[comp[d]] = 1;
      sign[comp[d ^ 1]] = -1;
    }
  }
  res.orientable = true;
  for (int e = 0; e < m; ++e) res.direction[edge_list[e]] = sign[comp[2 * e]];
  return res;
}

namespace detail {

// All simple circuits, each reported once (smallest node first, direction
// fixed by its second node).
template <typename F>
void for_each_circuit(const Graph& g, F&& cb) {
  int n = g.size();
  std::vector<int> path;
  std::vector<char> used(n, 0);
  std::function<void(int, int)> dfs = [&](int start, int cur) {
    for (int nxt : g.neighbors(cur)) {
      if (nxt == start && path.size() >= 3) {
        if (path[1] < path.back()) cb(path);
        continue;
      }
      if (nxt <= start || used[nxt]) continue;
      used[nxt] = 1;
      path.push_back(nxt);
      dfs(start, nxt);
      path.pop_back();
      used[nxt] = 0;
    }
  };
  for (int s = 0; s < n; ++s) {
    path = {s};
    used.assign(n, 0);
    used[s] = 1;
    dfs(s, s);
  }
}

inline bool circuit_isometric(const Graph&, const std::vector<int>& cyc,
                              const std::vector<std::vector<int>>& dist) {
  int L = static_cast<int>(cyc.size());
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j) {
      int along = std::min(j - i, L - (j - i));
      if (dist[cyc[i]][cyc[j]] != along) return false;
    }
  return true;
}

}  // namespace detail

// Bipartite, modular, and free of isometric circuits of length six or more.
inline bool is_hereditary_modular(const Graph& h) {
  if (!h.connected()) fail("DisconnectedGraph", "hereditary modularity needs connectivity");
  if (!h.bipartite()) return false;
  if (!is_modular(path_metric(h))) return false;
  std::vector<std::vector<int>> dist;
  for (int i = 0; i < h.size(); ++i) dist.push_back(h.bfs_dist(i));
  bool bad = false;
  detail::for_each_circuit(h, [&](const std::vector<int>& cyc) {
    if (!bad && cyc.size() >= 6 && detail::circuit_isometric(h, cyc, dist)) bad = true;
  });
  return !bad;
}

// Backtracking isomorphism test; adequate for the small graphs involved.
inline bool graphs_isomorphic(const Graph& a, const Graph& b) {
  if (a.size() != b.size() || a.edges().size() != b.edges().size()) return false;
  int n = a.size();
  std::vector<int> da(n), db(n);
  for (int i = 0; i < n; ++i) da[i] = a.degree(i);
  for (int i = 0; i < n; ++i) db[i] = b.degree(i);
  {
    auto sa = da, sb = db;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return false;
  }
  std::vector<int> map_ab(n, -1), used(n, 0);
  std::function<bool(int)> rec = [&](int i) -> bool {
    if (i == n) return true;
    for (int j = 0; j < n; ++j) {
      if (used[j] || da[i] != db[j]) continue;
      bool ok = true;
      for (int p = 0; p < i && ok; ++p)
        if (a.has_edge(p, i) != b.has_edge(map_ab[p], j)) ok = false;
      if (!ok) continue;
      map_ab[i] = j;
      used[j] = 1;
      if (rec(i + 1)) return true;
      used[j] = 0;
      map_ab[i] = -1;
    }
    return false;
  };
  return rec(0);
}

// Some component of (T, Q_i) is isomorphic to the orbit graph H_i.
inline bool layer_check(const OrbitDecomposition& dec, int i) {
  if (i < 0 || i >= static_cast<int>(dec.orbits.size())) fail("BadIndex", "orbit index");
  Graph layer_graph;
  for (const std::string& id : dec.h.ids()) layer_graph.add_node(id);
  for (const Edge& e : dec.orbits[i].edges)
    layer_graph.add_edge(dec.h.id(e.u), dec.h.id(e.v));
  std::vector<char> seen(layer_graph.size(), 0);
  for (int s = 0; s < layer_graph.size(); ++s) {
    if (seen[s]) continue;
    auto comp = layer_graph.component_of(s);
    for (int x : comp) seen[x] = 1;
    if (graphs_isomorphic(layer_graph.induced(comp), dec.orbit_graphs[i])) return true;
  }
  return false;
}

struct CanonicalEmbedding {
  std::map<std::string, std::vector<std::string>> phi;  // T node -> coordinates
  std::map<std::string, std::string> inverse;           // product id -> T node
};

inline CanonicalEmbedding canonical_embedding(const OrbitDecomposition& dec) {
  CanonicalEmbedding emb;
  FiniteMetric dh = path_metric(dec.h);
  std::vector<FiniteMetric> dhi;
  for (const Graph& g : dec.orbit_graphs) dhi.push_back(path_metric(g));
  for (const std::string& v : dec.h.ids()) {
    std::vector<std::string> coords;
    for (std::size_t i = 0; i < dec.orbits.size(); ++i) {
      std::string t;
      for (const auto& [rep, members] : dec.partitions[i])
        if (members.count(v)) t = rep;
      if (t.empty()) fail("BadPartition", "node missing from an orbit partition");
      coords.push_back(t);
    }
    std::string pid = tuple_id(coords);
    if (emb.inverse.count(pid)) fail("NotInjective", "two nodes share product coordinates");
    emb.inverse[pid] = v;
    emb.phi[v] = std::move(coords);
  }
  for (const std::string& u : dec.h.ids())
    for (const std::string& v : dec.h.ids()) {
      Rat sum(0);
      for (std::size_t i = 0; i < dec.orbits.size(); ++i)
        sum += dhi[i].at(emb.phi[u][i], emb.phi[v][i]);
      if (sum != dh.at(u, v)) fail("NotIsometric", "embedding distorts a distance");
    }
  return emb;
}

struct MetricClassification {
  bool is_metric = false;
  bool is_modular = false;
  bool underlying_modular = false;
  bool orbit_invariant = false;
  bool is_orientable = false;
  bool is_hereditary_modular = false;
  bool is_frame = false;
  bool is_median = false;
  bool theorem3_applicable = false;
  std::optional<Twist> twist;

  bool minimizable() const { return is_modular && is_frame; }
};

inline MetricClassification classify(const FiniteMetric& m) {
  MetricClassification c;
  c.is_metric = m.is_metric();
  if (!c.is_metric) fail("NotAMetric", "classification needs a metric");
  c.is_modular = is_modular(m);
  c.is_median = is_median_metric(m);
  auto [h, lens] = underlying_graph(m);
  c.underlying_modular = is_modular(path_metric(h));
  if (h.bipartite()) {
    auto [inv, weights] = orbit_invariance(m);
    c.orbit_invariant = inv;
    OrientResult ores = orient(h);
    c.is_orientable = ores.orientable;
    c.twist = ores.twist;
    c.is_hereditary_modular = is_hereditary_modular(h);
    c.is_frame = c.is_hereditary_modular && c.is_orientable;
    if (c.is_modular) {
      OrbitDecomposition dec = orbit_decomposition(m);
      bool ok = true;
      for (std::size_t i = 0; i < dec.orbits.size() && ok; ++i) {
        if (!is_hereditary_modular(dec.orbit_graphs[i]) ||
            !orient(dec.orbit_graphs[i]).orientable)
          ok = false;
        else if (!layer_check(dec, static_cast<int>(i)))
          ok = false;
      }
      c.theorem3_applicable = ok;
    }
  }
  return c;
}

}  // namespace zeroext
