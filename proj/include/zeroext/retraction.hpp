#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "zeroext/metric.hpp"
#include "zeroext/modular.hpp"

namespace zeroext {

// Isometric modular subgraph of a two-factor Cartesian product, with an
// origin whose row and column layers lie entirely inside the subgraph.
struct ProductSubgraph {
  Graph h1, h2;
  Graph product;  // K = h1 x h2
  Graph sub;      // H, nodes are tuple ids
  std::string s1, s2;
  // Factor ids may contain the tuple separator, so product ids are decoded
  // through this table, never by re-splitting.
  std::map<std::string, std::pair<std::string, std::string>> coords;

  std::string origin_id() const { return tuple_id({s1, s2}); }
};

inline ProductSubgraph make_product_subgraph(const Graph& h1, const Graph& h2,
                                             const std::vector<std::string>& sub_nodes) {
  ProductSubgraph ps;
  ps.h1 = h1;
  ps.h2 = h2;
  ps.product = cartesian_product({h1, h2});
  for (const std::string& a : h1.ids())
    for (const std::string& b : h2.ids()) ps.coords[tuple_id({a, b})] = {a, b};
  std::vector<int> keep;
  for (const std::string& id : sub_nodes) keep.push_back(ps.product.index(id));
  ps.sub = ps.product.induced(keep);
  // Origin: scan factor pairs for the row+column layer property.
  for (const std::string& a : h1.ids()) {
    for (const std::string& b : h2.ids()) {
      bool ok = true;
      for (const std::string& u : h1.ids())
        if (!ps.sub.has_node(tuple_id({u, b}))) ok = false;
      for (const std::string& v : h2.ids())
        if (!ps.sub.has_node(tuple_id({a, v}))) ok = false;
      if (ok) {
        ps.s1 = a;
        ps.s2 = b;
        return ps;
      }
    }
  }
  fail("HypothesisViolation", "origin: no node with full row and column layers");
  return ps;  // unreachable
}

inline void check_product_subgraph(const ProductSubgraph& ps) {
  if (!ps.sub.connected()) fail("HypothesisViolation", "subgraph disconnected");
  FiniteMetric dk = path_metric(ps.product);
  FiniteMetric dh = path_metric(ps.sub);
  for (const std::string& u : ps.sub.ids())
    for (const std::string& v : ps.sub.ids())
      if (dh.at(u, v) != dk.at(u, v)) fail("HypothesisViolation", "isometric");
  if (!is_modular(dh)) fail("HypothesisViolation", "modular");
}

struct ExcessTable {
  std::map<std::string, int> delta;              // product node -> d(x, T)
  std::map<std::string, std::set<std::string>> nearest;  // N(x)
  std::map<std::string, std::string> t_min;      // minimal element of N(x)
};

inline ExcessTable excess_table(const ProductSubgraph& ps) {
  ExcessTable et;
  FiniteMetric dk = path_metric(ps.product);
  FiniteMetric d1 = path_metric(ps.h1);
  for (const std::string& x : ps.product.ids()) {
    int best = -1;
    std::set<std::string> near;
    for (const std::string& t : ps.sub.ids()) {
      Rat d = dk.at(x, t);
      int di = static_cast<int>(d.num());
      if (best < 0 || di < best) {
        best = di;
        near.clear();
      }
      if (di == best) near.insert(t);
    }
    et.delta[x] = best;
    // Minimal element: unique member whose first coordinate is closest to s1.
    int rmin = -1;
    std::vector<std::string> mins;
    for (const std::string& t : near) {
      int r = static_cast<int>(d1.at(ps.coords.at(t).first, ps.s1).num());
      if (rmin < 0 || r < rmin) {
        rmin = r;
        mins.clear();
      }
      if (r == rmin) mins.push_back(t);
    }
    if (mins.size() != 1)
      fail("HypothesisViolation", "minimal nearest point not unique at " + x);
    et.t_min[x] = mins.front();
    et.nearest[x] = std::move(near);
  }
  return et;
}

// Auxiliary graph for one side: the factor graph, the product graph, edges
// from each subgraph node to its factor coordinate, and edges from every
// product node to the origin coordinate.
struct AuxiliaryGraph {
  int side = 1;  // 1 or 2
  Graph g;
  EdgeLengths delta;
  std::set<Edge> factor_edges, product_edges, anchor_edges, origin_edges;
  std::set<Edge> ei_eq, ei_ne;  // same-factor product edges split by excess
};

namespace detail {

inline AuxiliaryGraph build_side(const ProductSubgraph& ps, const ExcessTable& et, int side) {
  AuxiliaryGraph aux;
  aux.side = side;
  const Graph& hi = side == 1 ? ps.h1 : ps.h2;
  const std::string& si = side == 1 ? ps.s1 : ps.s2;
  FiniteMetric di = path_metric(hi);
  for (const std::string& u : hi.ids()) aux.g.add_node(u);
  for (const std::string& x : ps.product.ids()) aux.g.add_node(x);
  auto set_len = [&](const std::string& a, const std::string& b, const Rat& w,
                     std::set<Edge>* cls) {
    aux.g.add_edge(a, b);
    Edge e(aux.g.index(a), aux.g.index(b));
    auto it = aux.delta.len.find(e);
    // Parallel pairs can arise when an anchor and an origin edge coincide;
    // both lengths are zero there, keep the minimum for safety.
    if (it == aux.delta.len.end() || w < it->second) aux.delta.len[e] = w;
    cls->insert(e);
  };
  for (const Edge& e : hi.edges())
    set_len(hi.id(e.u), hi.id(e.v), Rat(1), &aux.factor_edges);
  for (const Edge& e : ps.product.edges()) {
    const std::string& xa = ps.product.id(e.u);
    const std::string& xb = ps.product.id(e.v);
    const auto& ca = ps.coords.at(xa);
    const auto& cb = ps.coords.at(xb);
    bool moves_this_side = side == 1 ? ca.first != cb.first : ca.second != cb.second;
    bool eq = et.delta.at(xa) == et.delta.at(xb);
    // Length 1 on own-side equal-excess and other-side unequal-excess edges,
    // 0 otherwise.
    Rat w = (moves_this_side == eq) ? Rat(1) : Rat(0);
    set_len(xa, xb, w, &aux.product_edges);
    if (moves_this_side)
      (eq ? aux.ei_eq : aux.ei_ne).insert(Edge(aux.g.index(xa), aux.g.index(xb)));
  }
  for (const std::string& t : ps.sub.ids()) {
    std::string ti = side == 1 ? ps.coords.at(t).first : ps.coords.at(t).second;
    set_len(t, ti, Rat(0), &aux.anchor_edges);
  }
  for (const std::string& x : ps.product.ids()) {
    std::string xi = side == 1 ? ps.coords.at(x).first : ps.coords.at(x).second;
    Rat w = di.at(xi, si) - Rat(et.delta.at(x));
    if (w.sign() < 0) fail("HypothesisViolation", "excess exceeds rank at " + x);
    set_len(x, si, w, &aux.origin_edges);
  }
  aux.delta.graph = aux.g;
  return aux;
}

// Parity of every cycle checked on a fundamental basis: assign each node the
// parity of its tree path from the root, then every edge must close evenly.
inline void check_cyclically_even(const AuxiliaryGraph& aux) {
  int n = aux.g.size();
  std::vector<int> par(n, -1);
  std::vector<int> order;
  par[0] = 0;
  order.push_back(0);
  auto edge_parity = [&](const Edge& e) {
    const Rat& w = aux.delta.at(e);
    if (!w.is_integer()) fail("CyclicOddness", "non-integer edge length");
    return static_cast<int>(w.num() & 1);
  };
  for (std::size_t head = 0; head < order.size(); ++head) {
    int x = order[head];
    for (int y : aux.g.neighbors(x))
      if (par[y] < 0) {
        par[y] = par[x] ^ edge_parity(Edge(x, y));
        order.push_back(y);
      }
  }
  for (const Edge& e : aux.g.edges())
    if ((par[e.u] ^ par[e.v]) != edge_parity(e))
      fail("CyclicOddness", "odd cycle through " + aux.g.id(e.u) + "-" + aux.g.id(e.v));
}

}  // namespace detail

inline std::pair<AuxiliaryGraph, AuxiliaryGraph> build_delta(const ProductSubgraph& ps,
                                                             const ExcessTable& et) {
  AuxiliaryGraph a1 = detail::build_side(ps, et, 1);
  AuxiliaryGraph a2 = detail::build_side(ps, et, 2);
  detail::check_cyclically_even(a1);
  detail::check_cyclically_even(a2);
  return {std::move(a1), std::move(a2)};
}

inline FiniteMetric aux_metric(const ProductSubgraph& ps, const AuxiliaryGraph& aux) {
  FiniteMetric m = weighted_path_metric(aux.g, aux.delta);
  const Graph& hi = aux.side == 1 ? ps.h1 : ps.h2;
  FiniteMetric di = path_metric(hi);
  for (const std::string& u : hi.ids())
    for (const std::string& v : hi.ids())
      if (m.at(u, v) != di.at(u, v))
        fail("LemmaViolation", "metric shrinks factor distance " + u + "-" + v);
  for (const auto& [e, w] : aux.delta.len)
    if (m.at(e.u, e.v) != w)
      fail("LemmaViolation",
           "metric disagrees with edge length " + aux.g.id(e.u) + "-" + aux.g.id(e.v));
  for (int i = 0; i < m.size(); ++i)
    for (int j = i + 1; j < m.size(); ++j)
      for (int k = j + 1; k < m.size(); ++k) {
        Rat s = m.at(i, j) + m.at(j, k) + m.at(k, i);
        if (!s.is_integer() || (s.num() & 1))
          fail("LemmaViolation", "odd triangle " + m.point(i) + "," + m.point(j) + "," +
                                     m.point(k));
      }
  return m;
}

// Repeatedly lower a loose pair by two and re-close by shortest paths. A pair
// is loose when no terminal pair makes a shortest path through it.
inline FiniteMetric tighten(const FiniteMetric& m, const std::vector<std::string>& terminals) {
  int n = m.size();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Rat s = m.at(i, j) + m.at(j, k) + m.at(k, i);
        if (!s.is_integer() || (s.num() & 1)) fail("NotCyclicallyEven", "odd triangle");
      }
  std::vector<int> tidx;
  for (const std::string& t : terminals) tidx.push_back(m.index(t));
  std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d[i][j] = m.at(i, j);
  auto loose = [&](int x, int y) {
    for (int u : tidx)
      for (int v : tidx)
        if (d[u][x] + d[x][y] + d[y][v] == d[u][v]) return false;
    return true;
  };
  while (true) {
    int fx = -1, fy = -1;
    for (int x = 0; x < n && fx < 0; ++x)
      for (int y = x + 1; y < n; ++y)
        if (d[x][y] >= Rat(2) && loose(x, y)) {
          fx = x;
          fy = y;
          break;
        }
    if (fx < 0) break;
    d[fx][fy] -= Rat(2);
    d[fy][fx] = d[fx][fy];
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[j][i] = d[i][k] + d[k][j];
  }
  return FiniteMetric(m.points(), std::move(d));
}

struct Retraction {
  std::map<std::string, std::string> gamma;  // product node -> subgraph node

  const std::string& at(const std::string& x) const {
    auto it = gamma.find(x);
    if (it == gamma.end()) fail("UnknownPoint", "no image for '" + x + "'");
    return it->second;
  }
};

// Axiom check shared by construction, tests, and the CLI.
inline void verify_retraction(const Graph& product, const Graph& sub, const Retraction& r) {
  FiniteMetric dk = path_metric(product);
  FiniteMetric dh = path_metric(sub);
  for (const std::string& t : sub.ids())
    if (r.at(t) != t) fail("PropertyViolated", "not identical on the subgraph at " + t);
  for (const std::string& x : product.ids())
    if (!sub.has_node(r.at(x))) fail("PropertyViolated", "image outside the subgraph");
  for (const Edge& e : product.edges()) {
    const std::string& a = r.at(product.id(e.u));
    const std::string& b = r.at(product.id(e.v));
    if (a != b && !sub.has_edge(sub.index(a), sub.index(b)))
      fail("PropertyViolated", "edge not mapped to an edge");
    if (a == b) fail("PropertyViolated", "edge collapsed to a point");
  }
  for (const std::string& x : product.ids())
    for (const std::string& y : product.ids()) {
      Rat before = dk.at(x, y);
      Rat after = dh.at(r.at(x), r.at(y));
      if (after > before) fail("PropertyViolated", "expansive pair " + x + " " + y);
      Rat gap = before - after;
      if (!gap.is_integer() || (gap.num() & 1))
        fail("PropertyViolated", "parity change at " + x + " " + y);
    }
}

inline Retraction two_orbit_retraction(const ProductSubgraph& ps) {
  if (!is_hereditary_modular(ps.h1) || !orient(ps.h1).orientable)
    fail("HypothesisViolation", "first factor is not a frame");
  if (!is_hereditary_modular(ps.h2) || !orient(ps.h2).orientable)
    fail("HypothesisViolation", "second factor is not a frame");
  check_product_subgraph(ps);
  ExcessTable et = excess_table(ps);
  auto [a1, a2] = build_delta(ps, et);
  FiniteMetric m1 = tighten(aux_metric(ps, a1), ps.h1.ids());
  FiniteMetric m2 = tighten(aux_metric(ps, a2), ps.h2.ids());
  auto zero_node = [&](const FiniteMetric& m, const Graph& hi, const std::string& x) {
    std::string found;
    for (const std::string& v : hi.ids())
      if (m.at(x, v).is_zero()) {
        if (!found.empty()) fail("NoZeroNode", "ambiguous zero node at " + x);
        found = v;
      }
    if (found.empty()) fail("NoZeroNode", "no zero node at " + x);
    return found;
  };
  Retraction r;
  for (const std::string& x : ps.product.ids())
    r.gamma[x] = tuple_id({zero_node(m1, ps.h1, x), zero_node(m2, ps.h2, x)});
  verify_retraction(ps.product, ps.sub, r);
  return r;
}

// k-factor case: project to factor pairs, retract each projection, and lift
// until every point's coordinate pairs match a subgraph node pair.
inline Retraction product_retraction(const std::vector<Graph>& factors, const Graph& sub) {
  int k = static_cast<int>(factors.size());
  if (k < 2) fail("HypothesisViolation", "need at least two factors");
  Graph product = cartesian_product(factors);
  for (const std::string& t : sub.ids())
    if (!product.has_node(t)) fail("HypothesisViolation", "subgraph node outside product");
  // Decode table for product ids, since factor ids may contain the separator.
  std::map<std::string, std::vector<std::string>> decode;
  {
    std::vector<std::string> combo(k);
    std::function<void(int)> gen = [&](int i) {
      if (i == k) {
        decode[tuple_id(combo)] = combo;
        return;
      }
      for (const std::string& v : factors[i].ids()) {
        combo[i] = v;
        gen(i + 1);
      }
    };
    gen(0);
  }
  // Pairwise projections of the subgraph node set.
  std::map<std::pair<int, int>, std::set<std::string>> proj;
  for (const std::string& t : sub.ids()) {
    const auto& c = decode.at(t);
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) proj[{i, j}].insert(tuple_id({c[i], c[j]}));
  }
  struct PairMap {
    Retraction r;
    std::map<std::string, std::pair<std::string, std::string>> decode;
  };
  std::map<std::pair<int, int>, PairMap> pair_maps;
  auto pair_retraction = [&](int i, int j) -> const PairMap& {
    auto key = std::make_pair(i, j);
    auto it = pair_maps.find(key);
    if (it != pair_maps.end()) return it->second;
    std::vector<std::string> nodes(proj[key].begin(), proj[key].end());
    ProductSubgraph ps = make_product_subgraph(factors[i], factors[j], nodes);
    PairMap pm;
    pm.r = two_orbit_retraction(ps);
    pm.decode = ps.coords;
    return pair_maps.emplace(key, std::move(pm)).first->second;
  };

  std::map<std::string, std::vector<std::string>> cur;
  for (const std::string& x : product.ids()) cur[x] = decode.at(x);
  FiniteMetric dk = path_metric(product);
  auto total_excess = [&]() {
    Rat sum(0);
    for (const auto& [x, c] : cur) {
      Rat best(-1);
      for (const std::string& t : sub.ids()) {
        Rat d = dk.at(tuple_id(c), t);
        if (best.sign() < 0 || d < best) best = d;
      }
      sum += best;
    }
    return sum;
  };
  Rat last = total_excess();
  long long limit = static_cast<long long>(sub.size()) * sub.size() * product.size() + 1;
  for (long long iter = 0;; ++iter) {
    int bi = -1, bj = -1;
    for (const auto& [x, c] : cur) {
      for (int i = 0; i < k && bi < 0; ++i)
        for (int j = i + 1; j < k; ++j)
          if (!proj[{i, j}].count(tuple_id({c[i], c[j]}))) {
            bi = i;
            bj = j;
            break;
          }
      if (bi >= 0) break;
    }
    if (bi < 0) break;
    if (iter >= limit) fail("NonTermination", "iteration bound exceeded");
    const PairMap& g = pair_retraction(bi, bj);
    for (auto& [x, c] : cur) {
      const auto& img = g.decode.at(g.r.at(tuple_id({c[bi], c[bj]})));
      c[bi] = img.first;
      c[bj] = img.second;
    }
    Rat now = total_excess();
    if (!(now < last)) fail("NonTermination", "no progress toward the subgraph");
    last = now;
  }
  Retraction r;
  for (const auto& [x, c] : cur) r.gamma[x] = tuple_id(c);
  verify_retraction(product, sub, r);
  return r;
}

}  // namespace zeroext
