#pragma once

#include <random>
#include <string>
#include <vector>

#include "zeroext/instance.hpp"
#include "zeroext/metric.hpp"
#include "zeroext/modular.hpp"

namespace fixtures {

using namespace zeroext;

inline Graph path_graph(int n, const std::string& prefix = "p") {
  Graph g;
  for (int i = 0; i < n; ++i) g.add_node(prefix + std::to_string(i));
  for (int i = 0; i + 1 < n; ++i)
    g.add_edge(prefix + std::to_string(i), prefix + std::to_string(i + 1));
  return g;
}

inline Graph cycle_graph(int n, const std::string& prefix = "c") {
  Graph g = path_graph(n, prefix);
  g.add_edge(prefix + std::to_string(n - 1), prefix + "0");
  return g;
}

inline Graph complete_graph(int n, const std::string& prefix = "k") {
  Graph g;
  for (int i = 0; i < n; ++i) g.add_node(prefix + std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      g.add_edge(prefix + std::to_string(i), prefix + std::to_string(j));
  return g;
}

inline Graph complete_bipartite(int a, int b) {
  Graph g;
  for (int i = 0; i < a; ++i) g.add_node("a" + std::to_string(i));
  for (int j = 0; j < b; ++j) g.add_node("b" + std::to_string(j));
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j)
      g.add_edge("a" + std::to_string(i), "b" + std::to_string(j));
  return g;
}

// K3,3 with the edge a0-b0 removed: smallest bipartite graph that is
// hereditary modular but carries a twist.
inline Graph k33_minus() {
  Graph g = complete_bipartite(3, 3);
  Graph out;
  for (const std::string& v : g.ids()) out.add_node(v);
  for (const Edge& e : g.edges()) {
    std::string u = g.id(e.u), v = g.id(e.v);
    if ((u == "a0" && v == "b0") || (u == "b0" && v == "a0")) continue;
    out.add_edge(u, v);
  }
  return out;
}

inline Graph k2(const std::string& a, const std::string& b) {
  Graph g;
  g.add_node(a);
  g.add_node(b);
  g.add_edge(a, b);
  return g;
}

inline Graph hypercube3() {
  return cartesian_product({k2("0", "1"), k2("0", "1"), k2("0", "1")});
}

// Seven-node base graph whose prism (product with K2) has three orbits, one
// with a K2,3 orbit graph.
inline Graph seven_node_base() {
  Graph g;
  for (int i = 1; i <= 7; ++i) g.add_node(std::to_string(i));
  auto e = [&](int a, int b) { g.add_edge(std::to_string(a), std::to_string(b)); };
  e(1, 2);
  e(4, 5);
  e(1, 4);
  e(2, 5);
  e(3, 6);
  e(4, 7);
  e(7, 2);
  e(2, 3);
  e(5, 6);
  return g;
}

inline Graph prism14() { return cartesian_product({seven_node_base(), k2("0", "1")}); }

inline FiniteMetric metric_of(const Graph& g) { return path_metric(g); }

// 4-cycle with alternating side lengths a, b.
inline FiniteMetric rectangle_metric(const Rat& a, const Rat& b) {
  Graph g = cycle_graph(4, "r");
  EdgeLengths lens;
  lens.graph = g;
  lens.len[Edge(g.index("r0"), g.index("r1"))] = a;
  lens.len[Edge(g.index("r1"), g.index("r2"))] = b;
  lens.len[Edge(g.index("r2"), g.index("r3"))] = a;
  lens.len[Edge(g.index("r3"), g.index("r0"))] = b;
  return weighted_path_metric(g, lens);
}

// Star instance over d^{K3}: one free point tied to all three terminals.
inline Instance k3_star() {
  Instance inst;
  inst.mu = metric_of(complete_graph(3));
  inst.points = inst.mu.points();
  inst.points.push_back("x");
  for (const std::string& t : inst.mu.points()) inst.add_cost("x", t, Rat(1));
  return inst;
}

// Random instance over a fixed metric: nfree extra points, every pair gets an
// independent integer cost in [0, maxc].
inline Instance random_instance(const FiniteMetric& mu, int nfree, int maxc,
                                std::mt19937& rng) {
  Instance inst;
  inst.mu = mu;
  inst.points = mu.points();
  for (int i = 0; i < nfree; ++i) inst.points.push_back("f" + std::to_string(i));
  std::uniform_int_distribution<int> dist(0, maxc);
  for (std::size_t i = 0; i < inst.points.size(); ++i)
    for (std::size_t j = i + 1; j < inst.points.size(); ++j) {
      bool both_terminal = mu.has_point(inst.points[i]) && mu.has_point(inst.points[j]);
      int w = dist(rng);
      if (both_terminal && w > 1) w = 1;  // keep terminal-terminal load light
      if (w > 0) inst.add_cost(inst.points[i], inst.points[j], Rat(w));
    }
  return inst;
}

}  // namespace fixtures
