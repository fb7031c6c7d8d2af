#pragma once

#include <set>
#include <string>
#include <vector>

#include "zeroext/graph.hpp"
#include "zeroext/rat.hpp"

namespace zeroext {

// Exact symmetric distance matrix over labeled points. Semimetric by default
// (zero distances between distinct points allowed); metric() additionally
// requires positive off-diagonal entries.
class FiniteMetric {
 public:
  FiniteMetric() = default;

  FiniteMetric(std::vector<std::string> points, std::vector<std::vector<Rat>> dist)
      : points_(std::move(points)), dist_(std::move(dist)) {
    int n = static_cast<int>(points_.size());
    for (int i = 0; i < n; ++i) index_[points_[i]] = i;
    if (static_cast<int>(index_.size()) != n) fail("DuplicatePoint", "repeated point id");
    if (static_cast<int>(dist_.size()) != n) fail("BadMatrix", "row count mismatch");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(dist_[i].size()) != n) fail("BadMatrix", "column count mismatch");
      if (!dist_[i][i].is_zero()) fail("NotASemimetric", "nonzero diagonal");
      for (int j = 0; j < n; ++j) {
        if (dist_[i][j] != dist_[j][i]) fail("NotASemimetric", "asymmetric entry");
        if (dist_[i][j].sign() < 0) fail("NotASemimetric", "negative entry");
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (dist_[i][j] + dist_[j][k] < dist_[i][k])
            fail("NotASemimetric", "triangle inequality fails at " + points_[i] + "," +
                                       points_[j] + "," + points_[k]);
  }

  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<std::string>& points() const { return points_; }
  const std::string& point(int i) const { return points_[i]; }

  bool has_point(const std::string& id) const { return index_.count(id) != 0; }

  int index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) fail("UnknownPoint", "no point '" + id + "'");
    return it->second;
  }

  const Rat& at(int i, int j) const { return dist_[i][j]; }
  const Rat& at(const std::string& a, const std::string& b) const {
    return dist_[index(a)][index(b)];
  }

  bool is_metric() const {
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j)
        if (dist_[i][j].is_zero()) return false;
    return true;
  }

  // Restriction to a sublist of points, keeping the given order.
  FiniteMetric restrict(const std::vector<std::string>& subset) const {
    int n = static_cast<int>(subset.size());
    std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = at(subset[i], subset[j]);
    return FiniteMetric(subset, std::move(d));
  }

 private:
  std::vector<std::string> points_;
  std::map<std::string, int> index_;
  std::vector<std::vector<Rat>> dist_;
};

inline FiniteMetric weighted_path_metric(const Graph& g, const EdgeLengths& lens) {
  if (!g.connected()) fail("DisconnectedGraph", "path metric needs a connected graph");
  int n = g.size();
  // Floyd-Warshall over exact rationals; desk-scale node counts.
  const Rat kInf(INT64_MAX / 4);
  std::vector<std::vector<Rat>> d(n, std::vector<Rat>(n, kInf));
  for (int i = 0; i < n; ++i) d[i][i] = Rat(0);
  for (const Edge& e : g.edges()) {
    Rat w = lens.at(e);
    if (w.sign() < 0) fail("NegativeLength", "negative edge length");
    if (w < d[e.u][e.v]) d[e.u][e.v] = d[e.v][e.u] = w;
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return FiniteMetric(g.ids(), std::move(d));
}

inline FiniteMetric path_metric(const Graph& g) {
  EdgeLengths lens;
  lens.graph = g;
  for (const Edge& e : g.edges()) lens.len[e] = Rat(1);
  return weighted_path_metric(g, lens);
}

inline bool between(const FiniteMetric& m, const std::string& x, const std::string& z,
                    const std::string& y) {
  return m.at(x, z) + m.at(z, y) == m.at(x, y);
}

// Least graph whose shortest paths reproduce the metric: keep exactly the
// pairs with no third point between them.
inline std::pair<Graph, EdgeLengths> underlying_graph(const FiniteMetric& m) {
  if (!m.is_metric()) fail("NotAMetric", "underlying graph needs positive distances");
  Graph g;
  for (const std::string& p : m.points()) g.add_node(p);
  EdgeLengths lens;
  for (int i = 0; i < m.size(); ++i)
    for (int j = i + 1; j < m.size(); ++j) {
      bool blocked = false;
      for (int k = 0; k < m.size() && !blocked; ++k)
        if (k != i && k != j && m.at(i, k) + m.at(k, j) == m.at(i, j)) blocked = true;
      if (!blocked) {
        g.add_edge_idx(i, j);
        lens.len[Edge(i, j)] = m.at(i, j);
      }
    }
  lens.graph = g;
  return {g, lens};
}

inline std::set<std::string> medians(const FiniteMetric& m, const std::string& s0,
                                     const std::string& s1, const std::string& s2) {
  std::set<std::string> out;
  for (const std::string& z : m.points())
    if (between(m, s0, z, s1) && between(m, s1, z, s2) && between(m, s0, z, s2))
      out.insert(z);
  return out;
}

}  // namespace zeroext
