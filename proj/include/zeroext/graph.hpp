#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "zeroext/error.hpp"
#include "zeroext/rat.hpp"

namespace zeroext {

// Unordered node pair, stored with u <= v.
struct Edge {
  int u;
  int v;

  Edge(int a, int b) : u(std::min(a, b)), v(std::max(a, b)) {
    if (a == b) fail("LoopEdge", "edge endpoints coincide");
  }

  friend bool operator<(const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  }
  friend bool operator==(const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }
  friend bool operator!=(const Edge& a, const Edge& b) { return !(a == b); }

  int other(int x) const { return x == u ? v : u; }
  bool has(int x) const { return x == u || x == v; }
};

// Simple undirected graph over string-labeled nodes, indexed internally.
class Graph {
 public:
  Graph() = default;

  int add_node(const std::string& id) {
    auto it = index_.find(id);
    if (it != index_.end()) return it->second;
    int i = static_cast<int>(ids_.size());
    index_[id] = i;
    ids_.push_back(id);
    adj_.emplace_back();
    return i;
  }

  void add_edge(const std::string& a, const std::string& b) {
    add_edge_idx(add_node(a), add_node(b));
  }

  void add_edge_idx(int a, int b) {
    Edge e(a, b);
    if (edges_.insert(e).second) {
      adj_[a].push_back(b);
      adj_[b].push_back(a);
    }
  }

  int size() const { return static_cast<int>(ids_.size()); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::string& id(int i) const { return ids_[i]; }

  bool has_node(const std::string& id) const { return index_.count(id) != 0; }

  int index(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) fail("UnknownPoint", "no node '" + id + "'");
    return it->second;
  }

  const std::set<Edge>& edges() const { return edges_; }
  bool has_edge(int a, int b) const { return a != b && edges_.count(Edge(a, b)) != 0; }
  const std::vector<int>& neighbors(int i) const { return adj_[i]; }
  int degree(int i) const { return static_cast<int>(adj_[i].size()); }

  std::vector<int> component_of(int start) const {
    std::vector<char> seen(size(), 0);
    std::vector<int> out;
    std::queue<int> q;
    q.push(start);
    seen[start] = 1;
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      out.push_back(x);
      for (int y : adj_[x])
        if (!seen[y]) {
          seen[y] = 1;
          q.push(y);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool connected() const {
    if (size() == 0) return true;
    return static_cast<int>(component_of(0).size()) == size();
  }

  // Two-coloring; empty result means an odd cycle exists.
  bool bipartition(std::vector<int>* color) const {
    color->assign(size(), -1);
    for (int s = 0; s < size(); ++s) {
      if ((*color)[s] != -1) continue;
      (*color)[s] = 0;
      std::queue<int> q;
      q.push(s);
      while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (int y : adj_[x]) {
          if ((*color)[y] == -1) {
            (*color)[y] = 1 - (*color)[x];
            q.push(y);
          } else if ((*color)[y] == (*color)[x]) {
            return false;
          }
        }
      }
    }
    return true;
  }

  bool bipartite() const {
    std::vector<int> c;
    return bipartition(&c);
  }

  // Hop distances from one source.
  std::vector<int> bfs_dist(int s) const {
    std::vector<int> d(size(), -1);
    std::queue<int> q;
    d[s] = 0;
    q.push(s);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (int y : adj_[x])
        if (d[y] < 0) {
          d[y] = d[x] + 1;
          q.push(y);
        }
    }
    return d;
  }

  // Subgraph induced by the given node indices, keeping their ids.
  Graph induced(const std::vector<int>& keep) const {
    Graph g;
    for (int i : keep) g.add_node(ids_[i]);
    for (const Edge& e : edges_) {
      bool ku = std::find(keep.begin(), keep.end(), e.u) != keep.end();
      bool kv = std::find(keep.begin(), keep.end(), e.v) != keep.end();
      if (ku && kv) g.add_edge(ids_[e.u], ids_[e.v]);
    }
    return g;
  }

 private:
  std::vector<std::string> ids_;
  std::map<std::string, int> index_;
  std::vector<std::vector<int>> adj_;
  std::set<Edge> edges_;
};

struct EdgeLengths {
  Graph graph;
  std::map<Edge, Rat> len;

  const Rat& at(const Edge& e) const {
    auto it = len.find(e);
    if (it == len.end()) fail("MissingLength", "edge without a length");
    return it->second;
  }
};

// Joins coordinate labels into a product node id.
inline std::string tuple_id(const std::vector<std::string>& coords) {
  std::string s;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) s += ",";
    s += coords[i];
  }
  return s;
}

inline std::vector<std::string> split_tuple_id(const std::string& id) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : id) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

// Cartesian product: tuples adjacent when exactly one coordinate moves along
// an edge of its factor.
inline Graph cartesian_product(const std::vector<Graph>& factors) {
  if (factors.empty()) fail("EmptyProduct", "no factors");
  std::vector<std::vector<std::string>> tuples = {{}};
  for (const Graph& f : factors) {
    std::vector<std::vector<std::string>> next;
    for (const auto& t : tuples)
      for (const std::string& id : f.ids()) {
        auto t2 = t;
        t2.push_back(id);
        next.push_back(std::move(t2));
      }
    tuples = std::move(next);
  }
  Graph g;
  for (const auto& t : tuples) g.add_node(tuple_id(t));
  for (const auto& t : tuples) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      int xi = factors[i].index(t[i]);
      for (int yi : factors[i].neighbors(xi)) {
        auto t2 = t;
        t2[i] = factors[i].id(yi);
        g.add_edge(tuple_id(t), tuple_id(t2));
      }
    }
  }
  return g;
}

}  // namespace zeroext
