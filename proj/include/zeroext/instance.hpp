#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "zeroext/metric.hpp"

namespace zeroext {

using PointPair = std::pair<std::string, std::string>;

inline PointPair make_pair_key(const std::string& a, const std::string& b) {
  return a < b ? PointPair{a, b} : PointPair{b, a};
}

// A terminal metric, a superset of points, and nonnegative costs on pairs.
// Missing cost entries mean zero.
struct Instance {
  FiniteMetric mu;                  // on the terminals
  std::vector<std::string> points;  // V, superset of the terminals
  std::map<PointPair, Rat> cost;

  const std::vector<std::string>& terminals() const { return mu.points(); }

  bool is_terminal(const std::string& p) const { return mu.has_point(p); }

  std::vector<std::string> free_points() const {
    std::vector<std::string> out;
    for (const std::string& p : points)
      if (!is_terminal(p)) out.push_back(p);
    return out;
  }

  Rat c(const std::string& a, const std::string& b) const {
    if (a == b) return Rat(0);
    auto it = cost.find(make_pair_key(a, b));
    return it == cost.end() ? Rat(0) : it->second;
  }

  void add_cost(const std::string& a, const std::string& b, const Rat& w) {
    if (a == b) return;
    auto key = make_pair_key(a, b);
    auto it = cost.find(key);
    if (it == cost.end())
      cost[key] = w;
    else
      it->second += w;
  }

  void validate() const {
    for (const std::string& t : terminals())
      if (std::find(points.begin(), points.end(), t) == points.end())
        fail("BadInstance", "terminal '" + t + "' missing from the point set");
    std::set<std::string> pset(points.begin(), points.end());
    if (pset.size() != points.size()) fail("BadInstance", "duplicate point");
    for (const auto& [key, w] : cost) {
      if (!pset.count(key.first) || !pset.count(key.second))
        fail("BadInstance", "cost on unknown pair " + key.first + "," + key.second);
      if (w.sign() < 0) fail("BadInstance", "negative cost");
    }
  }
};

// Assignment of every point to a terminal, fixing terminals.
struct ZeroExtension {
  std::map<std::string, std::string> assign;

  const std::string& at(const std::string& p) const {
    auto it = assign.find(p);
    if (it == assign.end()) fail("UnknownPoint", "no assignment for '" + p + "'");
    return it->second;
  }
};

inline void validate_zero_extension(const Instance& inst, const ZeroExtension& z) {
  for (const std::string& p : inst.points) {
    const std::string& t = z.at(p);
    if (!inst.is_terminal(t)) fail("BadAssignment", "'" + p + "' mapped to non-terminal");
    if (inst.is_terminal(p) && t != p) fail("BadAssignment", "terminal moved");
  }
}

inline Rat zero_extension_cost(const Instance& inst, const ZeroExtension& z) {
  Rat total(0);
  for (const auto& [key, w] : inst.cost)
    total += w * inst.mu.at(z.at(key.first), z.at(key.second));
  return total;
}

}  // namespace zeroext
