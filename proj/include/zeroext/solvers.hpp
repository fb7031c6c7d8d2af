#pragma once

#include <array>
#include <cstdlib>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "zeroext/instance.hpp"
#include "zeroext/lp.hpp"
#include "zeroext/modular.hpp"
#include "zeroext/retraction.hpp"

namespace zeroext {

inline long long enumeration_budget() {
  if (const char* s = std::getenv("ZEROEXT_BUDGET")) {
    long long v = std::atoll(s);
    if (v > 0) return v;
  }
  return 2000000;
}

struct BruteForceResult {
  Rat tau;
  ZeroExtension best;
  long long num_optimal = 0;
};

// Exhaustive assignment search with incremental costs. Prunes branches whose
// partial cost already exceeds the incumbent (strictly, so optima can still
// be counted). Pins force specific free points to terminals.
inline BruteForceResult brute_force_full(
    const Instance& inst, const std::vector<std::pair<std::string, std::string>>& pins,
    long long budget = -1) {
  inst.validate();
  if (budget < 0) budget = enumeration_budget();
  const auto& T = inst.terminals();
  std::vector<std::string> free_pts = inst.free_points();
  std::map<std::string, std::string> pinned;
  for (const auto& [p, t] : pins) {
    if (inst.is_terminal(p) || !inst.mu.has_point(t))
      fail("BadPin", "pin must send a free point to a terminal");
    pinned[p] = t;
  }
  int nt = static_cast<int>(T.size());
  long long combos = 1;
  for (const std::string& p : free_pts) {
    if (pinned.count(p)) continue;
    if (combos > budget / nt + 1) combos = budget + 1;
    combos *= nt;
    if (combos > budget) fail("BudgetExceeded", "assignment space larger than the budget");
  }

  int nf = static_cast<int>(free_pts.size());
  // cost tables indexed by free-point position and terminal index
  std::vector<std::vector<Rat>> base(nf, std::vector<Rat>(nt, Rat(0)));
  for (int i = 0; i < nf; ++i)
    for (int a = 0; a < nt; ++a) {
      Rat sum(0);
      for (int b = 0; b < nt; ++b) sum += inst.c(free_pts[i], T[b]) * inst.mu.at(a, b);
      base[i][a] = sum;
    }
  std::vector<std::vector<Rat>> pair_cost(nf, std::vector<Rat>(nf, Rat(0)));
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j) pair_cost[i][j] = inst.c(free_pts[i], free_pts[j]);
  Rat terminal_part(0);
  for (int a = 0; a < nt; ++a)
    for (int b = a + 1; b < nt; ++b) terminal_part += inst.c(T[a], T[b]) * inst.mu.at(a, b);

  BruteForceResult res;
  bool have = false;
  std::vector<int> choice(nf, -1), best_choice(nf, -1);
  std::function<void(int, Rat)> rec = [&](int i, Rat acc) {
    if (have && acc > res.tau) return;
    if (i == nf) {
      if (!have || acc < res.tau) {
        res.tau = acc;
        best_choice = choice;
        res.num_optimal = 1;
        have = true;
      } else if (acc == res.tau) {
        ++res.num_optimal;
      }
      return;
    }
    auto it = pinned.find(free_pts[i]);
    int lo = 0, hi = nt;
    if (it != pinned.end()) {
      lo = inst.mu.index(it->second);
      hi = lo + 1;
    }
    for (int a = lo; a < hi; ++a) {
      Rat add = base[i][a];
      for (int j = 0; j < i; ++j)
        if (pair_cost[j][i].sign() != 0 || pair_cost[i][j].sign() != 0)
          add += pair_cost[i][j] * inst.mu.at(a, choice[j]);
      choice[i] = a;
      rec(i + 1, acc + add);
    }
    choice[i] = -1;
  };
  rec(0, terminal_part);
  for (const std::string& t : T) res.best.assign[t] = t;
  for (int i = 0; i < nf; ++i) res.best.assign[free_pts[i]] = T[best_choice[i]];
  return res;
}

inline std::pair<Rat, ZeroExtension> brute_force(const Instance& inst, long long budget = -1) {
  BruteForceResult r = brute_force_full(inst, {}, budget);
  return {r.tau, r.best};
}

struct Cut {
  std::map<std::string, int> side;  // 0 = source side
  Rat value;
};

// Exact max-flow (shortest augmenting paths) on the complete cost graph; the
// returned cut is the source-side-minimal one (residual reachability).
inline Cut min_cut(const std::vector<std::string>& points, const std::map<PointPair, Rat>& cost,
                   const std::set<std::string>& A, const std::set<std::string>& B) {
  if (A.empty() || B.empty()) fail("BadCut", "both sides need a seed");
  for (const std::string& a : A)
    if (B.count(a)) fail("BadCut", "seed sets overlap");
  int n = static_cast<int>(points.size());
  std::map<std::string, int> idx;
  for (int i = 0; i < n; ++i) idx[points[i]] = i;
  int S = n, Tk = n + 1, total = n + 2;
  // adjacency with residual capacities
  std::vector<std::map<int, Rat>> cap(total);
  auto add = [&](int u, int v, const Rat& w) {
    cap[u][v] += w;
    cap[v][u] += w;  // undirected pair cost
  };
  Rat inf(0);
  for (const auto& [key, w] : cost) {
    if (w.sign() < 0) fail("BadCut", "negative cost");
    if (w.sign() == 0) continue;
    auto ia = idx.find(key.first);
    auto ib = idx.find(key.second);
    if (ia == idx.end() || ib == idx.end()) fail("UnknownPoint", "cost on unknown point");
    add(ia->second, ib->second, w);
    inf += w;
  }
  inf += Rat(1);
  for (const std::string& a : A) {
    cap[S][idx.at(a)] += inf;
    cap[idx.at(a)][S];  // ensure reverse entry exists
  }
  for (const std::string& b : B) {
    cap[idx.at(b)][Tk] += inf;
    cap[Tk][idx.at(b)];
  }
  Rat flow(0);
  while (true) {
    std::vector<int> prev(total, -1);
    std::queue<int> q;
    q.push(S);
    prev[S] = S;
    while (!q.empty() && prev[Tk] < 0) {
      int x = q.front();
      q.pop();
      for (auto& [y, c] : cap[x])
        if (prev[y] < 0 && c.sign() > 0) {
          prev[y] = x;
          q.push(y);
        }
    }
    if (prev[Tk] < 0) break;
    Rat aug = inf;
    for (int v = Tk; v != S; v = prev[v])
      if (cap[prev[v]][v] < aug) aug = cap[prev[v]][v];
    for (int v = Tk; v != S; v = prev[v]) {
      cap[prev[v]][v] -= aug;
      cap[v][prev[v]] += aug;
    }
    flow += aug;
  }
  // source side = residual reachability from S
  std::vector<char> reach(total, 0);
  std::queue<int> q;
  q.push(S);
  reach[S] = 1;
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (auto& [y, c] : cap[x])
      if (!reach[y] && c.sign() > 0) {
        reach[y] = 1;
        q.push(y);
      }
  }
  Cut cut;
  cut.value = flow;
  for (int i = 0; i < n; ++i) cut.side[points[i]] = reach[i] ? 0 : 1;
  return cut;
}

struct MedianRunInfo {
  long long replacements = 0;
  long long bound = 0;
};

// Cut-uncrossing for median metrics: one minimum cut per orbit bipartition,
// then repeatedly disentangle pairs of sides that meet outside the terminals.
inline ZeroExtension solve_median(const Instance& inst, MedianRunInfo* info = nullptr) {
  inst.validate();
  if (!classify(inst.mu).is_median) fail("NotMedian", "metric is not median");
  OrbitDecomposition dec = orbit_decomposition(inst.mu);
  int k = static_cast<int>(dec.orbits.size());
  // Side 0 of bipartition i holds the component of the smaller representative.
  std::vector<std::array<std::set<std::string>, 2>> sides(k);
  for (int i = 0; i < k; ++i) {
    if (dec.orbit_graphs[i].size() != 2)
      fail("NotMedian", "orbit graph is not a single cut");
    std::vector<std::string> reps = dec.orbit_graphs[i].ids();
    std::sort(reps.begin(), reps.end());
    std::set<std::string> a_terms = dec.partitions[i].at(reps[0]);
    Cut cut = min_cut(inst.points, inst.cost, a_terms, dec.partitions[i].at(reps[1]));
    for (const std::string& p : inst.points) sides[i][cut.side.at(p)].insert(p);
  }
  long long bound = static_cast<long long>(inst.terminals().size()) *
                    inst.terminals().size() * inst.points.size();
  long long steps = 0;
  auto meets_T = [&](const std::set<std::string>& Y, const std::set<std::string>& Z,
                     bool terminals_only) {
    for (const std::string& p : Y)
      if (Z.count(p) && (!terminals_only || inst.is_terminal(p))) return true;
    return false;
  };
  while (true) {
    int yi = -1, ya = 0, zi = 0, za = 0;
    for (int i = 0; i < k && yi < 0; ++i)
      for (int a = 0; a < 2 && yi < 0; ++a)
        for (int j = 0; j < k && yi < 0; ++j) {
          if (j == i) continue;
          for (int b = 0; b < 2; ++b) {
            if (!meets_T(sides[i][a], sides[j][b], true) &&
                meets_T(sides[i][a], sides[j][b], false)) {
              yi = i;
              ya = a;
              zi = j;
              za = b;
              break;
            }
          }
        }
    if (yi < 0) break;
    if (++steps > bound) fail("IterationOverflow", "uncrossing exceeded the bound");
    std::set<std::string> inter;
    for (const std::string& p : sides[yi][ya])
      if (sides[zi][za].count(p)) inter.insert(p);
    for (const std::string& p : inter) {
      sides[yi][ya].erase(p);
      sides[yi][1 - ya].insert(p);
      sides[zi][za].erase(p);
      sides[zi][1 - za].insert(p);
    }
  }
  if (info) {
    info->replacements = steps;
    info->bound = bound;
  }
  // Assignment: the terminal lying on the same side as the point everywhere.
  ZeroExtension z;
  for (const std::string& p : inst.points) {
    std::string found;
    for (const std::string& t : inst.terminals()) {
      bool ok = true;
      for (int i = 0; i < k && ok; ++i) {
        int sp = sides[i][0].count(p) ? 0 : 1;
        int st = sides[i][0].count(t) ? 0 : 1;
        if (sp != st) ok = false;
      }
      if (ok) {
        found = t;
        break;
      }
    }
    if (found.empty()) fail("IterationOverflow", "uncrossed family separates a point from T");
    z.assign[p] = found;
  }
  validate_zero_extension(inst, z);
  return z;
}

// Aggregate the instance onto one orbit: terminal blocks collapse to their
// representatives, costs sum over blocks.
inline Instance shrink_orbit_instance(const Instance& inst, const OrbitDecomposition& dec,
                                      int i) {
  if (i < 0 || i >= static_cast<int>(dec.orbits.size())) fail("BadIndex", "orbit index");
  const Graph& hi = dec.orbit_graphs[i];
  Instance out;
  out.mu = path_metric(hi);
  std::map<std::string, std::string> rep_of;  // terminal -> representative
  for (const auto& [rep, members] : dec.partitions[i])
    for (const std::string& v : members) rep_of[v] = rep;
  for (const std::string& r : hi.ids()) out.points.push_back(r);
  for (const std::string& p : inst.points)
    if (!inst.is_terminal(p)) out.points.push_back(p);
  auto image = [&](const std::string& p) {
    auto it = rep_of.find(p);
    return it == rep_of.end() ? p : it->second;
  };
  for (const auto& [key, w] : inst.cost) {
    std::string a = image(key.first), b = image(key.second);
    if (a != b) out.add_cost(a, b, w);
  }
  return out;
}

struct OrbitRunInfo {
  long long iterations = 0;
  long long bound = 0;
  bool strict_progress = true;
  std::vector<Rat> orbit_taus;
};

// Straightens a product configuration by lifted two-orbit retractions until
// every point is a terminal image, then reads off the assignment.
inline ZeroExtension uncross_configuration(const Instance& inst, const OrbitDecomposition& dec,
                                           const CanonicalEmbedding& emb,
                                           std::map<std::string, std::vector<std::string>> config,
                                           OrbitRunInfo* info = nullptr) {
  int k = static_cast<int>(dec.orbits.size());
  // Pairwise terminal projections and their product metrics.
  std::map<std::pair<int, int>, std::set<std::string>> proj;
  for (const std::string& t : inst.terminals())
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        proj[{i, j}].insert(tuple_id({emb.phi.at(t)[i], emb.phi.at(t)[j]}));

  std::vector<FiniteMetric> dhi;
  for (int i = 0; i < k; ++i) dhi.push_back(path_metric(dec.orbit_graphs[i]));
  auto config_excess = [&]() {
    Rat sum(0);
    for (const auto& [p, c] : config) {
      Rat best(-1);
      for (const std::string& t : inst.terminals()) {
        Rat d(0);
        for (int i = 0; i < k; ++i) d += dhi[i].at(c[i], emb.phi.at(t)[i]);
        if (best.sign() < 0 || d < best) best = d;
      }
      sum += best;
    }
    return sum;
  };

  // Coordinate ids may themselves contain the tuple separator, so product
  // node ids are decoded through an explicit table rather than re-split.
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
    ProductSubgraph ps =
        make_product_subgraph(dec.orbit_graphs[i], dec.orbit_graphs[j], nodes);
    PairMap pm;
    pm.r = two_orbit_retraction(ps);
    for (const std::string& a : dec.orbit_graphs[i].ids())
      for (const std::string& b : dec.orbit_graphs[j].ids())
        pm.decode[tuple_id({a, b})] = {a, b};
    return pair_maps.emplace(key, std::move(pm)).first->second;
  };

  // Step (c): uncross until every coordinate pair projects into the terminals.
  long long bound = static_cast<long long>(inst.terminals().size()) *
                    inst.terminals().size() * inst.points.size();
  long long iters = 0;
  bool strict = true;
  Rat last = config_excess();
  while (true) {
    int bi = -1, bj = -1;
    for (const std::string& p : inst.points) {
      const auto& c = config.at(p);
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
    if (++iters > bound) fail("IterationOverflow", "uncrossing exceeded the bound");
    const PairMap& g = pair_retraction(bi, bj);
    for (auto& [p, c] : config) {
      const auto& img = g.decode.at(g.r.at(tuple_id({c[bi], c[bj]})));
      c[bi] = img.first;
      c[bj] = img.second;
    }
    Rat now = config_excess();
    if (!(now < last)) strict = false;
    last = now;
  }

  // Step (d): every configuration point is a terminal image.
  ZeroExtension z;
  for (const std::string& p : inst.points) {
    auto it = emb.inverse.find(tuple_id(config.at(p)));
    if (it == emb.inverse.end())
      fail("IterationOverflow", "configuration point escaped the terminal image");
    z.assign[p] = it->second;
  }
  validate_zero_extension(inst, z);
  if (info) {
    info->iterations = iters;
    info->bound = bound;
    info->strict_progress = strict;
  }
  return z;
}

// Per-orbit optimal cuts or relaxation solves, combined into a product
// configuration and straightened by uncross_configuration.
inline ZeroExtension solve_orbit_uncrossing(const Instance& inst, OrbitRunInfo* info = nullptr) {
  inst.validate();
  MetricClassification cls = classify(inst.mu);
  if (!cls.theorem3_applicable) fail("NotApplicable", "orbit pipeline hypotheses fail");
  OrbitDecomposition dec = orbit_decomposition(inst.mu);
  CanonicalEmbedding emb = canonical_embedding(dec);
  int k = static_cast<int>(dec.orbits.size());

  // Step (a): solve each orbit subproblem.
  std::vector<std::map<std::string, std::string>> sigma(k);  // V -> T_i
  std::vector<Rat> taus(k);
  for (int i = 0; i < k; ++i) {
    Instance shrunk = shrink_orbit_instance(inst, dec, i);
    ZeroExtension zi;
    if (dec.orbit_graphs[i].size() == 2) {
      std::vector<std::string> reps = dec.orbit_graphs[i].ids();
      Cut cut = min_cut(shrunk.points, shrunk.cost, {reps[0]}, {reps[1]});
      for (const std::string& p : shrunk.points)
        zi.assign[p] = reps[cut.side.at(p)];
    } else {
      zi = solve_minimizable(shrunk);
    }
    taus[i] = zero_extension_cost(shrunk, zi);
    for (const std::string& p : inst.points) {
      if (inst.is_terminal(p))
        sigma[i][p] = emb.phi.at(p)[i];
      else
        sigma[i][p] = zi.at(p);
    }
  }

  // Step (b): product configuration.
  std::map<std::string, std::vector<std::string>> config;
  for (const std::string& p : inst.points) {
    std::vector<std::string> coords(k);
    for (int i = 0; i < k; ++i) coords[i] = sigma[i].at(p);
    config[p] = std::move(coords);
  }

  // Steps (c)+(d).
  ZeroExtension z = uncross_configuration(inst, dec, emb, std::move(config), info);
  Rat expected(0);
  for (int i = 0; i < k; ++i) expected += dec.weights[i] * taus[i];
  if (zero_extension_cost(inst, z) != expected)
    fail("NotApplicable", "combined cost misses the orbit total");
  if (info) info->orbit_taus = taus;
  return z;
}

}  // namespace zeroext
