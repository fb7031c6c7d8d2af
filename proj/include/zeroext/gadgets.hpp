#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "zeroext/modular.hpp"
#include "zeroext/solvers.hpp"

namespace zeroext {

inline Rat pinned_tau(const Instance& inst,
                      const std::vector<std::pair<std::string, std::string>>& pins,
                      long long budget = -1) {
  return brute_force_full(inst, pins, budget).tau;
}

// Hardness gadget: an instance with marked terminals s,t and free points x,y
// whose pinned optima separate "agreeing" from "disagreeing" pins by delta.
struct Gadget {
  Instance instance;
  std::string s, t, x, y;
  Rat tau_hat;
  Rat delta;
  std::map<std::string, Rat> weights;
  std::vector<std::string> z;       // added free points in order
  std::vector<std::string> attach;  // anchor terminals (s_i sequence)
};

struct GadgetReport {
  Rat tau_hat;
  Rat delta;
  long long num_optimal = 0;
  std::map<std::pair<std::string, std::string>, Rat> pinned;  // (x-pin, y-pin)
};

// Exhaustive check of the separation property: pin x and y to every terminal
// pair; the s/t "cut" pins hit the optimum, same-side pins cost exactly
// tau_hat + delta, everything else at least that.
inline GadgetReport verify_gadget(const Gadget& g, long long budget = -1) {
  GadgetReport rep;
  // The (x,y) pins partition the assignment space, so each subproblem stays
  // within budget and the per-pin optima counts add up to the global count.
  std::map<std::pair<std::string, std::string>, long long> counts;
  for (const std::string& u : g.instance.terminals())
    for (const std::string& v : g.instance.terminals()) {
      BruteForceResult r = brute_force_full(g.instance, {{g.x, u}, {g.y, v}}, budget);
      rep.pinned[{u, v}] = r.tau;
      counts[{u, v}] = r.num_optimal;
    }
  Rat best = rep.pinned.begin()->second;
  for (const auto& [k, val] : rep.pinned)
    if (val < best) best = val;
  auto bad = [&](const std::string& u, const std::string& v, const std::string& why) {
    fail("PropertyViolated", "pin x->" + u + ", y->" + v + ": " + why);
  };
  if (best != g.tau_hat) bad(g.s, g.t, "minimum differs from the stated optimum");
  if (g.delta.sign() <= 0) fail("PropertyViolated", "gap is not positive");
  Rat gap = g.tau_hat + g.delta;
  for (const auto& [k, val] : rep.pinned) {
    const auto& [u, v] = k;
    bool cut = (u == g.s && v == g.t) || (u == g.t && v == g.s);
    bool same = (u == g.s && v == g.s) || (u == g.t && v == g.t);
    if (cut && val != g.tau_hat) bad(u, v, "cut pin misses the optimum");
    if (same && val != gap) bad(u, v, "same-side pin misses optimum plus gap");
    if (!cut && !same && val < gap) bad(u, v, "off pin beats optimum plus gap");
  }
  rep.tau_hat = g.tau_hat;
  rep.delta = g.delta;
  rep.num_optimal = 0;
  for (const auto& [k, val] : rep.pinned)
    if (val == best) rep.num_optimal += counts[k];
  return rep;
}

namespace detail {

// Names z0,z1,... with a prefix avoiding clashes with existing points.
inline std::vector<std::string> fresh_names(const std::vector<std::string>& taken, int n) {
  std::set<std::string> used(taken.begin(), taken.end());
  std::string prefix = "z";
  for (;;) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      if (used.count(prefix + std::to_string(i))) ok = false;
    if (ok) break;
    prefix += "z";
  }
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

}  // namespace detail

// Ring gadget over the orientation-reversing edge sequence of the underlying
// graph. Heavy anchor pairs force each ring point onto its edge; the unit
// ring then has exactly two optima, the two ways around the twist.
inline Gadget gadget_nonorientable(const FiniteMetric& mu) {
  if (!is_modular(mu)) fail("NotModular", "twist gadget needs a modular metric");
  auto [h, lens] = underlying_graph(mu);
  OrientResult ores = orient(h);
  if (ores.orientable) fail("Orientable", "underlying graph has no twist");
  const Twist& tw = *ores.twist;
  int k = static_cast<int>(tw.seq.size()) - 1;  // seq ends with the reversed start edge
  if (k < 1 || tw.seq[k].second != tw.seq[0].first || tw.seq[k].first != tw.seq[0].second)
    fail("Orientable", "twist endpoints do not close up");
  // s_i for i < k, then s_{i+k} = t_i; indices mod 2k.
  std::vector<std::string> s(2 * k);
  for (int i = 0; i < k; ++i) {
    s[i] = tw.seq[i].first;
    s[i + k] = tw.seq[i].second;
  }
  Rat hlen = mu.at(s[0], s[k]);
  for (int i = 0; i < k; ++i)
    if (mu.at(s[i], s[i + k]) != hlen)
      fail("Orientable", "twist edges have unequal lengths");
  std::vector<Rat> f(2 * k);
  for (int i = 0; i < 2 * k; ++i) {
    f[i] = mu.at(s[i], s[(i + 1) % (2 * k)]);
    if (f[i] != mu.at(s[(i + k) % (2 * k)], s[(i + k + 1) % (2 * k)]))
      fail("Orientable", "twist circuit sides have unequal lengths");
  }
  Rat maxmu(0);
  for (int a = 0; a < mu.size(); ++a)
    for (int b = a + 1; b < mu.size(); ++b)
      if (mu.at(a, b) > maxmu) maxmu = mu.at(a, b);
  Rat N = Rat(1) + Rat(2 * k) * maxmu;

  Gadget g;
  g.instance.mu = mu;
  g.instance.points = mu.points();
  g.z = detail::fresh_names(mu.points(), 2 * k);
  for (const std::string& name : g.z) g.instance.points.push_back(name);
  for (int i = 0; i < 2 * k; ++i) {
    g.instance.add_cost(g.z[i], s[i], N);
    g.instance.add_cost(g.z[i], s[(i + k) % (2 * k)], N);
    g.instance.add_cost(g.z[i], g.z[(i + 1) % (2 * k)], Rat(1));
  }
  g.s = s[0];
  g.t = s[k];
  g.x = g.z[0];
  g.y = g.z[k % (2 * k)];
  Rat fsum(0);
  for (int i = 1; i <= k; ++i) fsum += f[i % (2 * k)];
  g.tau_hat = Rat(2 * k) * hlen * N + Rat(2) * fsum;
  g.delta = Rat(2) * hlen;
  g.attach = s;
  g.weights["N"] = N;
  g.weights["h"] = hlen;
  g.weights["k"] = Rat(k);
  g.instance.validate();
  return g;
}

// Triangle gadget on a cheapest medianless triple. Three edge layers: heavy
// pairs pull each ring point into its interval, medium star weights pin it
// to the interval ends, the weighted 6-ring creates the separation gap.
inline Gadget gadget_nonmodular(const FiniteMetric& mu) {
  if (is_modular(mu)) fail("Modular", "triangle gadget needs a non-modular metric");
  // Cheapest medianless triple, ties by name.
  std::vector<std::string> pts = mu.points();
  std::sort(pts.begin(), pts.end());
  std::vector<std::string> tri;
  Rat perim(0);
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      for (std::size_t c = b + 1; c < pts.size(); ++c) {
        if (!medians(mu, pts[a], pts[b], pts[c]).empty()) continue;
        Rat p = mu.at(pts[a], pts[b]) + mu.at(pts[b], pts[c]) + mu.at(pts[a], pts[c]);
        if (tri.empty() || p < perim) {
          tri = {pts[a], pts[b], pts[c]};
          perim = p;
        }
      }
  if (tri.empty()) fail("Modular", "no medianless triple found");
  auto S = [&](int i) -> const std::string& { return tri[((i % 3) + 3) % 3]; };
  std::vector<Rat> d(3), hh(3), aw(3);
  for (int i = 0; i < 3; ++i) d[i] = mu.at(S(i - 1), S(i + 1));
  for (int i = 0; i < 3; ++i) {
    hh[i] = (d[(i + 2) % 3] + d[(i + 1) % 3] - d[i]) / Rat(2);
    if (hh[i].sign() <= 0) fail("Modular", "degenerate medianless triple");
  }
  for (int i = 0; i < 3; ++i)
    aw[i] = Rat(2) * hh[i] / (d[(i + 2) % 3] * d[(i + 1) % 3]);
  Rat rho = Rat(2) * (hh[0] * hh[1] + hh[1] * hh[2] + hh[2] * hh[0]);
  Rat alpha = hh[0] * hh[0];
  for (int i = 1; i < 3; ++i)
    if (hh[i] * hh[i] < alpha) alpha = hh[i] * hh[i];
  alpha = Rat(2) * alpha;

  // Interval interiors give the medium-layer safety margin.
  Rat margin(0);
  bool have_margin = false;
  for (int i = 0; i < 3; ++i)
    for (const std::string& v : mu.points()) {
      if (v == S(i - 1) || v == S(i + 1)) continue;
      if (mu.at(S(i - 1), v) + mu.at(v, S(i + 1)) != d[i]) continue;
      Rat sigma(0);
      for (int l = 0; l < 3; ++l) sigma += aw[l] * mu.at(S(l), v);
      Rat m2 = sigma - Rat(2);
      if (m2.sign() <= 0) fail("Modular", "interior interval point does not separate");
      if (!have_margin || m2 < margin) {
        margin = m2;
        have_margin = true;
      }
    }
  Rat maxmu(0);
  for (int a = 0; a < mu.size(); ++a)
    for (int b = a + 1; b < mu.size(); ++b)
      if (mu.at(a, b) > maxmu) maxmu = mu.at(a, b);

  Rat n2 = have_margin ? Rat(1 + ((rho + alpha) / margin).ceil()) : Rat(1);
  // Everything the lighter layers can possibly cost, so the heavy layer wins.
  Rat light = maxmu * (Rat(6) * (aw[0] + aw[1] + aw[2]) * n2 +
                       Rat(2) * (hh[0] + hh[1] + hh[2]));
  Rat n3 = Rat(1 + (n2 * light).ceil());

  for (int attempt = 0;; ++attempt) {
    Gadget g;
    g.instance.mu = mu;
    g.instance.points = mu.points();
    g.z = detail::fresh_names(mu.points(), 6);
    for (const std::string& name : g.z) g.instance.points.push_back(name);
    for (int j = 0; j < 6; ++j) {
      g.instance.add_cost(g.z[j], S(j - 1), n3);
      g.instance.add_cost(g.z[j], S(j + 1), n3);
      for (int i = 0; i < 3; ++i) g.instance.add_cost(g.z[j], S(i), n2 * aw[i]);
      g.instance.add_cost(g.z[j], g.z[(j + 1) % 6], hh[(j + 2) % 3]);
    }
    g.s = S(0);
    g.t = S(2);
    g.x = g.z[1];
    g.y = g.z[4];
    g.tau_hat = Rat(2) * n3 * (d[0] + d[1] + d[2]) + Rat(12) * n2 + rho;
    g.delta = alpha;
    g.attach = tri;
    g.weights["N1"] = Rat(1);
    g.weights["N2"] = n2;
    g.weights["N3"] = n3;
    g.weights["rho"] = rho;
    g.weights["alpha"] = alpha;
    for (int i = 0; i < 3; ++i) {
      g.weights["h" + std::to_string(i)] = hh[i];
      g.weights["a" + std::to_string(i)] = aw[i];
      g.weights["d" + std::to_string(i)] = d[i];
    }
    g.instance.validate();
    try {
      verify_gadget(g);
      return g;
    } catch (const Error& e) {
      if (std::string(e.kind()) != "PropertyViolated" || attempt >= 12) throw;
      n2 = n2 * Rat(2);
      n3 = n3 * Rat(2);
    }
  }
}

}  // namespace zeroext
