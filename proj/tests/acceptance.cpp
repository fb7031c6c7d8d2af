// Acceptance gate: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "zeroext/gadgets.hpp"
#include "zeroext/io.hpp"
#include "zeroext/retraction.hpp"
#include "zeroext/solvers.hpp"

using namespace zeroext;
using namespace fixtures;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail = "") {
  std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << " - " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!ok) ++failures;
}

void run(int n, const std::string& what, const std::function<std::string()>& body) {
  try {
    std::string detail = body();
    report(n, true, what, detail);
  } catch (const std::exception& e) {
    report(n, false, what, e.what());
  }
}

// Optimum of the instance costs measured under an arbitrary semimetric on the
// terminals, by direct enumeration.
Rat enumerate_optimum(const Instance& inst, const FiniteMetric& semi) {
  const auto& T = inst.terminals();
  std::vector<std::string> fp = inst.free_points();
  std::vector<int> choice(fp.size(), 0);
  Rat best(-1);
  while (true) {
    std::map<std::string, std::string> img;
    for (const std::string& t : T) img[t] = t;
    for (std::size_t f = 0; f < fp.size(); ++f) img[fp[f]] = T[choice[f]];
    Rat val(0);
    for (const auto& [key, w] : inst.cost)
      val += w * semi.at(img.at(key.first), img.at(key.second));
    if (best.sign() < 0 || val < best) best = val;
    std::size_t pos = 0;
    while (pos < choice.size() && ++choice[pos] == static_cast<int>(T.size())) {
      choice[pos] = 0;
      ++pos;
    }
    if (pos == choice.size()) break;
  }
  return best;
}

}  // namespace

int main() {
  std::vector<FiniteMetric> family = {metric_of(hypercube3()), metric_of(prism14()),
                                      rectangle_metric(Rat(1), Rat(2)),
                                      metric_of(complete_bipartite(2, 3))};

  run(1, "orbit pipeline matches the oracle on 200 random instances", [&] {
    auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(101);
    std::uniform_int_distribution<int> nf(1, 3);
    int total = 0;
    for (int round = 0; round < 200; ++round) {
      Instance inst = random_instance(family[round % family.size()], nf(rng), 5, rng);
      ZeroExtension z = solve_orbit_uncrossing(inst);
      validate_zero_extension(inst, z);
      if (zero_extension_cost(inst, z) != brute_force(inst).first)
        fail("Mismatch", "instance " + std::to_string(round));
      ++total;
    }
    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > 60.0) fail("Timeout", "exceeded 60 seconds");
    std::ostringstream d;
    d << total << " instances over 4 metrics in " << static_cast<int>(secs * 1000) << " ms";
    return d.str();
  });

  run(2, "relaxation is exact on frames and strictly below on the triangle star", [&] {
    std::mt19937 rng(102);
    std::uniform_int_distribution<int> nf(1, 3);
    for (int round = 0; round < 200; ++round) {
      FiniteMetric mu = round % 2 ? rectangle_metric(Rat(1), Rat(2))
                                  : metric_of(complete_bipartite(2, 3));
      Instance inst = random_instance(mu, nf(rng), 5, rng);
      if (extension_lp(inst).tau_star != brute_force(inst).first)
        fail("Mismatch", "relaxation gap on instance " + std::to_string(round));
    }
    Instance star = k3_star();
    if (extension_lp(star).tau_star != Rat(3, 2)) fail("Mismatch", "star relaxation");
    if (brute_force(star).first != Rat(2)) fail("Mismatch", "star optimum");
    return std::string("200 exact frame instances; star gap 3/2 vs 2");
  });

  run(3, "cut uncrossing matches the oracle on 200 random 3-cube instances", [&] {
    std::mt19937 rng(103);
    std::uniform_int_distribution<int> nf(1, 3);
    long long worst = 0;
    for (int round = 0; round < 200; ++round) {
      Instance inst = random_instance(family[0], nf(rng), 5, rng);
      MedianRunInfo info;
      ZeroExtension z = solve_median(inst, &info);
      if (zero_extension_cost(inst, z) != brute_force(inst).first)
        fail("Mismatch", "instance " + std::to_string(round));
      if (info.replacements > info.bound) fail("Bound", "replacement bound exceeded");
      if (info.replacements > worst) worst = info.replacements;
    }
    return "200 instances, max replacements " + std::to_string(worst);
  });

  // Shared geometry for criteria 4, 5 and 10.
  OrbitDecomposition prism_dec = orbit_decomposition(metric_of(prism14()));
  CanonicalEmbedding prism_emb = canonical_embedding(prism_dec);
  auto prism_projection = [&](int i, int j) {
    std::set<std::string> nodes;
    for (const auto& [t, c] : prism_emb.phi) nodes.insert(tuple_id({c[i], c[j]}));
    return make_product_subgraph(prism_dec.orbit_graphs[i], prism_dec.orbit_graphs[j],
                                 {nodes.begin(), nodes.end()});
  };

  run(4, "retraction axioms hold exhaustively on the reference subgraphs", [&] {
    int checked = 0;
    {
      ProductSubgraph ps = make_product_subgraph(k2("x", "y"), k2("x", "z"),
                                                 {"y,x", "x,x", "x,z"});
      Retraction r = two_orbit_retraction(ps);
      verify_retraction(ps.product, ps.sub, r);
      if (r.at("y,z") != "x,x") fail("Mismatch", "missing corner not sent to the center");
      ++checked;
    }
    for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
      ProductSubgraph ps = prism_projection(i, j);
      Retraction r = two_orbit_retraction(ps);
      verify_retraction(ps.product, ps.sub, r);
      ++checked;
    }
    return std::to_string(checked) + " subgraphs, all axiom scans exhaustive";
  });

  run(5, "auxiliary length structures pass their consistency checks", [&] {
    int graphs = 0;
    std::vector<ProductSubgraph> cases;
    cases.push_back(make_product_subgraph(k2("x", "y"), k2("x", "z"), {"y,x", "x,x", "x,z"}));
    cases.push_back(prism_projection(0, 1));
    cases.push_back(prism_projection(0, 2));
    cases.push_back(prism_projection(1, 2));
    for (const ProductSubgraph& ps : cases) {
      check_product_subgraph(ps);
      ExcessTable et = excess_table(ps);
      auto [a1, a2] = build_delta(ps, et);  // includes cyclic evenness
      aux_metric(ps, a1);                   // includes the closure checks
      aux_metric(ps, a2);
      graphs += 2;
    }
    return std::to_string(graphs) + " auxiliary graphs validated";
  });

  run(6, "triangle gadget separates the cut pins by exactly its gap", [&] {
    Gadget g = gadget_nonmodular(metric_of(complete_graph(3)));
    GadgetReport rep = verify_gadget(g);
    if (g.weights.at("rho") != Rat(3, 2)) fail("Mismatch", "ring optimum");
    if (g.delta != Rat(1, 2) || g.weights.at("alpha") != Rat(1, 2))
      fail("Mismatch", "gap is not alpha");
    // Ring cost of every interval-respecting placement of the six ring points.
    auto S = [&](int i) {
      return g.attach[((i % 3) + 3) % 3];
    };
    auto hw = [&](int i) { return g.weights.at("h" + std::to_string(((i % 3) + 3) % 3)); };
    int optimal = 0;
    for (int mask = 0; mask < 64; ++mask) {
      std::vector<std::string> gamma(6);
      for (int j = 0; j < 6; ++j) gamma[j] = (mask >> j) & 1 ? S(j + 1) : S(j - 1);
      Rat zeta(0);
      for (int j = 0; j < 6; ++j)
        zeta += hw(j + 2) * g.instance.mu.at(gamma[j], gamma[(j + 1) % 6]);
      if (zeta == g.weights.at("rho"))
        ++optimal;
      else if (zeta < g.weights.at("rho") + g.weights.at("alpha"))
        fail("Mismatch", "feasible ring placement beats the gap");
    }
    if (optimal != 2) fail("Mismatch", "ring optima count " + std::to_string(optimal));
    std::ostringstream d;
    d << "tau_hat " << g.tau_hat << ", delta " << g.delta << ", optima "
      << rep.num_optimal << ", 64 ring placements scanned";
    return d.str();
  });

  run(7, "twist gadget has exactly two optima at its stated value", [&] {
    FiniteMetric mu = metric_of(k33_minus());
    Gadget g = gadget_nonorientable(mu);
    GadgetReport rep = verify_gadget(g);
    long long k = g.weights.at("k").num();
    Rat fs(0);
    for (long long i = 1; i <= k; ++i)
      fs += mu.at(g.attach[i % (2 * k)], g.attach[(i + 1) % (2 * k)]);
    if (g.tau_hat != Rat(2 * k) * g.weights.at("h") * g.weights.at("N") + Rat(2) * fs)
      fail("Mismatch", "stated optimum does not compose from the ring");
    if (rep.num_optimal != 2) fail("Mismatch", "optima " + std::to_string(rep.num_optimal));
    std::ostringstream d;
    d << "k " << k << ", tau_hat " << g.tau_hat << ", 2 optima";
    return d.str();
  });

  run(8, "classification fixtures land where expected", [&] {
    MetricClassification k23 = classify(metric_of(complete_bipartite(2, 3)));
    if (!k23.is_frame || k23.is_median) fail("Mismatch", "K2,3");
    MetricClassification q3 = classify(metric_of(hypercube3()));
    if (!q3.is_median || q3.is_hereditary_modular) fail("Mismatch", "3-cube");
    MetricClassification km = classify(metric_of(k33_minus()));
    if (!km.is_hereditary_modular || km.is_orientable) fail("Mismatch", "K3,3 minus an edge");
    int scanned = 0;
    for (int n = 2; n <= 5; ++n) {
      std::vector<std::pair<int, int>> pairs;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
      for (int mask = 0; mask < (1 << pairs.size()); ++mask) {
        Graph g;
        for (int i = 0; i < n; ++i) g.add_node("v" + std::to_string(i));
        for (std::size_t p = 0; p < pairs.size(); ++p)
          if (mask & (1 << p))
            g.add_edge("v" + std::to_string(pairs[p].first),
                       "v" + std::to_string(pairs[p].second));
        if (!g.connected() || !g.bipartite()) continue;
        if (!is_hereditary_modular(g) || !orient(g).orientable)
          fail("Mismatch", "small bipartite graph is not a frame");
        ++scanned;
      }
    }
    return std::to_string(scanned) + " small bipartite graphs are frames";
  });

  run(9, "graph-metric optima add up over the orbits", [&] {
    std::mt19937 rng(109);
    int rounds = 0;
    for (int round = 0; round < 40; ++round) {
      FiniteMetric mu = round % 2 ? metric_of(prism14()) : metric_of(hypercube3());
      Instance inst = random_instance(mu, 2, 4, rng);
      OrbitDecomposition dec = orbit_decomposition(mu);
      Rat total = enumerate_optimum(inst, inst.mu);
      Rat parts(0);
      for (std::size_t i = 0; i < dec.orbits.size(); ++i)
        parts += dec.weights[i] * enumerate_optimum(inst, dec.orbit_metrics[i]);
      if (total != parts) fail("Mismatch", "instance " + std::to_string(round));
      ++rounds;
    }
    return std::to_string(rounds) + " double enumerations agree";
  });

  run(10, "straightening makes strict progress within its bound", [&] {
    Instance inst;
    inst.mu = metric_of(prism14());
    inst.points = inst.mu.points();
    inst.points.push_back("f0");
    inst.add_cost("f0", inst.mu.point(0), Rat(1));
    int fired = 0;
    for (const std::string& a : prism_dec.orbit_graphs[0].ids())
      for (const std::string& b : prism_dec.orbit_graphs[1].ids())
        for (const std::string& c : prism_dec.orbit_graphs[2].ids()) {
          if (prism_emb.inverse.count(tuple_id({a, b, c}))) continue;
          std::map<std::string, std::vector<std::string>> config;
          for (const std::string& t : inst.terminals()) config[t] = prism_emb.phi.at(t);
          config["f0"] = {a, b, c};
          OrbitRunInfo info;
          ZeroExtension z = uncross_configuration(inst, prism_dec, prism_emb, config, &info);
          validate_zero_extension(inst, z);
          if (info.iterations < 1) fail("Mismatch", "no straightening step fired");
          if (info.iterations > info.bound) fail("Bound", "iteration bound exceeded");
          if (!info.strict_progress) fail("Mismatch", "a step failed to decrease the excess");
          ++fired;
        }
    // Pipeline runs also stay within the bound.
    std::mt19937 rng(110);
    for (int round = 0; round < 20; ++round) {
      Instance r = random_instance(metric_of(prism14()), 2, 3, rng);
      OrbitRunInfo info;
      solve_orbit_uncrossing(r, &info);
      if (info.iterations > info.bound) fail("Bound", "pipeline iteration bound exceeded");
      if (info.iterations > 0 && !info.strict_progress)
        fail("Mismatch", "pipeline step failed to decrease the excess");
    }
    return std::to_string(fired) + " off-image starts straightened, 20 pipeline runs bounded";
  });

  if (failures) {
    std::cout << failures << " criteria failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
