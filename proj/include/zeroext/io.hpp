#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "zeroext/instance.hpp"
#include "zeroext/metric.hpp"

namespace zeroext {

namespace detail {

inline std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

[[noreturn]] inline void parse_fail(int line_no, const std::string& msg) {
  fail("ParseError", "line " + std::to_string(line_no) + ": " + msg);
}

}  // namespace detail

// Line-oriented instance text: section headers TERMINALS / METRIC / POINTS /
// COSTS / META, '#' comments, rationals as "p/q" or plain integers. METRIC
// holds one row per terminal in TERMINALS order. META is carried verbatim.
struct ParsedInstance {
  Instance instance;
  std::map<std::string, std::string> meta;
};

inline ParsedInstance parse_instance_text(std::istream& in) {
  std::vector<std::string> terminals, extra_points;
  std::vector<std::vector<Rat>> rows;
  std::vector<std::tuple<std::string, std::string, Rat>> costs;
  std::map<std::string, std::string> meta;
  std::string section, line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::vector<std::string> toks = detail::tokens(line);
    if (toks.empty()) continue;
    if (toks.size() == 1 &&
        (toks[0] == "TERMINALS" || toks[0] == "METRIC" || toks[0] == "POINTS" ||
         toks[0] == "COSTS" || toks[0] == "META")) {
      section = toks[0];
      continue;
    }
    if (section == "TERMINALS") {
      for (const std::string& t : toks) terminals.push_back(t);
    } else if (section == "METRIC") {
      std::vector<Rat> row;
      for (const std::string& t : toks) {
        try {
          row.push_back(parse_rat(t));
        } catch (const Error&) {
          detail::parse_fail(line_no, "bad rational '" + t + "'");
        }
      }
      rows.push_back(std::move(row));
    } else if (section == "POINTS") {
      for (const std::string& t : toks) extra_points.push_back(t);
    } else if (section == "COSTS") {
      if (toks.size() != 3) detail::parse_fail(line_no, "expected 'x y value'");
      Rat w;
      try {
        w = parse_rat(toks[2]);
      } catch (const Error&) {
        detail::parse_fail(line_no, "bad rational '" + toks[2] + "'");
      }
      costs.emplace_back(toks[0], toks[1], w);
    } else if (section == "META") {
      std::string val;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (i > 1) val += " ";
        val += toks[i];
      }
      meta[toks[0]] = val;
    } else {
      detail::parse_fail(line_no, "content before any section header");
    }
  }
  if (terminals.empty()) fail("ParseError", "no TERMINALS section");
  int n = static_cast<int>(terminals.size());
  if (static_cast<int>(rows.size()) != n)
    fail("ParseError", "METRIC must have one row per terminal");
  for (const auto& row : rows)
    if (static_cast<int>(row.size()) != n)
      fail("ParseError", "METRIC rows must have one entry per terminal");
  ParsedInstance out;
  try {
    out.instance.mu = FiniteMetric(terminals, rows);
  } catch (const Error& e) {
    fail("ParseError", std::string("METRIC: ") + e.what());
  }
  out.instance.points = terminals;
  for (const std::string& p : extra_points) out.instance.points.push_back(p);
  for (const auto& [a, b, w] : costs) {
    if (w.sign() < 0) fail("ParseError", "negative cost " + a + " " + b);
    out.instance.add_cost(a, b, w);
  }
  try {
    out.instance.validate();
  } catch (const Error& e) {
    fail("ParseError", e.what());
  }
  out.meta = meta;
  return out;
}

inline ParsedInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("ParseError", "cannot open '" + path + "'");
  return parse_instance_text(in);
}

inline void write_instance_text(std::ostream& out, const Instance& inst,
                                const std::map<std::string, std::string>& meta = {}) {
  out << "TERMINALS\n";
  for (std::size_t i = 0; i < inst.terminals().size(); ++i)
    out << (i ? " " : "") << inst.terminals()[i];
  out << "\nMETRIC\n";
  int n = inst.mu.size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out << (j ? " " : "") << inst.mu.at(i, j).str();
    out << "\n";
  }
  std::vector<std::string> extra = inst.free_points();
  if (!extra.empty()) {
    out << "POINTS\n";
    for (std::size_t i = 0; i < extra.size(); ++i) out << (i ? " " : "") << extra[i];
    out << "\n";
  }
  if (!inst.cost.empty()) {
    out << "COSTS\n";
    for (const auto& [key, w] : inst.cost)
      out << key.first << " " << key.second << " " << w.str() << "\n";
  }
  if (!meta.empty()) {
    out << "META\n";
    for (const auto& [k, v] : meta) out << k << " " << v << "\n";
  }
}

inline void write_instance_file(const std::string& path, const Instance& inst,
                                const std::map<std::string, std::string>& meta = {}) {
  std::ofstream out(path);
  if (!out) fail("ParseError", "cannot open '" + path + "' for writing");
  write_instance_text(out, inst, meta);
}

// Product-retraction input: one FACTOR section per factor (edges "u v", lone
// tokens are isolated nodes), then SUBGRAPH listing product nodes as
// comma-joined coordinates. Subgraph edges are induced from the product.
struct ParsedRetractionSpec {
  std::vector<Graph> factors;
  std::vector<std::string> sub_nodes;
};

inline ParsedRetractionSpec parse_retraction_text(std::istream& in) {
  ParsedRetractionSpec out;
  std::string section, line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::vector<std::string> toks = detail::tokens(line);
    if (toks.empty()) continue;
    if (toks.size() == 1 && (toks[0] == "FACTOR" || toks[0] == "SUBGRAPH")) {
      section = toks[0];
      if (section == "FACTOR") out.factors.emplace_back();
      continue;
    }
    if (section == "FACTOR") {
      Graph& g = out.factors.back();
      if (toks.size() == 1) {
        g.add_node(toks[0]);
      } else if (toks.size() == 2) {
        g.add_node(toks[0]);
        g.add_node(toks[1]);
        g.add_edge(toks[0], toks[1]);
      } else {
        detail::parse_fail(line_no, "expected 'u v' or a lone node");
      }
    } else if (section == "SUBGRAPH") {
      for (const std::string& t : toks) out.sub_nodes.push_back(t);
    } else {
      detail::parse_fail(line_no, "content before any section header");
    }
  }
  if (out.factors.empty()) fail("ParseError", "no FACTOR section");
  if (out.sub_nodes.empty()) fail("ParseError", "no SUBGRAPH section");
  return out;
}

inline ParsedRetractionSpec read_retraction_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("ParseError", "cannot open '" + path + "'");
  return parse_retraction_text(in);
}

}  // namespace zeroext
