#include "dyergeo/dyer_graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <sstream>

namespace dyergeo {

DyerGraph::DyerGraph(std::vector<DyerVertex> vertices, std::vector<DyerEdge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  const std::size_t n = vertices_.size();
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& v = vertices_[i];
    if (is_finite_order(v.order) && v.order < 2)
      throw Error("vertex '" + v.name + "' has order < 2");
    if (!index_.emplace(v.name, i).second)
      throw Error("duplicate vertex '" + v.name + "'");
  }
  labels_.assign(n * n, 0);
  for (auto& e : edges_) {
    if (e.u >= n || e.v >= n) throw Error("edge endpoint out of range");
    if (e.u == e.v)
      throw Error("loop at vertex '" + vertices_[e.u].name + "'");
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.label < 2) throw Error("edge label < 2");
    if (labels_[e.u * n + e.v] != 0)
      throw Error("duplicate edge {" + vertices_[e.u].name + "," +
                  vertices_[e.v].name + "}");
    if (e.label != 2 && (vertices_[e.u].order != 2 || vertices_[e.v].order != 2))
      throw Error("compatibility violation on edge {" + vertices_[e.u].name +
                  "," + vertices_[e.v].name + "}: label " +
                  std::to_string(e.label) + " requires both orders to be 2");
    labels_[e.u * n + e.v] = labels_[e.v * n + e.u] = e.label;
  }
  std::sort(edges_.begin(), edges_.end(), [](const DyerEdge& a, const DyerEdge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
}

std::uint32_t DyerGraph::vertex_index(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) throw Error("unknown vertex '" + std::string(name) + "'");
  return it->second;
}

bool DyerGraph::has_vertex(std::string_view name) const {
  return index_.find(std::string(name)) != index_.end();
}

std::string to_string(GroupClass c) {
  switch (c) {
    case GroupClass::coxeter: return "coxeter";
    case GroupClass::raag: return "raag";
    case GroupClass::graph_product_of_cyclics: return "graph-product-of-cyclics";
    case GroupClass::general: return "general";
  }
  return "general";
}

GroupClass classify(const DyerGraph& g) {
  bool all_two = true, all_inf = true, all_labels_two = true;
  for (const auto& v : g.vertices()) {
    if (v.order != 2) all_two = false;
    if (is_finite_order(v.order)) all_inf = false;
  }
  for (const auto& e : g.edges())
    if (e.label != 2) all_labels_two = false;
  if (all_two) return GroupClass::coxeter;
  if (all_inf) return GroupClass::raag;
  if (all_labels_two) return GroupClass::graph_product_of_cyclics;
  return GroupClass::general;
}

unsigned max_edge_label(const DyerGraph& g) {
  unsigned m = 2;
  for (const auto& e : g.edges()) m = std::max(m, e.label);
  return m;
}

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

// Splits a line into tokens, dropping '#' comments.
std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    out.push_back({std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

bool parse_uint(const std::string& s, unsigned& value) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && p == s.data() + s.size();
}

bool valid_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

}  // namespace

DyerGraph parse_dyer_graph(std::string_view text) {
  std::vector<DyerVertex> vertices;
  std::vector<DyerEdge> edges;
  std::unordered_map<std::string, std::uint32_t> seen;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  bool any_content = false;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos
                                                 ? std::string_view::npos
                                                 : eol - pos);
    ++lineno;
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    any_content = true;
    const auto& kw = tokens[0];

    if (kw.text == "vertex") {
      if (tokens.size() != 3)
        throw ParseError("expected 'vertex <id> <order>'", lineno, kw.column);
      if (!valid_identifier(tokens[1].text))
        throw ParseError("invalid vertex identifier '" + tokens[1].text + "'",
                         lineno, tokens[1].column);
      unsigned order;
      if (tokens[2].text == "inf") {
        order = kInfiniteOrder;
      } else if (!parse_uint(tokens[2].text, order) || order == 0) {
        throw ParseError("order must be an integer >= 2 or 'inf'", lineno,
                         tokens[2].column);
      } else if (order < 2) {
        throw ParseError("order must be >= 2", lineno, tokens[2].column);
      }
      if (seen.count(tokens[1].text))
        throw ParseError("duplicate vertex '" + tokens[1].text + "'", lineno,
                         tokens[1].column);
      seen.emplace(tokens[1].text, static_cast<std::uint32_t>(vertices.size()));
      vertices.push_back({tokens[1].text, order});
    } else if (kw.text == "edge") {
      if (tokens.size() != 4)
        throw ParseError("expected 'edge <id> <id> <m>'", lineno, kw.column);
      for (int k : {1, 2}) {
        if (!seen.count(tokens[k].text))
          throw ParseError("unknown vertex '" + tokens[k].text + "'", lineno,
                           tokens[k].column);
      }
      unsigned m;
      if (!parse_uint(tokens[3].text, m))
        throw ParseError("edge label must be an integer >= 2", lineno,
                         tokens[3].column);
      if (m < 2)
        throw ParseError("edge label must be >= 2", lineno, tokens[3].column);
      std::uint32_t u = seen[tokens[1].text], v = seen[tokens[2].text];
      if (u == v)
        throw ParseError("loop at vertex '" + tokens[1].text + "'", lineno,
                         tokens[1].column);
      if (u > v) std::swap(u, v);
      for (const auto& e : edges)
        if (e.u == u && e.v == v)
          throw ParseError("duplicate edge {" + vertices[u].name + "," +
                               vertices[v].name + "}",
                           lineno, tokens[1].column);
      if (m != 2 && (vertices[u].order != 2 || vertices[v].order != 2))
        throw ParseError("compatibility violation on edge {" + vertices[u].name +
                             "," + vertices[v].name + "}: label " +
                             std::to_string(m) + " requires both orders to be 2",
                         lineno, tokens[3].column);
      edges.push_back({u, v, m});
    } else {
      throw ParseError("unknown directive '" + kw.text + "'", lineno, kw.column);
    }
  }
  if (!any_content) throw ParseError("empty input: no vertex declarations", 1, 1);
  if (vertices.empty()) throw ParseError("no vertex declarations", 1, 1);
  return DyerGraph(std::move(vertices), std::move(edges));
}

DyerGraph parse_dyer_graph(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_dyer_graph(std::string_view(ss.str()));
}

std::string serialize(const DyerGraph& g) {
  std::string out;
  for (const auto& v : g.vertices()) {
    out += "vertex " + v.name + " ";
    out += is_finite_order(v.order) ? std::to_string(v.order) : std::string("inf");
    out += "\n";
  }
  for (const auto& e : g.edges()) {
    out += "edge " + g.vertex(e.u).name + " " + g.vertex(e.v).name + " " +
           std::to_string(e.label) + "\n";
  }
  return out;
}

std::vector<Letter> enumerate_letters(const DyerGraph& g) {
  std::vector<Letter> out;
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
    unsigned order = g.vertex(v).order;
    if (is_finite_order(order)) {
      for (unsigned a = 1; a < order; ++a)
        out.push_back({v, static_cast<std::int32_t>(a)});
    } else {
      out.push_back({v, +1});
      out.push_back({v, -1});
    }
  }
  return out;
}

Alphabet::Alphabet(const DyerGraph& g) : letters_(enumerate_letters(g)) {
  offset_.resize(g.vertex_count());
  orders_.resize(g.vertex_count());
  std::size_t r = 0;
  for (std::uint32_t v = 0; v < g.vertex_count(); ++v) {
    offset_[v] = r;
    orders_[v] = g.vertex(v).order;
    r += is_finite_order(orders_[v]) ? orders_[v] - 1 : 2;
  }
  inverse_.resize(letters_.size());
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    const Letter& l = letters_[i];
    unsigned order = orders_[l.vertex];
    Letter inv = is_finite_order(order)
                     ? Letter{l.vertex, static_cast<std::int32_t>(order) - l.exponent}
                     : Letter{l.vertex, -l.exponent};
    inverse_[i] = rank(inv);
  }
}

std::size_t Alphabet::rank(const Letter& l) const {
  if (l.vertex >= offset_.size()) throw Error("letter refers to an unknown vertex");
  unsigned order = orders_[l.vertex];
  if (is_finite_order(order)) {
    if (l.exponent < 1 || l.exponent >= static_cast<std::int32_t>(order))
      throw Error("letter exponent out of range for finite-order vertex");
    return offset_[l.vertex] + static_cast<std::size_t>(l.exponent - 1);
  }
  if (l.exponent != 1 && l.exponent != -1)
    throw Error("letter exponent must be +1 or -1 at an infinite-order vertex");
  return offset_[l.vertex] + (l.exponent == 1 ? 0 : 1);
}

}  // namespace dyergeo
