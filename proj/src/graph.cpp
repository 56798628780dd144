#include "twsplit/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace twsplit {

ParseError::ParseError(int line, const std::string& msg)
    : std::runtime_error("line " + std::to_string(line) + ": " + msg),
      line_(line) {}

Graph::Graph(VertexId n, const std::vector<Edge>& edges) : n_(n), adj_(n) {
  if (n < 0) throw std::invalid_argument("negative vertex count");
  for (const auto& [u, v] : edges) {
    if (u < 0 || u >= n || v < 0 || v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop");
    adj_[u].push_back(v);
    adj_[v].push_back(u);
  }
  m_ = static_cast<std::int64_t>(edges.size());
  for (auto& nbrs : adj_) {
    std::sort(nbrs.begin(), nbrs.end());
    if (std::adjacent_find(nbrs.begin(), nbrs.end()) != nbrs.end())
      throw std::invalid_argument("duplicate edge");
  }
}

bool Graph::has_edge(VertexId u, VertexId v) const {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) return false;
  const auto& nbrs = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  VertexId other = adj_[u].size() <= adj_[v].size() ? v : u;
  return std::binary_search(nbrs.begin(), nbrs.end(), other);
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(m_));
  for (VertexId u = 0; u < n_; ++u)
    for (VertexId v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

namespace {

bool parse_int(const std::string& tok, std::int64_t& out) {
  if (tok.empty()) return false;
  std::size_t i = tok[0] == '-' ? 1 : 0;
  if (i == tok.size()) return false;
  for (; i < tok.size(); ++i)
    if (tok[i] < '0' || tok[i] > '9') return false;
  try {
    out = std::stoll(tok);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream iss(line);
  std::string t;
  while (iss >> t) toks.push_back(t);
  return toks;
}

}  // namespace

Graph parse_graph(std::istream& in) {
  std::string line;
  int lineno = 0;
  std::int64_t n = -1, m = -1;
  std::vector<Edge> edges;
  std::vector<std::vector<VertexId>> seen;  // dedup: seen[u] holds v>u partners
  std::int64_t read = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (toks[0] == "c") continue;
    if (toks[0] == "p") {
      if (n >= 0) throw ParseError(lineno, "duplicate 'p' header");
      if (toks.size() != 4 || toks[1] != "tw")
        throw ParseError(lineno, "malformed header, expected 'p tw <n> <m>'");
      if (!parse_int(toks[2], n) || !parse_int(toks[3], m) || n < 0 || m < 0)
        throw ParseError(lineno, "malformed header counts");
      seen.assign(static_cast<std::size_t>(n), {});
      continue;
    }
    if (n < 0) throw ParseError(lineno, "edge before 'p tw' header");
    std::int64_t u, v;
    if (toks.size() != 2 || !parse_int(toks[0], u) || !parse_int(toks[1], v))
      throw ParseError(lineno, "malformed edge line, expected '<u> <v>'");
    if (u < 1 || u > n || v < 1 || v > n)
      throw ParseError(lineno, "vertex id out of range 1.." + std::to_string(n));
    if (u == v) throw ParseError(lineno, "self-loop");
    if (++read > m) throw ParseError(lineno, "more edges than declared");
    VertexId a = static_cast<VertexId>(u - 1), b = static_cast<VertexId>(v - 1);
    if (a > b) std::swap(a, b);
    auto& partners = seen[static_cast<std::size_t>(a)];
    if (std::find(partners.begin(), partners.end(), b) != partners.end())
      throw ParseError(lineno, "duplicate edge");
    partners.push_back(b);
    edges.emplace_back(a, b);
  }
  if (n < 0) throw ParseError(lineno, "missing 'p tw' header");
  if (read != m)
    throw ParseError(lineno, "declared " + std::to_string(m) + " edges, found " +
                                 std::to_string(read));
  return Graph(static_cast<VertexId>(n), edges);
}

Graph parse_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << "p tw " << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const auto& [u, v] : g.edges()) out << u + 1 << ' ' << v + 1 << '\n';
}

std::vector<Edge> induced_edges(const Graph& g, const std::vector<VertexId>& vs) {
  std::vector<char> in_set(g.num_vertices(), 0);
  for (VertexId v : vs) {
    if (v < 0 || v >= g.num_vertices())
      throw std::out_of_range("vertex id out of range");
    in_set[v] = 1;
  }
  std::vector<Edge> out;
  for (VertexId u : vs)
    for (VertexId v : g.neighbors(u))
      if (u < v && in_set[v]) out.emplace_back(u, v);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<VertexId>> connected_components(const Graph& g) {
  std::vector<std::vector<VertexId>> comps;
  std::vector<char> visited(g.num_vertices(), 0);
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < g.num_vertices(); ++s) {
    if (visited[s]) continue;
    std::vector<VertexId> comp;
    stack.push_back(s);
    visited[s] = 1;
    while (!stack.empty()) {
      VertexId u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (VertexId v : g.neighbors(u)) {
        if (!visited[v]) {
          visited[v] = 1;
          stack.push_back(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;  // discovery order = ascending minimum vertex
}

std::vector<VertexId> set_union_sorted(const std::vector<VertexId>& a,
                                       const std::vector<VertexId>& b) {
  std::vector<VertexId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<VertexId> set_intersect_sorted(const std::vector<VertexId>& a,
                                           const std::vector<VertexId>& b) {
  std::vector<VertexId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

std::vector<VertexId> set_difference_sorted(const std::vector<VertexId>& a,
                                            const std::vector<VertexId>& b) {
  std::vector<VertexId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

bool sorted_contains(const std::vector<VertexId>& a, VertexId v) {
  return std::binary_search(a.begin(), a.end(), v);
}

Graph induced_subgraph(const Graph& g, const std::vector<VertexId>& vs) {
  std::vector<VertexId> rank(g.num_vertices(), -1);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    VertexId v = vs[i];
    if (v < 0 || v >= g.num_vertices())
      throw std::out_of_range("vertex id out of range");
    if (i > 0 && vs[i - 1] >= v)
      throw std::invalid_argument("vertex list must be sorted and unique");
    rank[v] = static_cast<VertexId>(i);
  }
  std::vector<Edge> edges;
  for (VertexId u : vs)
    for (VertexId v : g.neighbors(u))
      if (u < v && rank[v] >= 0) edges.emplace_back(rank[u], rank[v]);
  return Graph(static_cast<VertexId>(vs.size()), edges);
}

}  // namespace twsplit
