#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twsplit {

using VertexId = std::int32_t;
// Normalized edge: first < second.
using Edge = std::pair<VertexId, VertexId>;

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& msg);
  int line() const { return line_; }

 private:
  int line_;
};

// Simple undirected graph over vertex ids 0..n-1. Vertex ids double as the
// global vertex order used for deterministic tie-breaking everywhere else.
// Immutable after construction.
class Graph {
 public:
  Graph() = default;
  // Rejects self-loops, duplicate edges, and out-of-range endpoints.
  Graph(VertexId n, const std::vector<Edge>& edges);

  VertexId num_vertices() const { return n_; }
  std::int64_t num_edges() const { return m_; }
  // Sorted ascending.
  const std::vector<VertexId>& neighbors(VertexId v) const { return adj_[v]; }
  bool has_edge(VertexId u, VertexId v) const;
  // All edges, normalized and sorted lexicographically.
  std::vector<Edge> edges() const;

 private:
  VertexId n_ = 0;
  std::int64_t m_ = 0;
  std::vector<std::vector<VertexId>> adj_;
};

// PACE 2017 .gr: `c` comment lines, one `p tw <n> <m>` header, then <m> lines
// `<u> <v>` with 1-indexed endpoints. Throws ParseError naming the offending
// line on malformed input, out-of-range ids, self-loops, or duplicate edges.
Graph parse_graph(std::istream& in);
Graph parse_graph_file(const std::string& path);
void write_graph(std::ostream& out, const Graph& g);

// Edges of g with both endpoints in vs (vs need not be sorted).
std::vector<Edge> induced_edges(const Graph& g, const std::vector<VertexId>& vs);

// Maximal connected vertex sets, each sorted ascending, ordered by minimum.
std::vector<std::vector<VertexId>> connected_components(const Graph& g);

// Subgraph induced by vs (sorted ascending); vertex i of the result is vs[i].
Graph induced_subgraph(const Graph& g, const std::vector<VertexId>& vs);

// Sorted-vector set operations used for bag arithmetic throughout.
std::vector<VertexId> set_union_sorted(const std::vector<VertexId>& a,
                                       const std::vector<VertexId>& b);
std::vector<VertexId> set_intersect_sorted(const std::vector<VertexId>& a,
                                           const std::vector<VertexId>& b);
std::vector<VertexId> set_difference_sorted(const std::vector<VertexId>& a,
                                            const std::vector<VertexId>& b);
bool sorted_contains(const std::vector<VertexId>& a, VertexId v);

}  // namespace twsplit
