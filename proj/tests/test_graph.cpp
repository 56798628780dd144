#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <sstream>

#include "twsplit/graph.hpp"

using namespace twsplit;

namespace {

Graph from_text(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

int parse_error_line(const std::string& text) {
  try {
    from_text(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("parse_graph basic documents") {
  Graph p3 = from_text("p tw 3 2\n1 2\n2 3\n");
  CHECK(p3.num_vertices() == 3);
  CHECK(p3.num_edges() == 2);
  CHECK(p3.has_edge(0, 1));
  CHECK(p3.has_edge(1, 2));
  CHECK(!p3.has_edge(0, 2));

  Graph single = from_text("p tw 1 0\n");
  CHECK(single.num_vertices() == 1);
  CHECK(single.num_edges() == 0);

  Graph empty = from_text("p tw 0 0\n");
  CHECK(empty.num_vertices() == 0);
}

TEST_CASE("parse_graph skips comments and blank lines, tolerates CRLF") {
  Graph g = from_text("c a comment\n\np tw 3 2\r\nc mid comment\n1 2\n\n2 3\n");
  CHECK(g.num_vertices() == 3);
  CHECK(g.num_edges() == 2);
  CHECK(g.has_edge(1, 2));
}

TEST_CASE("parse_graph rejects malformed input with line numbers") {
  CHECK(parse_error_line("p tw 2 1\n1 1\n") == 2);         // self-loop
  CHECK(parse_error_line("p tw 3 2\n1 2\n1 2\n") == 3);    // duplicate
  CHECK(parse_error_line("p tw 3 2\n1 2\n2 1\n") == 3);    // reversed duplicate
  CHECK(parse_error_line("p tw 3 1\n1 4\n") == 2);         // out of range
  CHECK(parse_error_line("p tw 3 1\n0 1\n") == 2);         // ids are 1-based
  CHECK(parse_error_line("1 2\n") == 1);                   // edge before header
  CHECK(parse_error_line("p tw 3\n") == 1);                // short header
  CHECK(parse_error_line("p foo 3 2\n") == 1);             // wrong problem tag
  CHECK(parse_error_line("p tw 3 1\n1 2\n2 3\n") == 3);    // too many edges
  CHECK(parse_error_line("p tw 3 2\n1 2\n") == 2);         // too few edges
  CHECK(parse_error_line("p tw 3 2\np tw 3 2\n") == 2);    // duplicate header
  CHECK(parse_error_line("p tw 3 1\n1 x\n") == 2);         // non-numeric
  CHECK(parse_error_line("p tw 3 1\n1 2 3\n") == 2);       // extra token
  CHECK(parse_error_line("") == 0);                        // missing header
}

TEST_CASE("write_graph round-trips") {
  Graph g(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}, {1, 3}});
  std::ostringstream out;
  write_graph(out, g);
  Graph back = from_text(out.str());
  CHECK(back.num_vertices() == g.num_vertices());
  CHECK(back.edges() == g.edges());
}

TEST_CASE("construction validates edges") {
  CHECK_THROWS(Graph(3, {{0, 0}}));
  CHECK_THROWS(Graph(3, {{0, 3}}));
  CHECK_THROWS(Graph(3, {{0, 1}, {1, 0}}));
}

TEST_CASE("neighbors are sorted ascending") {
  Graph g(5, {{4, 2}, {2, 0}, {2, 3}, {2, 1}});
  CHECK(g.neighbors(2) == std::vector<VertexId>{0, 1, 3, 4});
}

TEST_CASE("induced_edges") {
  Graph p3(3, {{0, 1}, {1, 2}});
  CHECK(induced_edges(p3, {0, 1}) == std::vector<Edge>{{0, 1}});
  CHECK(induced_edges(p3, {0, 2}).empty());
  Graph k3(3, {{0, 1}, {0, 2}, {1, 2}});
  CHECK(induced_edges(k3, {0, 1, 2}).size() == 3);
  CHECK(induced_edges(k3, {2, 0, 1}).size() == 3);  // order-insensitive
  CHECK(induced_edges(p3, {0, 1, 2}) == p3.edges());
  CHECK_THROWS(induced_edges(p3, {5}));
}

TEST_CASE("connected_components") {
  Graph p3(3, {{0, 1}, {1, 2}});
  CHECK(connected_components(p3) ==
        std::vector<std::vector<VertexId>>{{0, 1, 2}});
  Graph iso(2, {});
  CHECK(connected_components(iso) ==
        std::vector<std::vector<VertexId>>{{0}, {1}});
  Graph mixed(4, {{0, 1}, {1, 2}});
  CHECK(connected_components(mixed) ==
        std::vector<std::vector<VertexId>>{{0, 1, 2}, {3}});
  // Interleaved components, ordered by minimum vertex.
  Graph inter(6, {{0, 2}, {2, 4}, {1, 3}, {3, 5}});
  auto comps = connected_components(inter);
  CHECK(comps == std::vector<std::vector<VertexId>>{{0, 2, 4}, {1, 3, 5}});
}

TEST_CASE("components partition the vertex set") {
  Graph g(9, {{0, 1}, {2, 3}, {3, 4}, {5, 6}, {6, 7}, {5, 7}});
  auto comps = connected_components(g);
  std::vector<char> seen(9, 0);
  for (const auto& c : comps) {
    CHECK(std::is_sorted(c.begin(), c.end()));
    for (VertexId v : c) {
      CHECK(!seen[v]);
      seen[v] = 1;
    }
  }
  CHECK(std::count(seen.begin(), seen.end(), 1) == 9);
}

TEST_CASE("induced_subgraph relabels against the sorted vertex list") {
  Graph g(6, {{0, 2}, {2, 4}, {4, 5}, {1, 3}});
  Graph sub = induced_subgraph(g, {0, 2, 4});
  CHECK(sub.num_vertices() == 3);
  CHECK(sub.edges() == std::vector<Edge>{{0, 1}, {1, 2}});
  CHECK_THROWS(induced_subgraph(g, {2, 0}));  // must be sorted
}
