#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <vector>

#include "twsplit/decomposition.hpp"
#include "twsplit/oracle.hpp"

using namespace twsplit;

namespace {

Graph make_graph(VertexId n, std::vector<Edge> edges) { return Graph(n, edges); }

// Independent check for small graphs: simulate every elimination order with
// explicit fill-in and take the best maximum degree at elimination time.
int treewidth_by_elimination_orders(const Graph& g) {
  const int n = g.num_vertices();
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  int best = n;
  do {
    std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
    for (const Edge& e : g.edges()) {
      adj[static_cast<std::size_t>(e.first)].insert(e.second);
      adj[static_cast<std::size_t>(e.second)].insert(e.first);
    }
    int width = 0;
    for (int v : perm) {
      const std::set<int> nbrs = adj[static_cast<std::size_t>(v)];
      width = std::max(width, static_cast<int>(nbrs.size()));
      if (width >= best) break;
      for (int a : nbrs) {
        adj[static_cast<std::size_t>(a)].erase(v);
        for (int b : nbrs)
          if (a != b) adj[static_cast<std::size_t>(a)].insert(b);
      }
      adj[static_cast<std::size_t>(v)].clear();
    }
    best = std::min(best, width);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

BagPartition bag_partition(std::vector<VertexId> bag, std::vector<PartLabel> labels) {
  BagPartition p;
  p.bag = std::move(bag);
  p.labels = std::move(labels);
  return p;
}

void check_assignment_invariants(const Graph& g, const TreeDecomposition& t,
                                 const SplitAssignment& s, int k, int mode) {
  REQUIRE(s.parts.size() == static_cast<std::size_t>(g.num_vertices()));
  // Legality: no edge joins two distinct component parts.
  for (const Edge& e : g.edges()) {
    const PartLabel a = s.parts[static_cast<std::size_t>(e.first)];
    const PartLabel b = s.parts[static_cast<std::size_t>(e.second)];
    if (a != PartLabel::kX && b != PartLabel::kX) CHECK(a == b);
  }
  int scount = 0;
  for (PartLabel l : s.parts)
    if (l == PartLabel::kX) ++scount;
  CHECK(scount <= k + 1);
  // a-sets: non-empty, nested along tree edges, and matching the bag labels.
  for (int id : t.alive_ids()) {
    const std::uint8_t ax = s.a[static_cast<std::size_t>(id)];
    CHECK(ax != 0);
    const int p = t.node(id).parent;
    if (p != -1) CHECK((ax & ~s.a[static_cast<std::size_t>(p)]) == 0);
    std::uint8_t seen = 0;
    for (VertexId v : t.node(id).bag) {
      const PartLabel l = s.parts[static_cast<std::size_t>(v)];
      if (l != PartLabel::kX)
        seen = static_cast<std::uint8_t>(seen | (1u << label_digit(l, mode)));
    }
    if (seen) CHECK(ax == seen);
  }
  // Root balance for the mode.
  const std::vector<VertexId>& rb = t.node(t.root).bag;
  int wcount[3] = {0, 0, 0};
  for (VertexId v : rb) {
    const PartLabel l = s.parts[static_cast<std::size_t>(v)];
    if (l != PartLabel::kX) ++wcount[label_digit(l, mode)];
  }
  if (mode == 4) {
    for (int i = 0; i < 3; ++i)
      CHECK(wcount[i] + scount < static_cast<int>(rb.size()));
  } else {
    for (int i = 0; i < 2; ++i)
      CHECK(3 * wcount[i] <= 2 * static_cast<int>(rb.size()));
  }
}

}  // namespace

TEST_CASE("rng determinism and ranges") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng r(7);
  for (int i = 0; i < 200; ++i) {
    const int v = r.uniform_int(-3, 5);
    CHECK(v >= -3);
    CHECK(v <= 5);
  }
  CHECK(r.uniform_int(4, 4) == 4);
  CHECK_FALSE(r.bernoulli(0.0));
  CHECK(r.bernoulli(1.0));
  std::vector<int> xs{1, 2, 3, 4, 5};
  Rng s1(9), s2(9);
  std::vector<int> ys = xs;
  s1.shuffle(xs);
  s2.shuffle(ys);
  CHECK(xs == ys);
}

TEST_CASE("exact treewidth on reference graphs") {
  CHECK(exact_treewidth(make_graph(0, {})) == -1);
  CHECK(exact_treewidth(make_graph(1, {})) == 0);
  CHECK(exact_treewidth(make_graph(2, {{0, 1}})) == 1);
  // Trees of several shapes.
  CHECK(exact_treewidth(generate({"path", 8, 0, 1.0, 0}).graph) == 1);
  CHECK(exact_treewidth(generate({"tree", 9, 0, 1.0, 3}).graph) == 1);
  // Cliques: K5 -> 4.
  CHECK(exact_treewidth(generate({"complete", 5, 0, 1.0, 0}).graph) == 4);
  // Cycles: 2.
  CHECK(exact_treewidth(generate({"cycle", 6, 0, 1.0, 0}).graph) == 2);
  CHECK_THROWS_AS(exact_treewidth(make_graph(21, {})), std::invalid_argument);
}

TEST_CASE("exact treewidth of the 3x3 grid, cross-checked exhaustively") {
  const Graph grid = generate({"grid", 3, 3, 1.0, 0}).graph;
  CHECK(grid.num_vertices() == 9);
  CHECK(grid.num_edges() == 12);
  CHECK(exact_treewidth(grid) == 3);
  CHECK(treewidth_by_elimination_orders(grid) == 3);
}

TEST_CASE("brute partition size reference values") {
  const Graph p3 = make_graph(3, {{0, 1}, {1, 2}});
  // Bag {0,2} labeled W1/W2: the middle vertex is forced into the separator.
  auto r = brute_partition_size(p3, {0, 1, 2},
                                bag_partition({0, 2}, {PartLabel::kW1, PartLabel::kW2}), 4);
  REQUIRE(r.has_value());
  CHECK(*r == 1);
  // Same question in 3-part form.
  auto r3 = brute_partition_size(p3, {0, 1, 2},
                                 bag_partition({0, 2}, {PartLabel::kW1, PartLabel::kW2}), 3);
  REQUIRE(r3.has_value());
  CHECK(*r3 == 1);

  // Fully specified legal bag: size is exactly the bag's separator count.
  auto full = brute_partition_size(
      p3, {0, 1, 2},
      bag_partition({0, 1, 2}, {PartLabel::kW1, PartLabel::kX, PartLabel::kW2}), 4);
  REQUIRE(full.has_value());
  CHECK(*full == 1);

  // Illegal inside the bag: no completion exists.
  auto bad = brute_partition_size(
      p3, {0, 1, 2},
      bag_partition({0, 1}, {PartLabel::kW1, PartLabel::kW2}), 4);
  CHECK_FALSE(bad.has_value());

  // A component of vs that never touches the bag costs nothing.
  const Graph two = make_graph(5, {{0, 1}, {2, 3}, {3, 4}});
  auto free_comp = brute_partition_size(
      two, {0, 1, 2, 3, 4},
      bag_partition({0, 1}, {PartLabel::kW1, PartLabel::kW1}), 4);
  REQUIRE(free_comp.has_value());
  CHECK(*free_comp == 0);

  // W3 labels are rejected in 3-part form.
  CHECK_THROWS_AS(
      brute_partition_size(p3, {0, 1, 2},
                           bag_partition({0}, {PartLabel::kW3}), 3),
      std::invalid_argument);
  // Cap enforced.
  CHECK_THROWS_AS(
      brute_partition_size(make_graph(16, {}),
                           {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15},
                           bag_partition({0}, {PartLabel::kW1}), 4),
      std::invalid_argument);
}

TEST_CASE("brute partition size matches separator minima on a star") {
  // Star with center 0: leaves in different parts force the center into S.
  const Graph star = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
  auto split3 = brute_partition_size(
      star, {0, 1, 2, 3},
      bag_partition({1, 2, 3},
                    {PartLabel::kW1, PartLabel::kW2, PartLabel::kW3}), 4);
  REQUIRE(split3.has_value());
  CHECK(*split3 == 1);
  auto same = brute_partition_size(
      star, {0, 1, 2, 3},
      bag_partition({1, 2, 3},
                    {PartLabel::kW1, PartLabel::kW1, PartLabel::kW1}), 4);
  REQUIRE(same.has_value());
  CHECK(*same == 0);
}

TEST_CASE("split existence on the reference single-bag instances") {
  const Graph p5 = generate({"path", 5, 0, 1.0, 0}).graph;
  TreeDecomposition tp5 = single_bag_decomposition(p5);
  auto found = exists_split_bruteforce(p5, tp5, 1, 4);
  REQUIRE(found.has_value());
  check_assignment_invariants(p5, tp5, *found, 1, 4);

  auto found3 = exists_split_bruteforce(p5, tp5, 1, 3);
  REQUIRE(found3.has_value());
  check_assignment_invariants(p5, tp5, *found3, 1, 3);
  for (PartLabel l : found3->parts) CHECK(l != PartLabel::kW3);

  const Graph k4 = generate({"complete", 4, 0, 1.0, 0}).graph;
  TreeDecomposition tk4 = single_bag_decomposition(k4);
  CHECK_FALSE(exists_split_bruteforce(k4, tk4, 1, 4).has_value());

  CHECK_THROWS_AS(
      exists_split_bruteforce(make_graph(13, {}),
                              single_bag_decomposition(make_graph(13, {})), 1, 4),
      std::invalid_argument);
}

TEST_CASE("split existence follows the guarantee on wide-bag instances") {
  // For graphs of treewidth <= k, a root bag larger than 2(k+1) always splits.
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    GeneratorSpec spec;
    spec.family = "partial-k-tree";
    spec.n = 8;
    spec.k = 2;
    spec.edge_keep = 1.0;
    spec.seed = seed;
    GeneratedInstance inst = generate(spec);
    REQUIRE(exact_treewidth(inst.graph) <= 2);
    TreeDecomposition t = single_bag_decomposition(inst.graph);
    // |B_r| = 8 > 2(k+1) = 6.
    auto s = exists_split_bruteforce(inst.graph, t, 2, 4);
    REQUIRE(s.has_value());
    check_assignment_invariants(inst.graph, t, *s, 2, 4);
  }
}

TEST_CASE("generator families and witnesses") {
  GeneratedInstance tree = generate({"tree", 7, 0, 1.0, 11});
  CHECK(tree.graph.num_vertices() == 7);
  CHECK(tree.graph.num_edges() == 6);
  CHECK(connected_components(tree.graph).size() == 1);
  CHECK(exact_treewidth(tree.graph) == 1);

  GeneratorSpec spec;
  spec.family = "partial-k-tree";
  spec.n = 50;
  spec.k = 2;
  spec.edge_keep = 1.0;
  spec.seed = 5;
  GeneratedInstance full = generate(spec);
  REQUIRE(full.witness.has_value());
  CHECK(full.witness->width() == 2);
  CHECK(validate_td(full.graph, *full.witness).valid());
  // A 2-tree on 50 vertices has 2*50 - 3 edges.
  CHECK(full.graph.num_edges() == 97);

  spec.edge_keep = 0.5;
  GeneratedInstance sparse = generate(spec);
  REQUIRE(sparse.witness.has_value());
  CHECK(validate_td(sparse.graph, *sparse.witness).valid());
  CHECK(sparse.graph.num_edges() < full.graph.num_edges());

  // Witness bound agrees with exact treewidth on small samples.
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    GeneratorSpec small;
    small.family = "partial-k-tree";
    small.n = 9;
    small.k = 2;
    small.edge_keep = 0.7;
    small.seed = seed;
    GeneratedInstance inst = generate(small);
    REQUIRE(inst.witness.has_value());
    CHECK(validate_td(inst.graph, *inst.witness).valid());
    CHECK(exact_treewidth(inst.graph) <= 2);
  }

  // Determinism: identical bytes for identical specs.
  std::ostringstream a, b;
  write_graph(a, generate(spec).graph);
  write_graph(b, generate(spec).graph);
  CHECK(a.str() == b.str());

  CHECK_THROWS_AS(generate({"partial-k-tree", 2, 2, 1.0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate({"cycle", 2, 0, 1.0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(generate({"mystery", 3, 0, 1.0, 0}), std::invalid_argument);
}
