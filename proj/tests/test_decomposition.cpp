#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "twsplit/decomposition.hpp"
#include "twsplit/oracle.hpp"

using namespace twsplit;

namespace {

Graph make_graph(VertexId n, std::vector<Edge> edges) { return Graph(n, edges); }

TreeDecomposition chain_td(std::vector<std::vector<VertexId>> bags) {
  TreeDecomposition t;
  int prev = -1;
  for (auto& bag : bags) {
    const int id = t.add_node(std::move(bag));
    if (prev == -1)
      t.root = id;
    else
      t.link(prev, id);
    prev = id;
  }
  return t;
}

int td_parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_td(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

// Home counts per node: how many vertices have this node as topmost holder.
std::vector<int> home_counts(const TreeDecomposition& t) {
  const std::vector<int> home = home_index(t);
  std::vector<int> count(t.nodes.size(), 0);
  for (int h : home)
    if (h >= 0) ++count[static_cast<std::size_t>(h)];
  return count;
}

std::set<std::pair<int, int>> edge_pairs(const TreeDecomposition& t) {
  std::set<std::pair<int, int>> out;
  std::vector<int> index(t.nodes.size(), 0);
  const std::vector<int> ids = t.alive_ids();
  for (std::size_t i = 0; i < ids.size(); ++i)
    index[static_cast<std::size_t>(ids[i])] = static_cast<int>(i) + 1;
  for (int id : ids) {
    const int p = t.node(id).parent;
    if (p == -1) continue;
    auto mm = std::minmax(index[static_cast<std::size_t>(p)],
                          index[static_cast<std::size_t>(id)]);
    out.insert({mm.first, mm.second});
  }
  return out;
}

}  // namespace

TEST_CASE("validate_td accepts the reference decompositions") {
  const Graph k3 = make_graph(3, {{0, 1}, {0, 2}, {1, 2}});
  TreeDecomposition single = single_bag_decomposition(k3);
  CHECK(validate_td(k3, single).valid());
  CHECK(single.width() == 2);

  const Graph p3 = make_graph(3, {{0, 1}, {1, 2}});
  TreeDecomposition good = chain_td({{0, 1}, {1, 2}});
  CHECK(validate_td(p3, good).valid());
  CHECK(good.width() == 1);
}

TEST_CASE("validate_td reports witnesses for each violated condition") {
  const Graph p3 = make_graph(3, {{0, 1}, {1, 2}});

  TreeDecomposition uncovered = chain_td({{0, 1}, {2}});
  ValidationReport r1 = validate_td(p3, uncovered);
  REQUIRE_FALSE(r1.valid());
  CHECK(r1.violations.size() == 1);
  CHECK(r1.summary().find("edge 1-2") != std::string::npos);

  TreeDecomposition missing = chain_td({{0, 1}});
  ValidationReport r2 = validate_td(p3, missing);
  REQUIRE_FALSE(r2.valid());
  bool vertex_witness = false;
  for (const std::string& v : r2.violations)
    if (v.find("vertex 2") != std::string::npos) vertex_witness = true;
  CHECK(vertex_witness);

  // Vertex 0 appears in two bags with a 0-free bag between them.
  TreeDecomposition split0 = chain_td({{0, 1}, {1, 2}, {0, 2}});
  ValidationReport r3 = validate_td(p3, split0);
  REQUIRE_FALSE(r3.valid());
  bool connect_witness = false;
  for (const std::string& v : r3.violations)
    if (v.find("vertex 0") != std::string::npos &&
        v.find("not connected") != std::string::npos)
      connect_witness = true;
  CHECK(connect_witness);

  // Structural breakage: a child entry without the matching parent pointer.
  TreeDecomposition broken = chain_td({{0, 1}, {1, 2}});
  broken.nodes[1].parent = -1;
  ValidationReport r4 = validate_td(p3, broken);
  CHECK_FALSE(r4.valid());

  TreeDecomposition rootless;
  ValidationReport r5 = validate_td(p3, rootless);
  REQUIRE_FALSE(r5.valid());
  CHECK(r5.summary().find("root") != std::string::npos);

  // Bag vertex outside the graph.
  TreeDecomposition oob = chain_td({{0, 1, 7}});
  CHECK_FALSE(validate_td(p3, oob).valid());
}

TEST_CASE("make_unique_home handles the subset and chain cases") {
  // Subset child is deleted and its children are reattached.
  const Graph g1 = make_graph(3, {{0, 1}, {0, 2}});
  TreeDecomposition sub = chain_td({{0, 1}, {0}, {0, 2}});
  TreeDecomposition sub_out = make_unique_home(sub);
  CHECK(validate_td(g1, sub_out).valid());
  CHECK(sub_out.alive_count() == 2);
  CHECK(sub_out.width() == sub.width());
  CHECK(sub_out.node(sub_out.root).bag == std::vector<VertexId>{0, 1});
  REQUIRE(sub_out.node(sub_out.root).children.size() == 1);
  const int reattached = sub_out.node(sub_out.root).children.front();
  CHECK(sub_out.node(reattached).bag == std::vector<VertexId>{0, 2});

  // Child introducing three vertices gets a string of forget nodes.
  const Graph g2 = make_graph(3, {{0, 1}, {0, 2}});
  TreeDecomposition wide = chain_td({{0}, {0, 1, 2}});
  TreeDecomposition wide_out = make_unique_home(wide);
  CHECK(validate_td(g2, wide_out).valid());
  CHECK(wide_out.alive_count() == 3);
  // The inserted bag is {0,1}: intersection plus the smallest new vertex.
  bool found_mid = false;
  for (int id : wide_out.alive_ids())
    if (wide_out.node(id).bag == std::vector<VertexId>{0, 1}) found_mid = true;
  CHECK(found_mid);

  // Already unique-home input comes back structurally identical.
  TreeDecomposition idem = chain_td({{0, 1}, {1, 2}});
  TreeDecomposition idem_out = make_unique_home(idem);
  CHECK(idem_out.alive_count() == 2);
  CHECK(idem_out.node(idem_out.root).bag == std::vector<VertexId>{0, 1});
  REQUIRE(idem_out.node(idem_out.root).children.size() == 1);
  const int child = idem_out.node(idem_out.root).children.front();
  CHECK(idem_out.node(child).bag == std::vector<VertexId>{1, 2});
}

TEST_CASE("make_unique_home properties on random instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorSpec spec;
    spec.family = "partial-k-tree";
    spec.n = 10;
    spec.k = 3;
    spec.edge_keep = 0.8;
    spec.seed = seed;
    GeneratedInstance inst = generate(spec);
    Rng rng(seed * 71 + 5);
    std::vector<VertexId> order(10);
    for (int i = 0; i < 10; ++i) order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(order);
    TreeDecomposition t = td_from_elimination_order(inst.graph, order);
    REQUIRE(validate_td(inst.graph, t).valid());

    TreeDecomposition u = make_unique_home(t);
    CHECK(validate_td(inst.graph, u).valid());
    CHECK(u.width() == t.width());
    CHECK(u.alive_count() <= inst.graph.num_vertices());
    const std::vector<int> counts = home_counts(u);
    for (int id : u.alive_ids()) {
      if (id == u.root) {
        CHECK(counts[static_cast<std::size_t>(id)] >= 1);
      } else {
        CHECK(counts[static_cast<std::size_t>(id)] == 1);
        const int p = u.node(id).parent;
        CHECK(set_difference_sorted(u.node(id).bag, u.node(p).bag).size() == 1);
      }
    }
  }
}

TEST_CASE("make_grouped builds the alternating normal form") {
  const Graph p3 = make_graph(3, {{0, 1}, {1, 2}});
  TreeDecomposition chain = chain_td({{0, 1}, {1, 2}});
  TreeDecomposition g = make_grouped(chain);
  CHECK(validate_td(p3, g).valid());
  CHECK(validate_grouped(g).summary() == "valid");
  CHECK(g.alive_count() == 3);
  const Node& root = g.node(g.root);
  CHECK(root.kind == NodeKind::kMain);
  CHECK(root.bag == std::vector<VertexId>{0, 1});
  REQUIRE(root.children.size() == 1);
  const Node& mid = g.node(root.children.front());
  CHECK(mid.kind == NodeKind::kIntersection);
  CHECK(mid.bag == std::vector<VertexId>{1});
  REQUIRE(mid.children.size() == 1);
  const Node& leaf = g.node(mid.children.front());
  CHECK(leaf.kind == NodeKind::kMain);
  CHECK(leaf.bag == std::vector<VertexId>{1, 2});

  // Two children with the same overlap share one intersection node.
  const Graph shared = make_graph(
      5, {{0, 1}, {0, 2}, {1, 2}, {0, 3}, {1, 3}, {0, 4}, {1, 4}});
  TreeDecomposition t2;
  t2.root = t2.add_node({0, 1, 2});
  const int c1 = t2.add_node({0, 1, 3});
  const int c2 = t2.add_node({0, 1, 4});
  t2.link(t2.root, c1);
  t2.link(t2.root, c2);
  REQUIRE(validate_td(shared, t2).valid());
  TreeDecomposition g2 = make_grouped(t2);
  CHECK(validate_td(shared, g2).valid());
  CHECK(validate_grouped(g2).valid());
  REQUIRE(g2.node(g2.root).children.size() == 1);
  const Node& inter = g2.node(g2.node(g2.root).children.front());
  CHECK(inter.kind == NodeKind::kIntersection);
  CHECK(inter.bag == std::vector<VertexId>{0, 1});
  CHECK(inter.children.size() == 2);

  // Single node: unchanged.
  const Graph k3 = make_graph(3, {{0, 1}, {0, 2}, {1, 2}});
  TreeDecomposition single = make_grouped(single_bag_decomposition(k3));
  CHECK(single.alive_count() == 1);
  CHECK(validate_grouped(single).valid());

  // Disconnected graphs are rejected.
  TreeDecomposition disc = chain_td({{0}, {1}});
  CHECK_THROWS_AS(make_grouped(disc), std::invalid_argument);

  // Empty-bag roots are re-rooted away.
  TreeDecomposition hollow;
  hollow.root = hollow.add_node({});
  const int below = hollow.add_node({0, 1});
  hollow.link(hollow.root, below);
  TreeDecomposition fixed = make_grouped(hollow);
  CHECK(validate_grouped(fixed).valid());
  CHECK_FALSE(fixed.node(fixed.root).bag.empty());
}

TEST_CASE("make_grouped properties on random instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorSpec spec;
    spec.family = "partial-k-tree";
    spec.n = 12;
    spec.k = 2;
    spec.edge_keep = 1.0;  // keep=1 keeps the graph connected
    spec.seed = seed;
    GeneratedInstance inst = generate(spec);
    REQUIRE(inst.witness.has_value());
    TreeDecomposition g = make_grouped(*inst.witness);
    CHECK(validate_td(inst.graph, g).valid());
    CHECK(validate_grouped(g).valid());
    CHECK(g.width() == inst.witness->width());
    // Main-node homes partition V.
    const std::vector<int> counts = home_counts(g);
    int total = 0;
    for (int id : g.alive_ids()) {
      if (g.node(id).kind == NodeKind::kIntersection)
        CHECK(counts[static_cast<std::size_t>(id)] == 0);
      total += counts[static_cast<std::size_t>(id)];
    }
    CHECK(total == inst.graph.num_vertices());
  }
}

TEST_CASE("validate_grouped reports each property violation") {
  // Main under Main: alternation violation.
  TreeDecomposition mm = chain_td({{0, 1}, {1, 2}});
  for (int id : mm.alive_ids()) mm.node(id).kind = NodeKind::kMain;
  CHECK_FALSE(validate_grouped(mm).valid());

  // Equal intersection bags among siblings.
  TreeDecomposition dup;
  dup.root = dup.add_node({0, 1});
  const int i1 = dup.add_node({0}, NodeKind::kIntersection);
  const int i2 = dup.add_node({0}, NodeKind::kIntersection);
  dup.link(dup.root, i1);
  dup.link(dup.root, i2);
  const int m1 = dup.add_node({0, 2});
  const int m2 = dup.add_node({0, 3});
  dup.link(i1, m1);
  dup.link(i2, m2);
  ValidationReport rd = validate_grouped(dup);
  REQUIRE_FALSE(rd.valid());
  bool dup_witness = false;
  for (const std::string& v : rd.violations)
    if (v.find("duplicate intersection") != std::string::npos) dup_witness = true;
  CHECK(dup_witness);

  // Intersection bag not inside the parent bag.
  TreeDecomposition stray;
  stray.root = stray.add_node({0, 1});
  const int si = stray.add_node({2}, NodeKind::kIntersection);
  stray.link(stray.root, si);
  const int sm = stray.add_node({2, 3});
  stray.link(si, sm);
  CHECK_FALSE(validate_grouped(stray).valid());

  // Root must be Main with a non-empty bag; leaves must be Main.
  TreeDecomposition iroot;
  iroot.root = iroot.add_node({0}, NodeKind::kIntersection);
  CHECK_FALSE(validate_grouped(iroot).valid());
  TreeDecomposition eroot;
  eroot.root = eroot.add_node({});
  CHECK_FALSE(validate_grouped(eroot).valid());
  TreeDecomposition ileaf;
  ileaf.root = ileaf.add_node({0, 1});
  const int li = ileaf.add_node({0}, NodeKind::kIntersection);
  ileaf.link(ileaf.root, li);
  CHECK_FALSE(validate_grouped(ileaf).valid());

  // A Main grandchild housing two vertices violates the home rule.
  TreeDecomposition fat;
  fat.root = fat.add_node({0, 1});
  const int fi = fat.add_node({1}, NodeKind::kIntersection);
  fat.link(fat.root, fi);
  const int fm = fat.add_node({1, 2, 3});
  fat.link(fi, fm);
  ValidationReport rf = validate_grouped(fat);
  REQUIRE_FALSE(rf.valid());
  bool home_witness = false;
  for (const std::string& v : rf.violations)
    if (v.find("home to 2") != std::string::npos) home_witness = true;
  CHECK(home_witness);
}

TEST_CASE("td_from_elimination_order produces valid decompositions") {
  const Graph p3 = make_graph(3, {{0, 1}, {1, 2}});
  TreeDecomposition t = td_from_elimination_order(p3, {0, 1, 2});
  REQUIRE(validate_td(p3, t).valid());
  CHECK(t.width() == 1);
  CHECK(t.alive_count() == 3);

  TreeDecomposition mid = td_from_elimination_order(p3, {1, 0, 2});
  REQUIRE(validate_td(p3, mid).valid());
  CHECK(mid.width() == 2);  // eliminating the middle vertex first fills 0-2

  CHECK_THROWS_AS(td_from_elimination_order(p3, {0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(td_from_elimination_order(p3, {0, 1, 1}), std::invalid_argument);

  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    GeneratorSpec spec;
    spec.family = "partial-k-tree";
    spec.n = 11;
    spec.k = 2;
    spec.edge_keep = 0.6;
    spec.seed = seed + 100;
    GeneratedInstance inst = generate(spec);
    Rng rng(seed);
    std::vector<VertexId> order(11);
    for (int i = 0; i < 11; ++i) order[static_cast<std::size_t>(i)] = i;
    rng.shuffle(order);
    TreeDecomposition random_td = td_from_elimination_order(inst.graph, order);
    CHECK(validate_td(inst.graph, random_td).valid());
  }
}

TEST_CASE("subtree utilities and rerooting") {
  TreeDecomposition t;
  t.root = t.add_node({0, 1});
  const int a = t.add_node({1, 2});
  const int b = t.add_node({2, 3});
  const int c = t.add_node({1, 4});
  t.link(t.root, a);
  t.link(a, b);
  t.link(a, c);

  CHECK(subtree_nodes(t, t.root).size() == 4);
  CHECK(subtree_nodes(t, a).size() == 3);
  CHECK(subtree_vertices(t, a) == std::vector<VertexId>{1, 2, 3, 4});

  const Graph g = make_graph(5, {{0, 1}, {1, 2}, {2, 3}, {1, 4}});
  REQUIRE(validate_td(g, t).valid());
  reroot(t, b);
  CHECK(t.root == b);
  CHECK(validate_td(g, t).valid());
  CHECK(t.node(b).parent == -1);
  CHECK(t.node(a).parent == b);
  CHECK(subtree_vertices(t, t.root) == std::vector<VertexId>{0, 1, 2, 3, 4});

  const std::vector<int> home = home_index(t);
  for (VertexId v = 0; v < 5; ++v) {
    const int h = home[static_cast<std::size_t>(v)];
    REQUIRE(h >= 0);
    CHECK(sorted_contains(t.node(h).bag, v));
    if (h != t.root) CHECK_FALSE(sorted_contains(t.node(t.node(h).parent).bag, v));
  }
}

TEST_CASE("td serialization round-trips and reports parse errors") {
  const Graph g = make_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  TreeDecomposition t = chain_td({{0, 1}, {1, 2}, {2, 3}});
  std::ostringstream out;
  write_td(out, t, 4);
  CHECK(out.str().rfind("s td 3 2 4\n", 0) == 0);

  std::istringstream in(out.str());
  TreeDecomposition back = parse_td(in);
  CHECK(validate_td(g, back).valid());
  CHECK(back.alive_count() == 3);
  CHECK(edge_pairs(back) == edge_pairs(t));
  std::vector<std::vector<VertexId>> bags;
  for (int id : back.alive_ids()) bags.push_back(back.node(id).bag);
  CHECK(bags == std::vector<std::vector<VertexId>>{{0, 1}, {1, 2}, {2, 3}});

  CHECK(td_parse_error_line("b 1 1\n") == 1);
  CHECK(td_parse_error_line("s td 1 1 1\ns td 1 1 1\n") == 2);
  CHECK(td_parse_error_line("s td 1 1\n") == 1);
  CHECK(td_parse_error_line("s td 2 1 3\nb 3 1\n") == 2);
  CHECK(td_parse_error_line("s td 1 1 3\nb 1 1\nb 1 2\n") == 3);
  CHECK(td_parse_error_line("s td 1 1 3\nb 1 4\n") == 2);
  CHECK(td_parse_error_line("s td 1 2 3\nb 1 2 2\n") == 2);
  CHECK(td_parse_error_line("s td 2 1 3\nb 1 1\nb 2 2\n1 1\n") == 4);
  CHECK(td_parse_error_line("s td 2 1 3\nb 1 1\nb 2 2\n1 2\n1 2\n") == 5);
  // Edge count / connectivity / undeclared bags / max-bag mismatches are
  // detected at end of input and reported on the final line.
  CHECK(td_parse_error_line("s td 2 1 2\nb 1 1\nb 2 2\n") == 3);
  CHECK(td_parse_error_line(
            "s td 4 1 4\nb 1 1\nb 2 2\nb 3 3\nb 4 4\n1 2\n1 3\n2 3\n") == 8);
  CHECK(td_parse_error_line("s td 2 1 2\nb 1 1\n1 2\n") == 3);
  CHECK(td_parse_error_line("s td 1 2 2\nb 1 1\n") == 2);

  // Accepts comments, blank lines, and windows line endings.
  std::istringstream fancy("c comment\r\n\r\ns td 2 2 3\r\nb 1 1 2\r\nb 2 2 3\r\n1 2\r\n");
  TreeDecomposition f = parse_td(fancy);
  CHECK(f.alive_count() == 2);
  CHECK(f.node(f.root).bag == std::vector<VertexId>{0, 1});
}
