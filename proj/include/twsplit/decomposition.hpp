#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "twsplit/dp_table.hpp"
#include "twsplit/graph.hpp"

namespace twsplit {

enum class NodeKind : std::uint8_t { kMain, kIntersection };

// DFS bookkeeping values double as the beta-potential weight per node.
enum class DfsStatus : std::uint8_t {
  kPostVisited = 0,
  kPreVisited = 1,
  kUnvisited = 2,
};

struct Node {
  NodeKind kind = NodeKind::kMain;
  bool alive = true;
  std::vector<VertexId> bag;  // sorted ascending
  int parent = -1;            // -1 for the root
  std::vector<int> children;
  DpTable table;                   // maintained by the split engine
  std::int64_t structure_rev = 0;  // bumped when the node's subtree changes
  std::int64_t table_rev = -1;     // structure_rev the table was last synced to
  DfsStatus status = DfsStatus::kUnvisited;
  int alive_next = -1;  // intrusive alive-list links, maintained by
  int alive_prev = -1;  // add_node/kill; unordered
};

// Rooted tree decomposition with id-addressed nodes. Ids are never reused;
// deleted nodes are tombstoned (alive = false) so witnesses in reports and
// telemetry stay stable. Long runs tombstone far more nodes than stay alive,
// so the alive nodes are additionally threaded on an intrusive list: loops
// that run per split must use first_alive/next_alive rather than scanning
// the id space.
struct TreeDecomposition {
  std::vector<Node> nodes;
  int root = -1;
  // Largest vertex id ever placed in a bag (-1 when none): a monotone upper
  // bound used to size per-vertex scratch without scanning bags.
  VertexId max_bag_vertex = -1;

  Node& node(int id) { return nodes[static_cast<std::size_t>(id)]; }
  const Node& node(int id) const { return nodes[static_cast<std::size_t>(id)]; }
  bool is_alive(int id) const {
    return id >= 0 && id < static_cast<int>(nodes.size()) &&
           nodes[static_cast<std::size_t>(id)].alive;
  }

  int add_node(std::vector<VertexId> bag, NodeKind kind = NodeKind::kMain);
  void link(int parent, int child);  // child must currently be detached
  void unlink(int child);            // detach child from its parent
  void kill(int id);                 // tombstone a detached, childless node

  // Alive-list traversal in unspecified order, O(alive) total.
  int first_alive() const { return alive_head_; }
  int next_alive(int id) const {
    return nodes[static_cast<std::size_t>(id)].alive_next;
  }

  int alive_count() const;
  std::vector<int> alive_ids() const;
  // Max bag size - 1 over alive nodes (-1 if none).
  int width() const;

 private:
  int alive_head_ = -1;
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool valid() const { return violations.empty(); }
  std::string summary() const;
};

// Checks the three decomposition conditions (edge coverage, vertex coverage,
// per-vertex connected subtree) plus tree-structure sanity; every violation
// is reported with a witness.
ValidationReport validate_td(const Graph& g, const TreeDecomposition& t);

// Checks the grouped normal form: root and leaves Main with a non-empty root
// bag, kinds alternating along parent links, every non-root Main home to
// exactly one vertex with B_p(y) = B_x intersect B_y, intersection bags
// contained in the parent bag and pairwise distinct among siblings, and
// child counts within the 2^|B_x| - 1 bound.
ValidationReport validate_grouped(const TreeDecomposition& t);

// Lemma-3 normal form: deletes nodes whose bag is a subset of the parent's
// (children reattach to the parent), then inserts forget chains so every
// non-root node introduces exactly one vertex. Width is preserved.
TreeDecomposition make_unique_home(const TreeDecomposition& t);

// Grouped normal form for a decomposition of a connected graph: applies
// make_unique_home, re-roots away from an empty root bag if needed, then
// inserts one Intersection node per distinct parent/child intersection bag
// (found via a per-parent temporary binary keyed trie over bag membership).
// Throws std::invalid_argument when an empty intersection bag is discovered
// (decomposition of a disconnected graph).
TreeDecomposition make_grouped(const TreeDecomposition& t);

// vertex -> id of its home (the node closest to the root containing it);
// -1 for vertices in no bag. Sized max bag vertex + 1.
std::vector<int> home_index(const TreeDecomposition& t);

// Nodes of the subtree rooted at x in preorder.
std::vector<int> subtree_nodes(const TreeDecomposition& t, int x);
// Sorted union of the bags in the subtree rooted at x.
std::vector<VertexId> subtree_vertices(const TreeDecomposition& t, int x);

// Re-root a plain (ungrouped) decomposition by flipping parent links along
// the path to the old root. Kinds are not touched.
void reroot(TreeDecomposition& t, int new_root);

// One Main node holding every vertex of g.
TreeDecomposition single_bag_decomposition(const Graph& g);

// Width-minimal-per-order decomposition from an elimination order (a
// permutation of V): bag of v = {v} plus its not-yet-eliminated neighbors in
// the fill graph; parent = bag of the earliest-eliminated such neighbor.
TreeDecomposition td_from_elimination_order(const Graph& g,
                                            const std::vector<VertexId>& order);

// Recompute every table bottom-up (init + add per child) for a grouped
// decomposition and sync table revisions. Returns entries visited.
std::int64_t rebuild_all_tables(TreeDecomposition& t, const Graph& g, int base);

// PACE .td: header `s td <N> <maxbag> <n>`, bag lines `b <i> <v...>`, then
// decomposition tree edges `<i> <j>` (all 1-indexed; `c` comments allowed).
// Kinds and root are not serialized: parsing roots at bag 1, all Main.
TreeDecomposition parse_td(std::istream& in);
TreeDecomposition parse_td_file(const std::string& path);
void write_td(std::ostream& out, const TreeDecomposition& t, VertexId n);

}  // namespace twsplit
