#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "twsplit/decomposition.hpp"
#include "twsplit/graph.hpp"
#include "twsplit/partition.hpp"

namespace twsplit {

// A committed split of the decomposition: a global vertex labeling into
// component parts (kW1..kW3 stand for C1..C3) and the separator (kX stands
// for S), plus for every tree node the non-empty set of component indices
// whose copies receive it.
//
// Invariants of a well-formed assignment:
//   - the labeling is legal: no graph edge joins two distinct C-parts;
//   - a(x) is a non-empty subset of a(parent(x));
//   - whenever the bag of x meets some C-part, a(x) is exactly the set of
//     parts its bag meets;
//   - the root partition satisfies the mode's balance condition and has
//     separator size <= k+1.
struct SplitAssignment {
  std::vector<PartLabel> parts;  // indexed by vertex id; kX marks the separator
  std::vector<std::uint8_t> a;   // indexed by node id; bit i-1 set <=> part i
};

// Round bookkeeping for the depth-first traversal over Main nodes. The
// per-node visit statuses live on the nodes themselves (Node::status);
// statuses only ever decrease for surviving nodes, and nodes created by a
// split enter as unvisited.
struct DfsState {
  int cursor = -1;  // Main node the traversal is parked at, -1 before start
};

// Counters reported by the split engine for potential-function accounting.
struct SplitStats {
  std::int64_t entries_visited = 0;        // DP entries touched by table work
  std::int64_t table_passes = 0;           // whole-table recomputation passes
                                           // (init/add/subtract/copy/extend;
                                           // read-only scans are not counted)
  std::int64_t rotations = 0;              // edge rotations performed
  std::int64_t merges = 0;                 // homeless-node merges performed
  std::int64_t tables_fused = 0;           // entrywise intersection-table fusions
  std::int64_t xp_parent_bag_events = 0;   // descent met a parent bag fully in S
  // Optional observer invoked after every completed mutation ("rotate",
  // "merge", "move_to_root", "apply_split") with the resulting tree, so
  // validation harnesses can audit each step. Never invoked mid-operation.
  std::function<void(const char* op, const TreeDecomposition& t)> audit;
};

// True iff the labeling restricted to x's bag has at least two non-empty
// C-parts, i.e. the node must be copied when the split is applied.
bool is_editable(const TreeDecomposition& t, int x, const SplitAssignment& s);

// Top-down split selection. Requires every table in the tree to be current
// (table_rev == structure_rev; throws std::logic_error otherwise). Scans root
// partitions in increasing index order and takes the first with separator
// size <= k+1 meeting the mode balance condition (mode 4: |W_i| + size < |bag|
// for every i; mode 3: |W_i| <= 2/3 |bag| using only parts 1 and 2). Then
// descends: each Main child below an editable node receives the good
// partition — compatible with the parent, of minimal size, breaking ties by
// larger bag-separator count and then by lexicographically smallest label
// string in vertex order. Returns std::nullopt iff no root partition
// qualifies.
std::optional<SplitAssignment> find_split(const TreeDecomposition& t, int k,
                                          int mode,
                                          SplitStats* stats = nullptr);

// Re-roots the decomposition at y, a Main grandchild of the current root.
// Tables are updated along the rotated edge only. If the old root bag has
// j > 1 vertices outside y's bag, a forget chain of j-1 Main nodes (with
// their intersection parents) is inserted; if the old root bag is contained
// in y's bag the old root is merged away. Returns DP entries visited.
std::int64_t rotate(TreeDecomposition& t, const Graph& g, int y,
                    SplitStats* stats = nullptr);

// Repeated rotations until x is the root. Identity when x already is.
std::int64_t move_to_root(TreeDecomposition& t, const Graph& g, int x,
                          SplitStats* stats = nullptr);

// Removes the homeless Main node y (a grandchild of x with bag contained in
// x's bag): y's intersection children are re-parented under x, fusing
// entrywise with an equal-bag sibling when one exists; y and its parent
// intersection node (when childless) are deleted. x's table is left
// bit-identical without recomputation. Returns DP entries visited.
std::int64_t merge(TreeDecomposition& t, int x, int y,
                   SplitStats* stats = nullptr);

// Applies a committed split: every editable node is replaced by one copy per
// index in a(x) with bag (C_i cap B_x) union (S cap B_x); non-editable
// subtrees are re-linked unmodified under the copy for their singleton
// a-value; copy tables are derived from the original tables by masked
// re-indexing, then bags are extended by separator vertices occurring below;
// a new root with bag S is created above the root copies; homeless merges
// run bottom-up before returning. All created nodes start unvisited.
// Returns DP entries visited.
std::int64_t apply_split(TreeDecomposition& t, const Graph& g,
                         const SplitAssignment& s, int k,
                         SplitStats* stats = nullptr);

// Where the round traversal continues when its cursor has no local moves
// left: the smallest-id pre-visited Main (an unfinished branch left behind by
// a split's re-hang) if any exists, else the smallest-id unvisited Main, else
// -1 for round completion.
int dfs_resume_point(const TreeDecomposition& t, const DfsState& d);

}  // namespace twsplit
