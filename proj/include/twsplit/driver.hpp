#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "twsplit/decomposition.hpp"
#include "twsplit/graph.hpp"

namespace twsplit {

// Knobs for a compression run. The potential constants affect reporting only,
// never control flow; they must satisfy the dominance constraint below so the
// alpha term can absorb the bounded structural growth caused by splits.
struct RunConfig {
  int k = 1;             // parameter used by potential snapshots (delta term)
  int forced_mode = 0;   // 0 = pick 3 or 4 per round width; 3 or 4 = always.
                         // Forcing 4 everywhere is always sound (just slower
                         // above width 3k+2); forcing 3 makes a failed round
                         // below width 3k+3 inconclusive rather than a
                         // certificate.
  bool telemetry = false;  // collect one RoundReport per round
  double c_alpha = 8.0;
  double c_beta = 1.0;
  double c_gamma = 2.0;
  double c_delta = 4.0;
  std::uint64_t seed = 0;  // reserved for sampled diagnostics
  // Bootstrap coarsening caps: the starting decomposition is only coarsened
  // while the largest table stays within max_table_entries and the
  // (pessimistic) total stays within max_total_table_bytes.
  std::int64_t max_table_entries = 300000;
  std::int64_t max_total_table_bytes = 1073741824;  // 1 GiB

  // Optional observer for validation harnesses, invoked after every engine
  // mutation ("rotate", "merge", "move_to_root", "apply_split") and at the
  // round landmarks "round_start", "dfs_previsit", "dfs_postvisit" and
  // "round_end", always with the tree in a consistent state. Adds no work
  // when unset.
  std::function<void(const char* op, const TreeDecomposition& t)> audit_hook;

  // Throws std::invalid_argument unless k >= 0, forced_mode is 0, 3 or 4,
  // every constant is positive, and c_alpha > max(c_beta, c_gamma, c_delta).
  void validate() const;
};

// Potential snapshot plus the work counters accumulated over one round.
// phi = alpha + beta + gamma + delta;
//   alpha = c_alpha * sum over Main nodes of |B_x| * f(x), with
//           f(root) = (|B_r|+1)/2 and f(x) = |B_x \ B_parent(x)| otherwise;
//   beta  = c_beta * sum over Main nodes of the DFS status value
//           (unvisited 2, pre-visited 1, post-visited 0);
//   gamma = c_gamma * number of alive nodes;
//   delta = c_delta * k^2 * number of alive nodes of maximum bag size.
struct PotentialMeter {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  double phi = 0.0;
  std::int64_t dp_recomputes = 0;  // whole-table passes (init/add/subtract/
                                   // copy/extend), including base rebuilds
  std::int64_t rotations = 0;
  std::int64_t merges = 0;
  std::int64_t splits = 0;
  std::int64_t dfs_steps = 0;
  std::int64_t tables_fused = 0;
  std::int64_t entries_visited = 0;
  std::int64_t xp_parent_bag_events = 0;
};

// Potential of the current tree under cfg's constants and cfg.k. Counters of
// the returned meter are zero.
PotentialMeter potential_phi(const TreeDecomposition& t, const RunConfig& cfg);

// One compression round: potential snapshot taken at round start (statuses
// freshly reset) and counters accumulated until the round completed or its
// split search failed.
struct RoundReport {
  int component = 0;            // decide_treewidth component index
  int w = 0;                    // round width: bags of size w+1 are split
  int k = 0;                    // parameter in force during this round
  int mode = 0;                 // table base used this round (3 or 4)
  std::int64_t max_table_entries = 0;  // largest table at round start
  PotentialMeter meter;
};

// Outcome of two_approx / decide_treewidth. On success, td holds a valid
// decomposition of width <= 2k+1. On failure, fail_width is the round width
// whose split search came up empty and fail_k the parameter in force there;
// fail_k >= k certifies tw(g) > k. totals accumulates the counters of every
// round; rounds is filled when cfg.telemetry is set.
struct DriveResult {
  bool success = false;
  TreeDecomposition td;
  int fail_width = -1;
  int fail_k = -1;
  PotentialMeter totals;
  std::vector<RoundReport> rounds;
};

// Table base for a round of width w at parameter k: 3 while w >= 3k+3, else
// 4, unless cfg.forced_mode overrides.
int round_mode(int w, int k, const RunConfig& cfg);

// Width-halving compressor. Requires t_in valid for the connected graph g
// with width(t_in) <= 4k+3 (std::invalid_argument otherwise). Regroups t_in,
// then runs rounds w = width(t_in) down to 2k+2; each round walks the Main
// nodes depth-first, moves every bag of size w+1 to the root and splits it.
// A round whose root scan finds no split stops the run; since every round
// width is at least 2k+2, that outcome certifies tw(g) > k.
DriveResult two_approx(const Graph& g, const TreeDecomposition& t_in, int k,
                       const RunConfig& cfg = {});

// Largest starting bag size the bootstrap may coarsen to: at most n and
// 4k+4, further capped so every table of a run started at width b*-1 fits
// cfg.max_table_entries and n such tables fit cfg.max_total_table_bytes.
int bootstrap_bag_target(VertexId n, int k, const RunConfig& cfg);

// Starting decomposition for a connected graph: greedy min-degree
// elimination order, then tree-edge contraction while merged bags stay
// within bootstrap_bag_target. Valid for g; plain (ungrouped) form.
TreeDecomposition bootstrap_decomposition(const Graph& g, int k,
                                          const RunConfig& cfg = {});

// Full decision procedure: per connected component, bootstrap and repeatedly
// compress with k' = max(k, ceil((w-3)/4)) until the width is at most 2k+1;
// any failure happens at k' >= k and soundly certifies tw(g) > k. Component
// decompositions are joined by an edge between their roots, so on success td
// is a valid decomposition of all of g with width <= 2k+1.
DriveResult decide_treewidth(const Graph& g, int k, const RunConfig& cfg = {});

}  // namespace twsplit
