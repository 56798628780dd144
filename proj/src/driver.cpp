#include "twsplit/driver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "twsplit/split.hpp"

namespace twsplit {

namespace {

void accumulate(PotentialMeter& into, const PotentialMeter& from) {
  into.dp_recomputes += from.dp_recomputes;
  into.rotations += from.rotations;
  into.merges += from.merges;
  into.splits += from.splits;
  into.dfs_steps += from.dfs_steps;
  into.tables_fused += from.tables_fused;
  into.entries_visited += from.entries_visited;
  into.xp_parent_bag_events += from.xp_parent_bag_events;
}

void reset_statuses(TreeDecomposition& t) {
  for (int id : t.alive_ids()) t.node(id).status = DfsStatus::kUnvisited;
}

int parent_main(const TreeDecomposition& t, int x) {
  const int z = t.node(x).parent;
  return z == -1 ? -1 : t.node(z).parent;
}

// One round at width w: depth-first walk over the Main nodes that moves every
// bag of size w+1 to the root and splits it. Returns false when a split
// search came up empty.
//
// The walk keeps a single cursor rather than a path stack. Rotations hang the
// old root under one branch of the new root while the rest of the traversal
// path continues under another, and the merges they trigger can re-hang such
// subtrees as siblings of the remaining path, so the pre-visited nodes are in
// general spread over several branches. The cursor therefore re-enters
// pre-visited grandchildren (a free move, statuses untouched) to finish those
// branches, and a global scan picks the continuation point whenever the
// cursor runs out of local moves at the root. Each previsit/postvisit
// decrements exactly one node's status by exactly 1; both assert that before
// touching anything.
bool run_round(const Graph& g, TreeDecomposition& t, int k, int w, int mode,
               PotentialMeter& meter, SplitStats& stats) {
  const auto previsit = [&](int x) {
    Node& n = t.node(x);
    if (n.status != DfsStatus::kUnvisited)
      throw std::logic_error("dfs step: pre-visiting a node that is not unvisited");
    n.status = DfsStatus::kPreVisited;  // status drops 2 -> 1
    ++meter.dfs_steps;
    if (stats.audit) stats.audit("dfs_previsit", t);
  };
  const auto postvisit = [&](int x) {
    Node& n = t.node(x);
    if (n.status != DfsStatus::kPreVisited)
      throw std::logic_error("dfs step: post-visiting a node that is not pre-visited");
    n.status = DfsStatus::kPostVisited;  // status drops 1 -> 0
    ++meter.dfs_steps;
    if (stats.audit) stats.audit("dfs_postvisit", t);
  };

  if (stats.audit) stats.audit("round_start", t);
  int cur = t.root;
  while (true) {
    if (t.node(cur).status == DfsStatus::kUnvisited) previsit(cur);

    if (t.node(cur).status == DfsStatus::kPreVisited &&
        static_cast<int>(t.node(cur).bag.size()) == w + 1) {
      move_to_root(t, g, cur, &stats);
      const std::optional<SplitAssignment> s = find_split(t, k, mode, &stats);
      if (!s) return false;
      apply_split(t, g, *s, k, &stats);
      ++meter.splits;
      // The editable region around the cursor was dismantled; restart at the
      // fresh root. Kept branches are reached again through re-descent.
      cur = t.root;
      continue;
    }

    // Descend into the first grandchild with traversal work left.
    int down = -1;
    for (int z : t.node(cur).children) {
      for (int y : t.node(z).children)
        if (t.node(y).status != DfsStatus::kPostVisited) {
          down = y;
          break;
        }
      if (down != -1) break;
    }
    if (down != -1) {
      cur = down;
      continue;
    }

    // Subtree finished: close the cursor node if it is still open, then
    // retreat. Post-visited nodes re-entered while finishing a stranded
    // branch retreat without a second status change.
    if (t.node(cur).status == DfsStatus::kPreVisited) postvisit(cur);
    const int pm = parent_main(t, cur);
    if (pm != -1) {
      cur = pm;
      continue;
    }
    const int next = dfs_resume_point(t, DfsState{});
    if (next == -1) break;
    cur = next;
  }

  for (int id : t.alive_ids()) {
    const Node& n = t.node(id);
    if (n.kind == NodeKind::kMain && n.status != DfsStatus::kPostVisited)
      throw std::logic_error("round traversal finished with an unfinished main node");
    if (static_cast<int>(n.bag.size()) > w)
      throw std::logic_error("round finished with a maximum-size bag intact");
  }
  if (stats.audit) stats.audit("round_end", t);
  return true;
}

// Greedy minimum-degree elimination order on a shrinking fill graph; ties go
// to the smallest vertex id.
std::vector<VertexId> min_degree_order(const Graph& g) {
  const VertexId n = g.num_vertices();
  std::vector<std::set<VertexId>> adj(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges()) {
    adj[static_cast<std::size_t>(e.first)].insert(e.second);
    adj[static_cast<std::size_t>(e.second)].insert(e.first);
  }
  std::vector<char> gone(static_cast<std::size_t>(n), 0);
  // Lazy min-heap of (degree, vertex): degree updates push a fresh entry and
  // stale ones are skipped on pop, so each step costs the fill-in work plus a
  // few heap operations instead of a scan over every vertex.
  using HeapEntry = std::pair<std::size_t, VertexId>;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>>
      heap;
  for (VertexId v = 0; v < n; ++v)
    heap.push({adj[static_cast<std::size_t>(v)].size(), v});
  std::vector<VertexId> order;
  order.reserve(static_cast<std::size_t>(n));
  while (static_cast<VertexId>(order.size()) < n) {
    const auto [d, best] = heap.top();
    heap.pop();
    if (gone[static_cast<std::size_t>(best)] ||
        d != adj[static_cast<std::size_t>(best)].size())
      continue;
    order.push_back(best);
    gone[static_cast<std::size_t>(best)] = 1;
    const std::vector<VertexId> nb(adj[static_cast<std::size_t>(best)].begin(),
                                   adj[static_cast<std::size_t>(best)].end());
    for (VertexId u : nb) adj[static_cast<std::size_t>(u)].erase(best);
    for (std::size_t i = 0; i < nb.size(); ++i)
      for (std::size_t j = i + 1; j < nb.size(); ++j) {
        adj[static_cast<std::size_t>(nb[i])].insert(nb[j]);
        adj[static_cast<std::size_t>(nb[j])].insert(nb[i]);
      }
    for (VertexId u : nb)
      heap.push({adj[static_cast<std::size_t>(u)].size(), u});
  }
  return order;
}

// Contract tree edges while the merged bag stays within the target size.
// Contraction preserves decomposition validity; it only coarsens.
void coarsen(TreeDecomposition& t, int target) {
  bool changed = true;
  while (changed) {
    changed = false;
    const std::vector<int> order = subtree_nodes(t, t.root);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int id = *it;
      if (!t.is_alive(id)) continue;
      const int p = t.node(id).parent;
      if (p == -1) continue;
      std::vector<VertexId> u = set_union_sorted(t.node(id).bag, t.node(p).bag);
      if (static_cast<int>(u.size()) > target) continue;
      const std::vector<int> kids = t.node(id).children;
      for (int c : kids) {
        t.unlink(c);
        t.link(p, c);
      }
      t.unlink(id);
      t.kill(id);
      t.node(p).bag = std::move(u);
      changed = true;
    }
  }
}

// Copies src (bags remapped through vmap) into dst; the copied root becomes
// dst's root when dst is empty and a child of dst's root otherwise.
void append_component(TreeDecomposition& dst, const TreeDecomposition& src,
                      const std::vector<VertexId>& vmap) {
  if (src.root == -1) return;
  std::vector<int> map(src.nodes.size(), -1);
  int copied_root = -1;
  for (int id : subtree_nodes(src, src.root)) {
    const Node& n = src.node(id);
    std::vector<VertexId> bag;
    bag.reserve(n.bag.size());
    for (VertexId v : n.bag) bag.push_back(vmap[static_cast<std::size_t>(v)]);
    const int nid = dst.add_node(std::move(bag), n.kind);
    map[static_cast<std::size_t>(id)] = nid;
    if (n.parent != -1)
      dst.link(map[static_cast<std::size_t>(n.parent)], nid);
    else
      copied_root = nid;
  }
  if (dst.root == -1)
    dst.root = copied_root;
  else
    dst.link(dst.root, copied_root);
}

}  // namespace

void RunConfig::validate() const {
  if (k < 0) throw std::invalid_argument("config: k must be non-negative");
  if (forced_mode != 0 && forced_mode != 3 && forced_mode != 4)
    throw std::invalid_argument("config: mode must be 3, 4, or 0 for automatic");
  if (!(c_alpha > 0.0) || !(c_beta > 0.0) || !(c_gamma > 0.0) || !(c_delta > 0.0))
    throw std::invalid_argument("config: potential constants must be positive");
  if (!(c_alpha > c_beta) || !(c_alpha > c_gamma) || !(c_alpha > c_delta))
    throw std::invalid_argument("config: the alpha constant must dominate the others");
  if (max_table_entries < 16 || max_total_table_bytes < 1024)
    throw std::invalid_argument("config: table caps are too small to work with");
}

PotentialMeter potential_phi(const TreeDecomposition& t, const RunConfig& cfg) {
  // The constants are used as given here; only the run entry points insist on
  // the dominance constraint.
  PotentialMeter m;
  std::size_t max_bag = 0;
  for (int id : t.alive_ids())
    max_bag = std::max(max_bag, t.node(id).bag.size());
  std::int64_t max_count = 0;
  for (int id : t.alive_ids()) {
    const Node& n = t.node(id);
    if (n.bag.size() == max_bag) ++max_count;
    m.gamma += cfg.c_gamma;
    if (n.kind != NodeKind::kMain) continue;
    const double b = static_cast<double>(n.bag.size());
    if (n.parent == -1)
      m.alpha += cfg.c_alpha * b * (b + 1.0) / 2.0;
    else
      m.alpha += cfg.c_alpha * b *
                 static_cast<double>(
                     set_difference_sorted(n.bag, t.node(n.parent).bag).size());
    m.beta += cfg.c_beta * static_cast<double>(static_cast<int>(n.status));
  }
  m.delta = cfg.c_delta * static_cast<double>(cfg.k) *
            static_cast<double>(cfg.k) * static_cast<double>(max_count);
  m.phi = m.alpha + m.beta + m.gamma + m.delta;
  return m;
}

int round_mode(int w, int k, const RunConfig& cfg) {
  if (cfg.forced_mode != 0) return cfg.forced_mode;
  return w >= 3 * k + 3 ? 3 : 4;
}

DriveResult two_approx(const Graph& g, const TreeDecomposition& t_in, int k,
                       const RunConfig& cfg) {
  cfg.validate();
  if (k < 0) throw std::invalid_argument("two_approx: k must be non-negative");
  const ValidationReport vr = validate_td(g, t_in);
  if (!vr.valid())
    throw std::invalid_argument("two_approx: invalid input decomposition: " +
                                vr.violations.front());
  if (t_in.width() > 4 * k + 3)
    throw std::invalid_argument("two_approx: input width exceeds 4k+3");

  DriveResult res;
  if (g.num_vertices() == 0) {
    res.success = true;
    res.td = t_in;
    return res;
  }

  TreeDecomposition t = make_grouped(t_in);
  {
    const ValidationReport gr = validate_grouped(t);
    if (!gr.valid())
      throw std::logic_error("two_approx: regrouping failed: " +
                             gr.violations.front());
  }

  RunConfig pcfg = cfg;
  pcfg.k = k;
  int cur_base = 0;
  for (int w = t.width(); w >= 2 * k + 2; --w) {
    RoundReport rep;
    rep.w = w;
    rep.k = k;
    rep.mode = round_mode(w, k, cfg);
    SplitStats stats;
    stats.audit = cfg.audit_hook;
    std::int64_t rebuild_passes = 0;
    if (cur_base != rep.mode) {
      for (int id : t.alive_ids())
        rebuild_passes += 1 + static_cast<std::int64_t>(t.node(id).children.size());
      stats.entries_visited += rebuild_all_tables(t, g, rep.mode);
      cur_base = rep.mode;
    }
    reset_statuses(t);
    {
      const PotentialMeter snap = potential_phi(t, pcfg);
      rep.meter.alpha = snap.alpha;
      rep.meter.beta = snap.beta;
      rep.meter.gamma = snap.gamma;
      rep.meter.delta = snap.delta;
      rep.meter.phi = snap.phi;
    }
    for (int id : t.alive_ids())
      rep.max_table_entries =
          std::max(rep.max_table_entries,
                   static_cast<std::int64_t>(t.node(id).table.entries.size()));

    const bool ok = run_round(g, t, k, w, rep.mode, rep.meter, stats);

    rep.meter.dp_recomputes = stats.table_passes + rebuild_passes;
    rep.meter.rotations = stats.rotations;
    rep.meter.merges = stats.merges;
    rep.meter.tables_fused = stats.tables_fused;
    rep.meter.entries_visited = stats.entries_visited;
    rep.meter.xp_parent_bag_events = stats.xp_parent_bag_events;
    accumulate(res.totals, rep.meter);
    if (cfg.telemetry) res.rounds.push_back(rep);
    if (!ok) {
      res.success = false;
      res.fail_width = w;
      res.fail_k = k;
      res.td = std::move(t);
      return res;
    }
    if (t.width() > w - 1)
      throw std::logic_error("two_approx: round did not reduce the width");
  }

  const ValidationReport out_ok = validate_td(g, t);
  if (!out_ok.valid())
    throw std::logic_error("two_approx: produced an invalid decomposition: " +
                           out_ok.violations.front());
  res.success = true;
  res.td = std::move(t);
  return res;
}

int bootstrap_bag_target(VertexId n, int k, const RunConfig& cfg) {
  cfg.validate();
  if (k < 0) throw std::invalid_argument("bootstrap: k must be non-negative");
  const int hi = static_cast<int>(std::min<std::int64_t>(n, 4LL * k + 4));
  const double cap =
      std::min(static_cast<double>(cfg.max_table_entries),
               static_cast<double>(cfg.max_total_table_bytes) / 2.0 /
                   std::max(1.0, static_cast<double>(n)));
  for (int b = hi; b > 2; --b) {
    double need;
    if (cfg.forced_mode == 3)
      need = std::pow(3.0, b);
    else if (cfg.forced_mode == 4)
      need = std::pow(4.0, b);
    else if (b - 1 >= 3 * k + 3)
      need = std::max(std::pow(3.0, b), std::pow(4.0, std::min(b, 3 * k + 3)));
    else
      need = std::pow(4.0, b);
    if (need <= cap) return b;
  }
  return std::min(hi, 2);
}

TreeDecomposition bootstrap_decomposition(const Graph& g, int k,
                                          const RunConfig& cfg) {
  cfg.validate();
  if (k < 0) throw std::invalid_argument("bootstrap: k must be non-negative");
  if (g.num_vertices() == 0) return {};
  TreeDecomposition t = td_from_elimination_order(g, min_degree_order(g));
  coarsen(t, bootstrap_bag_target(g.num_vertices(), k, cfg));
  return t;
}

DriveResult decide_treewidth(const Graph& g, int k, const RunConfig& cfg) {
  cfg.validate();
  if (k < 0)
    throw std::invalid_argument("decide_treewidth: k must be non-negative");
  DriveResult out;
  TreeDecomposition joined;
  int comp_idx = 0;
  for (const std::vector<VertexId>& vs : connected_components(g)) {
    const Graph gc = induced_subgraph(g, vs);
    TreeDecomposition tc = bootstrap_decomposition(gc, k, cfg);
    while (tc.width() > 2 * k + 1) {
      const int w = tc.width();
      const int k2 = std::max(k, w / 4);  // = max(k, ceil((w-3)/4))
      DriveResult r = two_approx(gc, tc, k2, cfg);
      for (RoundReport& rr : r.rounds) {
        rr.component = comp_idx;
        out.rounds.push_back(std::move(rr));
      }
      accumulate(out.totals, r.totals);
      if (!r.success) {
        out.success = false;
        out.fail_width = r.fail_width;
        out.fail_k = r.fail_k;
        return out;
      }
      if (r.td.width() >= w)
        throw std::logic_error(
            "decide_treewidth: compression did not reduce the width");
      tc = std::move(r.td);
    }
    append_component(joined, tc, vs);
    ++comp_idx;
  }
  out.success = true;
  out.td = std::move(joined);
  if (g.num_vertices() > 0) {
    const ValidationReport v = validate_td(g, out.td);
    if (!v.valid())
      throw std::logic_error("decide_treewidth: joined decomposition invalid: " +
                             v.violations.front());
  }
  return out;
}

}  // namespace twsplit
