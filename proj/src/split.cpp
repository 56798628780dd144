#include "twsplit/split.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "twsplit/dp_table.hpp"

namespace twsplit {

namespace {

// Structure and table were changed together and stay consistent.
void touch(TreeDecomposition& t, int id) {
  Node& n = t.node(id);
  ++n.structure_rev;
  n.table_rev = n.structure_rev;
}

int popcount8(std::uint8_t m) { return __builtin_popcount(m); }

int lowest_bit(std::uint8_t m) { return __builtin_ctz(m); }

// Bitmask of component parts present among the bag's labels.
std::uint8_t bag_part_mask(const std::vector<VertexId>& bag,
                           const std::vector<PartLabel>& parts) {
  std::uint8_t mask = 0;
  for (VertexId v : bag) {
    const PartLabel l = parts[static_cast<std::size_t>(v)];
    if (l != PartLabel::kX)
      mask = static_cast<std::uint8_t>(mask | (1u << static_cast<int>(l)));
  }
  return mask;
}

// out[P] = src[P lifted by pinning src-bag vertices outside q to X] minus the
// number of pinned vertices; kBot is preserved. q must be a subset of src.bag.
DpTable masked_copy(const DpTable& src, const std::vector<VertexId>& q,
                    std::int64_t& visited) {
  const int base = src.base;
  const int sep = base - 1;
  DpTable out;
  out.base = base;
  out.bag = q;
  out.entries.assign(pow_u64(base, static_cast<unsigned>(q.size())), kBot);

  std::vector<std::uint64_t> weight(q.size(), 0);
  PartitionIndex lifted = 0;
  int pinned = 0;
  {
    std::size_t qi = 0;
    for (std::size_t p = 0; p < src.bag.size(); ++p) {
      if (qi < q.size() && q[qi] == src.bag[p]) {
        weight[qi] = pow_u64(base, static_cast<unsigned>(p));
        ++qi;
      } else {
        lifted += static_cast<PartitionIndex>(sep) * pow_u64(base, static_cast<unsigned>(p));
        ++pinned;
      }
    }
    if (qi != q.size())
      throw std::logic_error("masked_copy: q is not a subset of the source bag");
  }

  const int nd = static_cast<int>(q.size());
  std::vector<std::uint8_t> digits(q.size(), 0);
  for (PartitionIndex i = 0;; ++i) {
    const std::uint16_t e = src.entries[lifted];
    if (e != kBot) {
      if (static_cast<int>(e) < pinned)
        throw std::logic_error("masked_copy: entry smaller than its pinned count");
      out.entries[i] = static_cast<std::uint16_t>(e - pinned);
    }
    int p = 0;
    for (; p < nd; ++p) {
      const std::uint8_t od = digits[p];
      const std::uint8_t nd2 = (od + 1 == base) ? 0 : od + 1;
      lifted += (static_cast<std::int64_t>(nd2) - od) * weight[static_cast<std::size_t>(p)];
      digits[static_cast<std::size_t>(p)] = nd2;
      if (nd2 != 0) break;
    }
    if (p == nd) break;
  }
  visited += static_cast<std::int64_t>(out.entries.size());
  return out;
}

// Subtract (or add) a child table whose bag need not be contained in the
// parent bag: positions meeting the parent bag map through, the rest are
// pinned to X.
std::int64_t combine_pinned(DpTable& parent, const DpTable& child, int sign) {
  const int sep = parent.base - 1;
  std::vector<int> pos(child.bag.size(), -1);
  std::vector<std::uint8_t> fixed(child.bag.size(), 0);
  for (std::size_t j = 0; j < child.bag.size(); ++j) {
    auto it = std::lower_bound(parent.bag.begin(), parent.bag.end(), child.bag[j]);
    if (it != parent.bag.end() && *it == child.bag[j])
      pos[j] = static_cast<int>(it - parent.bag.begin());
    else
      fixed[j] = static_cast<std::uint8_t>(sep);
  }
  return combine_mapped_child(parent, child, pos, fixed, sign);
}

// Builds the forget chain between an upper bag and an existing node whose bag
// is upper plus |D| extra vertices. Returns the node to hang beneath an
// intersection over the upper bag: the child itself when |D| <= 1, else the
// top Main of the freshly built chain. New nodes start unvisited. upper is
// taken by value because adding nodes may reallocate the node vector.
int chain_build(TreeDecomposition& t, const Graph& g,
                const std::vector<VertexId> upper, int child, int base,
                std::int64_t& visited, SplitStats* stats) {
  const std::vector<VertexId> extra =
      set_difference_sorted(t.node(child).bag, upper);
  int cur = child;
  for (int i = static_cast<int>(extra.size()) - 1; i >= 1; --i) {
    std::vector<VertexId> bag = set_union_sorted(
        upper, std::vector<VertexId>(extra.begin(), extra.begin() + i));
    if (stats) stats->table_passes += 4;  // two inits, two child additions
    DpTable ti = init_table(g, bag, base);
    visited += static_cast<std::int64_t>(ti.entries.size());
    visited += add_child(ti, t.node(cur).table);
    DpTable tm = init_table(g, bag, base);
    visited += static_cast<std::int64_t>(tm.entries.size());
    visited += add_child(tm, ti);
    const int inter = t.add_node(bag, NodeKind::kIntersection);
    t.node(inter).table = std::move(ti);
    touch(t, inter);
    const int main = t.add_node(std::move(bag), NodeKind::kMain);
    t.node(main).table = std::move(tm);
    touch(t, main);
    t.link(main, inter);
    t.link(inter, cur);
    cur = main;
  }
  return cur;
}

}  // namespace

bool is_editable(const TreeDecomposition& t, int x, const SplitAssignment& s) {
  return popcount8(bag_part_mask(t.node(x).bag, s.parts)) >= 2;
}

std::optional<SplitAssignment> find_split(const TreeDecomposition& t, int k,
                                          int mode, SplitStats* stats) {
  if (mode != 3 && mode != 4) throw std::invalid_argument("mode must be 3 or 4");
  if (!t.is_alive(t.root)) throw std::invalid_argument("decomposition has no root");
  const int base = mode;
  const int sep = base - 1;
  for (int id = t.first_alive(); id != -1; id = t.next_alive(id)) {
    const Node& n = t.node(id);
    if (n.table_rev != n.structure_rev)
      throw std::logic_error("find_split: stale table at node " + std::to_string(id));
    if (n.table.base != base)
      throw std::logic_error("find_split: table base differs from the mode");
  }

  // Root scan: first partition index with separator size <= k+1 and balance.
  const Node& r = t.node(t.root);
  const int b = static_cast<int>(r.bag.size());
  PartitionIndex chosen = 0;
  bool found = false;
  {
    std::vector<std::uint8_t> digits(r.bag.size(), 0);
    int wcount[3] = {0, 0, 0};
    wcount[0] = b;
    std::int64_t scanned = 0;
    for (PartitionIndex i = 0;; ++i) {
      ++scanned;
      const std::uint16_t s = r.table.entries[i];
      if (s != kBot && static_cast<int>(s) <= k + 1) {
        bool ok = true;
        if (mode == 4) {
          for (int j = 0; j < 3 && ok; ++j)
            if (wcount[j] + static_cast<int>(s) >= b) ok = false;
        } else {
          for (int j = 0; j < 2 && ok; ++j)
            if (3 * wcount[j] > 2 * b) ok = false;
        }
        // A usable root partition puts the bag into at least two parts. The
        // balance rules force this on their own whenever the round width is in
        // the sanctioned range for the mode; checking it explicitly keeps
        // forced-mode runs from selecting an index that splits nothing.
        if (ok) {
          int hit = 0;
          for (int j = 0; j < 3; ++j)
            if (wcount[j] > 0) ++hit;
          ok = hit >= 2;
        }
        if (ok) {
          chosen = i;
          found = true;
          break;
        }
      }
      int p = 0;
      const int nd = b;
      for (; p < nd; ++p) {
        const std::uint8_t od = digits[static_cast<std::size_t>(p)];
        const std::uint8_t nd2 = (od + 1 == base) ? 0 : od + 1;
        if (od != sep) --wcount[od];
        if (nd2 != sep) ++wcount[nd2];
        digits[static_cast<std::size_t>(p)] = nd2;
        if (nd2 != 0) break;
      }
      if (p == nd) break;
    }
    if (stats) stats->entries_visited += scanned;
  }
  if (!found) return std::nullopt;

  // Top-down selection of good partitions below the chosen root partition.
  SplitAssignment out;
  out.parts.assign(static_cast<std::size_t>(t.max_bag_vertex) + 1, PartLabel::kW1);
  out.a.assign(t.nodes.size(), 0);

  const auto label_bag = [&](const std::vector<VertexId>& bag, PartitionIndex idx) {
    std::uint8_t mask = 0;
    for (VertexId v : bag) {
      const int d = static_cast<int>(idx % base);
      idx /= base;
      out.parts[static_cast<std::size_t>(v)] = digit_label(d, base);
      if (d != sep) mask = static_cast<std::uint8_t>(mask | (1u << d));
    }
    return mask;
  };

  struct Frame {
    int node;
    PartitionIndex pidx;
  };
  std::vector<Frame> stack;
  out.a[static_cast<std::size_t>(t.root)] = label_bag(r.bag, chosen);
  stack.push_back({t.root, chosen});

  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    const Node& x = t.node(f.node);
    for (int z : x.children) {
      const Node& zn = t.node(z);
      // Induced index and part mask on the intersection child's bag.
      PartitionIndex ind = 0;
      std::uint8_t zmask = 0;
      {
        std::size_t zi = 0;
        PartitionIndex rem = f.pidx;
        for (std::size_t p = 0; p < x.bag.size() && zi < zn.bag.size(); ++p) {
          const int d = static_cast<int>(rem % base);
          if (x.bag[p] == zn.bag[zi]) {
            ind += static_cast<PartitionIndex>(d) * pow_u64(base, static_cast<unsigned>(zi));
            if (d != sep) zmask = static_cast<std::uint8_t>(zmask | (1u << d));
            ++zi;
          }
          rem /= base;
        }
        if (zi != zn.bag.size())
          throw std::logic_error("find_split: intersection bag escapes its parent");
      }
      if (popcount8(zmask) >= 2) {
        out.a[static_cast<std::size_t>(z)] = zmask;
        for (int y : zn.children) {
          const Node& yn = t.node(y);
          // Embed the intersection partition into the child bag; the home
          // vertex position stays free.
          PartitionIndex embed = 0;
          int vpos = -1;
          {
            std::size_t zi = 0;
            PartitionIndex rem = ind;
            for (std::size_t p = 0; p < yn.bag.size(); ++p) {
              if (zi < zn.bag.size() && yn.bag[p] == zn.bag[zi]) {
                embed += (rem % base) * pow_u64(base, static_cast<unsigned>(p));
                rem /= base;
                ++zi;
              } else {
                if (vpos != -1)
                  throw std::logic_error("find_split: child introduces two vertices");
                vpos = static_cast<int>(p);
              }
            }
            if (vpos == -1)
              throw std::logic_error("find_split: homeless child during descent");
          }
          const std::uint64_t pw = pow_u64(base, static_cast<unsigned>(vpos));
          int best_d = -1;
          std::uint16_t best_s = kBot;
          for (int d = 0; d < base; ++d) {
            // Placing the home vertex in a part absent from the parent bag
            // would grow the part set downward, breaking the a-set nesting
            // invariant; merging such a part into any part present in the
            // parent bag never increases the size, so restricting the
            // candidates keeps the minimum intact.
            if (d != sep && !(zmask & (1u << d))) continue;
            const std::uint16_t s = yn.table.entries[embed + static_cast<PartitionIndex>(d) * pw];
            if (stats) ++stats->entries_visited;
            if (s == kBot) continue;
            // Minimal size, then prefer the separator (larger |X|), then the
            // smallest digit = lexicographically smallest label string.
            const bool better =
                s < best_s ||
                (s == best_s && best_d != sep && (d == sep || d < best_d));
            if (best_d == -1 || better) {
              best_d = d;
              best_s = s;
            }
          }
          if (best_d == -1)
            throw std::logic_error("find_split: no legal child partition");
          const VertexId v = yn.bag[static_cast<std::size_t>(vpos)];
          out.parts[static_cast<std::size_t>(v)] = digit_label(best_d, base);
          // d = sep or d already in zmask, so the child part set equals the
          // parent part set.
          out.a[static_cast<std::size_t>(y)] = zmask;
          stack.push_back({y, embed + static_cast<PartitionIndex>(best_d) * pw});
        }
      } else {
        // Frontier: the subtree moves whole into one component, so only the
        // frontier node itself needs an a-set here. The nodes and vertices
        // strictly below it keep their lazy defaults; extend_assignment
        // completes them when a whole-graph view is wanted. Labeling the
        // frontier eagerly would make every selection cost a full subtree
        // walk, which the apply step never reads.
        int j;
        if (zmask != 0) {
          j = lowest_bit(zmask);
        } else {
          j = lowest_bit(out.a[static_cast<std::size_t>(f.node)]);
          if (stats) ++stats->xp_parent_bag_events;
        }
        out.a[static_cast<std::size_t>(z)] = static_cast<std::uint8_t>(1u << j);
      }
    }
  }
  return out;
}

std::int64_t merge(TreeDecomposition& t, int x, int y, SplitStats* stats) {
  if (!t.is_alive(x) || !t.is_alive(y))
    throw std::invalid_argument("merge of dead nodes");
  const int z = t.node(y).parent;
  if (z == -1 || t.node(z).parent != x)
    throw std::invalid_argument("merge: y must be a grandchild of x");
  const std::vector<VertexId>& xb = t.node(x).bag;
  const std::vector<VertexId>& yb = t.node(y).bag;
  if (!std::includes(xb.begin(), xb.end(), yb.begin(), yb.end()))
    throw std::invalid_argument("merge: child bag not contained in grandparent bag");
  if (t.node(z).bag != yb)
    throw std::logic_error("merge: homeless child with a strictly smaller parent bag");

  std::int64_t visited = 0;
  const std::vector<int> ykids = t.node(y).children;
  for (int zc : ykids) {
    t.unlink(zc);
    int same = -1;
    for (int c : t.node(x).children)
      if (t.node(c).kind == NodeKind::kIntersection && t.node(c).bag == t.node(zc).bag) {
        same = c;
        break;
      }
    if (same == -1) {
      t.link(x, zc);
      continue;
    }
    const std::vector<int> mains = t.node(zc).children;
    for (int m : mains) {
      t.unlink(m);
      t.link(same, m);
    }
    visited += add_child(t.node(same).table, t.node(zc).table);  // equal bags
    touch(t, same);
    if (stats) {
      ++stats->tables_fused;
      ++stats->table_passes;
    }
    t.kill(zc);
  }
  t.unlink(y);
  if (t.node(z).children.empty()) {
    t.unlink(z);
    t.kill(z);
  } else {
    visited += subtract_child(t.node(z).table, t.node(y).table);
    touch(t, z);
    if (stats) ++stats->table_passes;
  }
  t.kill(y);
  touch(t, x);  // children changed; the table is bit-identical by construction
  if (stats) {
    ++stats->merges;
    if (stats->audit) stats->audit("merge", t);
  }
  return visited;
}

std::int64_t rotate(TreeDecomposition& t, const Graph& g, int y,
                    SplitStats* stats) {
  const int r = t.root;
  if (!t.is_alive(y) || t.node(y).kind != NodeKind::kMain)
    throw std::invalid_argument("rotate target must be a Main node");
  const int z = t.node(y).parent;
  if (z == -1 || t.node(z).parent != r)
    throw std::invalid_argument("rotate target must be a grandchild of the root");
  if (t.node(z).bag == t.node(y).bag)
    throw std::invalid_argument("rotate target is homeless");

  std::int64_t visited = 0;
  // Remove the rotated edge contributions while the old tables are current.
  visited += subtract_child(t.node(r).table, t.node(z).table);
  visited += subtract_child(t.node(z).table, t.node(y).table);
  if (stats) stats->table_passes += 2;
  t.unlink(y);
  t.unlink(z);
  t.root = y;
  touch(t, r);

  // Hang the old root below z, with a forget chain when it introduces more
  // than one vertex relative to the intersection bag.
  const int top =
      chain_build(t, g, t.node(z).bag, r, t.node(r).table.base, visited, stats);
  visited += add_child(t.node(z).table, t.node(top).table);
  t.link(z, top);
  touch(t, z);

  // Attach z under the new root, fusing with an equal-bag child if present.
  visited += add_child(t.node(y).table, t.node(z).table);
  if (stats) stats->table_passes += 2;
  int same = -1;
  for (int c : t.node(y).children)
    if (t.node(c).kind == NodeKind::kIntersection && t.node(c).bag == t.node(z).bag) {
      same = c;
      break;
    }
  if (same == -1) {
    t.link(y, z);
  } else {
    const std::vector<int> mains = t.node(z).children;
    for (int m : mains) {
      t.unlink(m);
      t.link(same, m);
    }
    visited += add_child(t.node(same).table, t.node(z).table);
    touch(t, same);
    if (stats) {
      ++stats->tables_fused;
      ++stats->table_passes;
    }
    t.kill(z);
  }
  touch(t, y);
  if (stats) ++stats->rotations;

  // A root bag contained in the new root's bag merges away entirely.
  if (t.is_alive(r)) {
    const std::vector<VertexId>& rb = t.node(r).bag;
    const std::vector<VertexId>& yb = t.node(y).bag;
    if (std::includes(yb.begin(), yb.end(), rb.begin(), rb.end()))
      visited += merge(t, y, r, stats);
  }
  if (stats && stats->audit) stats->audit("rotate", t);
  return visited;
}

std::int64_t move_to_root(TreeDecomposition& t, const Graph& g, int x,
                          SplitStats* stats) {
  if (!t.is_alive(x) || t.node(x).kind != NodeKind::kMain)
    throw std::invalid_argument("move_to_root target must be a Main node");
  std::int64_t visited = 0;
  while (t.root != x) {
    std::vector<int> path;
    for (int cur = x; cur != -1; cur = t.node(cur).parent) path.push_back(cur);
    if (path.back() != t.root)
      throw std::invalid_argument("move_to_root target detached from the root");
    // path = x, ..., grandchild, intersection, root.
    visited += rotate(t, g, path[path.size() - 3], stats);
  }
  if (stats && stats->audit) stats->audit("move_to_root", t);
  return visited;
}

std::int64_t apply_split(TreeDecomposition& t, const Graph& g,
                         const SplitAssignment& s, int k, SplitStats* stats) {
  if (!t.is_alive(t.root)) throw std::invalid_argument("decomposition has no root");
  if (static_cast<VertexId>(s.parts.size()) != g.num_vertices())
    throw std::invalid_argument("assignment does not cover the graph");
  if (s.a.size() < t.nodes.size())
    throw std::invalid_argument("assignment is stale for this decomposition");
  const int base = t.node(t.root).table.base;
  const int sep = base - 1;
  if (!is_editable(t, t.root, s))
    throw std::invalid_argument("assignment does not split the root");

  int pre_max = 0;
  for (int id = 0; id < static_cast<int>(t.nodes.size()); ++id)
    if (t.is_alive(id))
      pre_max = std::max(pre_max, static_cast<int>(t.node(id).bag.size()));

  std::vector<VertexId> sepset;
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    if (s.parts[static_cast<std::size_t>(v)] == PartLabel::kX) sepset.push_back(v);
  if (sepset.empty())
    throw std::invalid_argument("empty separator (graph is disconnected)");
  if (static_cast<int>(sepset.size()) > k + 1)
    throw std::invalid_argument("separator exceeds k+1");

  std::int64_t visited = 0;
  const int first_new = static_cast<int>(t.nodes.size());
  std::vector<int> old_region;                 // editable Main/Intersection ids
  std::vector<std::pair<int, int>> moves;      // kept frontier -> new parent

  // Builds the copy of editable Main node x for component part `d` and
  // returns its id. Reads the old tree, creates new nodes, never unlinks.
  std::function<int(int, int)> build = [&](int x, int d) -> int {
    const std::vector<VertexId> xbag = t.node(x).bag;
    const std::vector<int> xkids = t.node(x).children;

    // Masked bag: part-d vertices plus bag separator vertices.
    std::vector<VertexId> q;
    for (VertexId v : xbag) {
      const PartLabel l = s.parts[static_cast<std::size_t>(v)];
      if (l == PartLabel::kX || label_digit(l, base) == d) q.push_back(v);
    }
    DpTable table = masked_copy(t.node(x).table, q, visited);
    if (stats) ++stats->table_passes;

    std::vector<int> kept;
    std::vector<int> forked;
    for (int z : xkids) {
      const std::uint8_t zmask = bag_part_mask(t.node(z).bag, s.parts);
      const std::uint8_t az = s.a[static_cast<std::size_t>(z)];
      if (az == 0) throw std::invalid_argument("assignment misses a node");
      if (popcount8(zmask) >= 2) {
        if (az != zmask)
          throw std::invalid_argument("a-set of an editable node is not its part set");
        forked.push_back(z);
        visited += combine_pinned(table, t.node(z).table, -1);
        if (stats) ++stats->table_passes;
        continue;
      }
      if (popcount8(az) != 1)
        throw std::invalid_argument("frontier node with a non-singleton a-set");
      if (t.node(z).kind != NodeKind::kIntersection)
        throw std::logic_error("first non-editable node on a path is not an intersection");
      if (az == (1u << d)) {
        kept.push_back(z);
      } else {
        visited += combine_pinned(table, t.node(z).table, -1);
        if (stats) ++stats->table_passes;
      }
    }

    // Recurse into the editable children that carry this part.
    struct ForkDraft {
      std::vector<VertexId> bag;
      std::vector<int> mains;
    };
    std::vector<ForkDraft> drafts;
    std::vector<VertexId> ext;  // separator vertices required in this bag
    for (VertexId v : q)
      if (s.parts[static_cast<std::size_t>(v)] == PartLabel::kX) ext.push_back(v);
    for (int z : forked) {
      const std::uint8_t az = s.a[static_cast<std::size_t>(z)];
      if (!(az & (1u << d))) continue;  // no part-d vertices below z
      std::vector<VertexId> zpart;  // part-d vertices of the intersection bag
      for (VertexId v : t.node(z).bag)
        if (s.parts[static_cast<std::size_t>(v)] != PartLabel::kX &&
            label_digit(s.parts[static_cast<std::size_t>(v)], base) == d)
          zpart.push_back(v);
      const std::vector<int> mains = t.node(z).children;
      for (int y : mains) {
        if (bag_part_mask(t.node(y).bag, s.parts) & ~az)
          throw std::invalid_argument("bag parts grow past the parent a-set");
        const int yid = build(y, d);
        std::vector<VertexId> ysep;
        for (VertexId v : t.node(yid).bag)
          if (s.parts[static_cast<std::size_t>(v)] == PartLabel::kX) ysep.push_back(v);
        std::vector<VertexId> fork_bag = set_union_sorted(zpart, ysep);
        ext = set_union_sorted(ext, ysep);
        bool placed = false;
        for (ForkDraft& fd : drafts)
          if (fd.bag == fork_bag) {
            fd.mains.push_back(yid);
            placed = true;
            break;
          }
        if (!placed) drafts.push_back({std::move(fork_bag), {yid}});
      }
    }

    // Extend the bag by separator vertices occurring below, then re-add the
    // editable children as freshly built forks.
    for (VertexId v : ext)
      if (!sorted_contains(q, v)) {
        visited += extend_bag_vertex(table, g, v);
        if (stats) ++stats->table_passes;
      }
    if (static_cast<int>(table.bag.size()) > pre_max)
      throw std::logic_error("split produced a bag above the pre-split maximum");

    std::vector<std::pair<int, DpTable>> fork_nodes;  // (existing kept id or -1, table)
    std::vector<ForkDraft> fork_meta;
    for (ForkDraft& fd : drafts) {
      DpTable ft = init_table(g, fd.bag, base);
      visited += static_cast<std::int64_t>(ft.entries.size());
      for (int yid : fd.mains) visited += add_child(ft, t.node(yid).table);
      // Contribution to the copy's table is additive even when fusing.
      visited += add_child_case2(table, ft);
      if (stats) stats->table_passes += 2 + static_cast<std::int64_t>(fd.mains.size());
      int host = -1;
      for (int z : kept)
        if (t.node(z).bag == fd.bag) {
          host = z;
          break;
        }
      fork_nodes.push_back({host, std::move(ft)});
      fork_meta.push_back(std::move(fd));
    }

    const int id = t.add_node(table.bag, NodeKind::kMain);
    t.node(id).table = std::move(table);
    touch(t, id);
    for (std::size_t fi = 0; fi < fork_nodes.size(); ++fi) {
      const int host = fork_nodes[fi].first;
      if (host == -1) {
        const int fork = t.add_node(fork_meta[fi].bag, NodeKind::kIntersection);
        t.node(fork).table = std::move(fork_nodes[fi].second);
        touch(t, fork);
        t.link(id, fork);
        for (int yid : fork_meta[fi].mains) t.link(fork, yid);
      } else {
        // Fuse the fresh fork into the kept frontier child with an equal bag.
        visited += add_child(t.node(host).table, fork_nodes[fi].second);
        touch(t, host);
        if (stats) {
          ++stats->tables_fused;
          ++stats->table_passes;
        }
        for (int yid : fork_meta[fi].mains) t.link(host, yid);
      }
    }
    for (int z : kept) moves.push_back({z, id});
    return id;
  };

  // Collect the editable region before any mutation.
  {
    std::vector<int> work{t.root};
    while (!work.empty()) {
      const int x = work.back();
      work.pop_back();
      old_region.push_back(x);
      for (int z : t.node(x).children) {
        if (!is_editable(t, z, s)) continue;
        old_region.push_back(z);
        for (int y : t.node(z).children) work.push_back(y);
      }
    }
  }

  // Build the per-part root copies.
  const int old_root = t.root;
  const std::uint8_t rmask = bag_part_mask(t.node(old_root).bag, s.parts);
  std::vector<int> root_copies;
  for (int d = 0; d < base - 1; ++d)
    if (rmask & (1u << d)) root_copies.push_back(build(old_root, d));

  // New root over the full separator, one shared intersection below it, and
  // a forget chain down to each root copy.
  DpTable zt = init_table(g, sepset, base);
  visited += static_cast<std::int64_t>(zt.entries.size());
  if (stats) ++stats->table_passes;
  std::vector<int> tops;
  for (int rc : root_copies) {
    const int top = chain_build(t, g, sepset, rc, base, visited, stats);
    visited += add_child(zt, t.node(top).table);
    if (stats) ++stats->table_passes;
    tops.push_back(top);
  }
  DpTable rt = init_table(g, sepset, base);
  visited += static_cast<std::int64_t>(rt.entries.size());
  visited += add_child(rt, zt);
  if (stats) stats->table_passes += 2;
  const int zprime = t.add_node(sepset, NodeKind::kIntersection);
  t.node(zprime).table = std::move(zt);
  touch(t, zprime);
  const int rprime = t.add_node(sepset, NodeKind::kMain);
  t.node(rprime).table = std::move(rt);
  touch(t, rprime);
  t.link(rprime, zprime);
  for (int top : tops) t.link(zprime, top);
  t.root = rprime;

  // Re-hang the kept frontiers, then dismantle the old editable region.
  for (const auto& [z, parent] : moves) {
    t.unlink(z);
    t.link(parent, z);
  }
  for (int id : old_region) t.unlink(id);
  for (int id : old_region) {
    if (!t.node(id).children.empty())
      throw std::logic_error("old editable region not fully dismantled");
    t.kill(id);
  }

  // Homeless copies merge with their grandparents, bottom-up. Only nodes
  // created by this split can be homeless: a surviving Main keeps its bag and
  // its parent intersection, and the separator property rules out any new
  // containment against a changed grandparent. Fresh ids ascend from children
  // to parents, so a forward scan is the bottom-up order.
  for (int y = first_new; y < static_cast<int>(t.nodes.size()); ++y) {
    if (!t.is_alive(y) || t.node(y).kind != NodeKind::kMain) continue;
    const int z = t.node(y).parent;
    if (z == -1) continue;
    const int x = t.node(z).parent;
    if (x == -1) continue;
    const std::vector<VertexId>& yb = t.node(y).bag;
    const std::vector<VertexId>& xb = t.node(x).bag;
    if (std::includes(xb.begin(), xb.end(), yb.begin(), yb.end()))
      visited += merge(t, x, y, stats);
  }
  if (stats && stats->audit) stats->audit("apply_split", t);
  return visited;
}

int dfs_resume_point(const TreeDecomposition& t, const DfsState&) {
  int best_pre = std::numeric_limits<int>::max();
  int best_unvisited = std::numeric_limits<int>::max();
  for (int id = 0; id < static_cast<int>(t.nodes.size()); ++id) {
    if (!t.is_alive(id)) continue;
    const Node& n = t.node(id);
    if (n.kind != NodeKind::kMain) continue;
    if (n.status == DfsStatus::kPreVisited)
      best_pre = std::min(best_pre, id);
    else if (n.status == DfsStatus::kUnvisited)
      best_unvisited = std::min(best_unvisited, id);
  }
  if (best_pre != std::numeric_limits<int>::max()) return best_pre;
  if (best_unvisited != std::numeric_limits<int>::max()) return best_unvisited;
  return -1;
}

}  // namespace twsplit
