#include "twsplit/decomposition.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace twsplit {

int TreeDecomposition::add_node(std::vector<VertexId> bag, NodeKind kind) {
  if (!std::is_sorted(bag.begin(), bag.end()) ||
      std::adjacent_find(bag.begin(), bag.end()) != bag.end())
    throw std::invalid_argument("bag must be sorted and unique");
  Node n;
  n.kind = kind;
  if (!bag.empty()) max_bag_vertex = std::max(max_bag_vertex, bag.back());
  n.bag = std::move(bag);
  const int id = static_cast<int>(nodes.size());
  n.alive_next = alive_head_;
  nodes.push_back(std::move(n));
  if (alive_head_ != -1) node(alive_head_).alive_prev = id;
  alive_head_ = id;
  return id;
}

void TreeDecomposition::link(int parent, int child) {
  if (!is_alive(parent) || !is_alive(child))
    throw std::invalid_argument("link of dead node");
  if (node(child).parent != -1) throw std::invalid_argument("child not detached");
  node(child).parent = parent;
  node(parent).children.push_back(child);
}

void TreeDecomposition::unlink(int child) {
  if (!is_alive(child)) throw std::invalid_argument("unlink of dead node");
  const int p = node(child).parent;
  if (p == -1) return;
  auto& siblings = node(p).children;
  siblings.erase(std::find(siblings.begin(), siblings.end(), child));
  node(child).parent = -1;
}

void TreeDecomposition::kill(int id) {
  if (!is_alive(id)) throw std::invalid_argument("kill of dead node");
  Node& n = node(id);
  if (n.parent != -1 || !n.children.empty())
    throw std::invalid_argument("kill of linked node");
  n.alive = false;
  n.bag.clear();
  n.bag.shrink_to_fit();
  n.table = DpTable{};
  if (n.alive_prev != -1) node(n.alive_prev).alive_next = n.alive_next;
  else alive_head_ = n.alive_next;
  if (n.alive_next != -1) node(n.alive_next).alive_prev = n.alive_prev;
  n.alive_next = -1;
  n.alive_prev = -1;
}

int TreeDecomposition::alive_count() const {
  int c = 0;
  for (int id = first_alive(); id != -1; id = next_alive(id)) ++c;
  return c;
}

std::vector<int> TreeDecomposition::alive_ids() const {
  std::vector<int> ids;
  ids.reserve(nodes.size());
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i)
    if (nodes[static_cast<std::size_t>(i)].alive) ids.push_back(i);
  return ids;
}

int TreeDecomposition::width() const {
  int maxbag = 0;
  for (const Node& n : nodes)
    if (n.alive) maxbag = std::max(maxbag, static_cast<int>(n.bag.size()));
  return maxbag - 1;
}

std::string ValidationReport::summary() const {
  if (violations.empty()) return "valid";
  std::string s = violations.front();
  if (violations.size() > 1)
    s += " (+" + std::to_string(violations.size() - 1) + " more)";
  return s;
}

namespace {

std::string vertex_str(VertexId v) { return std::to_string(v); }

// Tree-structure sanity shared by both validators. Returns BFS order from the
// root when the structure is sound enough to traverse, empty otherwise.
std::vector<int> check_structure(const TreeDecomposition& t,
                                 ValidationReport& report) {
  if (!t.is_alive(t.root)) {
    report.violations.push_back("root is not an alive node");
    return {};
  }
  for (int id : t.alive_ids()) {
    const Node& n = t.node(id);
    if (!std::is_sorted(n.bag.begin(), n.bag.end()) ||
        std::adjacent_find(n.bag.begin(), n.bag.end()) != n.bag.end())
      report.violations.push_back("node " + std::to_string(id) +
                                  ": bag not sorted/unique");
    if (n.parent != -1) {
      if (!t.is_alive(n.parent)) {
        report.violations.push_back("node " + std::to_string(id) +
                                    ": dead parent");
        return {};
      }
      const auto& sib = t.node(n.parent).children;
      if (std::count(sib.begin(), sib.end(), id) != 1) {
        report.violations.push_back("node " + std::to_string(id) +
                                    ": parent/children links inconsistent");
        return {};
      }
    } else if (id != t.root) {
      report.violations.push_back("node " + std::to_string(id) +
                                  ": parentless non-root");
    }
    for (int c : n.children) {
      if (!t.is_alive(c) || t.node(c).parent != id) {
        report.violations.push_back("node " + std::to_string(id) +
                                    ": child link inconsistent");
        return {};
      }
    }
  }
  std::vector<int> order;
  std::vector<char> seen(t.nodes.size(), 0);
  order.push_back(t.root);
  seen[static_cast<std::size_t>(t.root)] = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (int c : t.node(order[i]).children) {
      if (seen[static_cast<std::size_t>(c)]) {
        report.violations.push_back("cycle through node " + std::to_string(c));
        return {};
      }
      seen[static_cast<std::size_t>(c)] = 1;
      order.push_back(c);
    }
  }
  for (int id : t.alive_ids())
    if (!seen[static_cast<std::size_t>(id)])
      report.violations.push_back("node " + std::to_string(id) +
                                  " unreachable from root");
  return order;
}

}  // namespace

ValidationReport validate_td(const Graph& g, const TreeDecomposition& t) {
  ValidationReport report;
  std::vector<int> order = check_structure(t, report);
  if (!report.valid()) return report;

  const VertexId n = g.num_vertices();
  std::vector<std::vector<int>> holders(static_cast<std::size_t>(n));
  for (int id : order) {
    for (VertexId v : t.node(id).bag) {
      if (v < 0 || v >= n) {
        report.violations.push_back("node " + std::to_string(id) +
                                    ": bag vertex " + vertex_str(v) +
                                    " out of range");
        return report;
      }
      holders[static_cast<std::size_t>(v)].push_back(id);
    }
  }
  for (VertexId v = 0; v < n; ++v)
    if (holders[static_cast<std::size_t>(v)].empty())
      report.violations.push_back("vertex " + vertex_str(v) + " in no bag");

  // Edge coverage: stamp nodes holding u, scan holders of v.
  std::vector<int> stamp(t.nodes.size(), -1);
  for (VertexId u = 0; u < n; ++u) {
    for (int id : holders[static_cast<std::size_t>(u)]) stamp[static_cast<std::size_t>(id)] = u;
    for (VertexId v : g.neighbors(u)) {
      if (v < u) continue;
      bool covered = false;
      for (int id : holders[static_cast<std::size_t>(v)])
        if (stamp[static_cast<std::size_t>(id)] == u) {
          covered = true;
          break;
        }
      if (!covered)
        report.violations.push_back("edge " + vertex_str(u) + "-" +
                                    vertex_str(v) + " covered by no bag");
    }
  }

  // Connectivity: the nodes holding v must form one connected subtree. Since
  // every holder set is checked against the parent relation, it suffices that
  // each non-topmost holder's parent also holds v.
  std::vector<char> holds(t.nodes.size(), 0);
  for (VertexId v = 0; v < n; ++v) {
    const auto& hs = holders[static_cast<std::size_t>(v)];
    if (hs.size() <= 1) continue;
    for (int id : hs) holds[static_cast<std::size_t>(id)] = 1;
    int topmost = -1;
    for (int id : hs) {
      const int p = t.node(id).parent;
      if (p == -1 || !holds[static_cast<std::size_t>(p)]) {
        if (topmost == -1) {
          topmost = id;
        } else {
          report.violations.push_back(
              "vertex " + vertex_str(v) + ": bags at nodes " +
              std::to_string(topmost) + " and " + std::to_string(id) +
              " are not connected");
        }
      }
    }
    for (int id : hs) holds[static_cast<std::size_t>(id)] = 0;
  }
  return report;
}

ValidationReport validate_grouped(const TreeDecomposition& t) {
  ValidationReport report;
  std::vector<int> order = check_structure(t, report);
  if (!report.valid()) return report;

  const Node& r = t.node(t.root);
  if (r.kind != NodeKind::kMain)
    report.violations.push_back("root is not a Main node");
  if (r.bag.empty()) report.violations.push_back("root bag is empty");

  for (int id : order) {
    const Node& x = t.node(id);
    if (x.children.empty() && x.kind != NodeKind::kMain)
      report.violations.push_back("leaf " + std::to_string(id) +
                                  " is not a Main node");
    if (x.parent != -1 && t.node(x.parent).kind == x.kind)
      report.violations.push_back("node " + std::to_string(id) +
                                  ": kind equals parent kind");
    if (x.kind == NodeKind::kIntersection) {
      if (x.parent == -1) continue;
      const Node& p = t.node(x.parent);
      if (!std::includes(p.bag.begin(), p.bag.end(), x.bag.begin(), x.bag.end()))
        report.violations.push_back("intersection " + std::to_string(id) +
                                    ": bag not contained in parent bag");
    } else if (x.parent != -1) {
      const Node& z = t.node(x.parent);
      const int new_vertices =
          static_cast<int>(set_difference_sorted(x.bag, z.bag).size());
      if (new_vertices != 1)
        report.violations.push_back("main " + std::to_string(id) + ": home to " +
                                    std::to_string(new_vertices) +
                                    " vertices, expected 1");
      if (z.parent != -1) {
        const Node& gp = t.node(z.parent);
        if (z.bag != set_intersect_sorted(gp.bag, x.bag))
          report.violations.push_back(
              "main " + std::to_string(id) +
              ": grandparent intersection differs from parent bag");
      }
    }
    if (x.kind == NodeKind::kMain && !x.children.empty()) {
      std::set<std::vector<VertexId>> bags;
      for (int c : x.children)
        if (!bags.insert(t.node(c).bag).second)
          report.violations.push_back("node " + std::to_string(id) +
                                      ": duplicate intersection child bags");
      if (x.bag.size() < 31) {
        const std::uint64_t cap = (1ull << x.bag.size()) - 1;
        if (x.children.size() > cap)
          report.violations.push_back("node " + std::to_string(id) +
                                      ": too many children");
      }
    }
  }
  return report;
}

TreeDecomposition make_unique_home(const TreeDecomposition& t) {
  TreeDecomposition out = t;

  // Phase 1: delete nodes whose bag is contained in the parent's.
  std::deque<int> work;
  for (int id : out.alive_ids()) work.push_back(id);
  while (!work.empty()) {
    const int y = work.front();
    work.pop_front();
    if (!out.is_alive(y) || y == out.root) continue;
    const int x = out.node(y).parent;
    const auto& pb = out.node(x).bag;
    const auto& yb = out.node(y).bag;
    if (!std::includes(pb.begin(), pb.end(), yb.begin(), yb.end())) continue;
    const std::vector<int> kids = out.node(y).children;
    for (int c : kids) {
      out.unlink(c);
      out.link(x, c);
      work.push_back(c);
    }
    out.unlink(y);
    out.kill(y);
  }

  // Phase 2: forget chains so each non-root node introduces one vertex.
  for (int y : out.alive_ids()) {
    if (y == out.root) continue;
    const int x = out.node(y).parent;
    const std::vector<VertexId> fresh =
        set_difference_sorted(out.node(y).bag, out.node(x).bag);
    if (fresh.size() <= 1) continue;
    std::vector<VertexId> bag =
        set_intersect_sorted(out.node(y).bag, out.node(x).bag);
    out.unlink(y);
    int prev = x;
    for (std::size_t i = 0; i + 1 < fresh.size(); ++i) {
      bag.insert(std::lower_bound(bag.begin(), bag.end(), fresh[i]), fresh[i]);
      const int mid = out.add_node(bag);
      out.link(prev, mid);
      prev = mid;
    }
    out.link(prev, y);
  }
  return out;
}

TreeDecomposition make_grouped(const TreeDecomposition& t) {
  TreeDecomposition out = make_unique_home(t);
  while (out.is_alive(out.root) && out.node(out.root).bag.empty() &&
         !out.node(out.root).children.empty()) {
    reroot(out, out.node(out.root).children.front());
    out = make_unique_home(out);
  }

  const std::vector<int> mains = out.alive_ids();
  for (int id : mains) out.node(id).kind = NodeKind::kMain;

  struct TrieNode {
    int child[2] = {-1, -1};
    int leaf = -1;
  };
  for (int x : mains) {
    const std::vector<int> kids = out.node(x).children;
    if (kids.empty()) continue;
    const std::vector<VertexId> xb = out.node(x).bag;
    std::vector<TrieNode> trie(1);
    for (int y : kids) {
      const std::vector<VertexId> key = set_intersect_sorted(xb, out.node(y).bag);
      if (key.empty())
        throw std::invalid_argument(
            "make_grouped: empty intersection bag (disconnected graph)");
      int cur = 0;
      std::size_t ki = 0;
      for (std::size_t pos = 0; pos < xb.size(); ++pos) {
        int bit = 0;
        if (ki < key.size() && key[ki] == xb[pos]) {
          bit = 1;
          ++ki;
        }
        if (trie[static_cast<std::size_t>(cur)].child[bit] < 0) {
          trie[static_cast<std::size_t>(cur)].child[bit] =
              static_cast<int>(trie.size());
          trie.emplace_back();
        }
        cur = trie[static_cast<std::size_t>(cur)].child[bit];
      }
      int z = trie[static_cast<std::size_t>(cur)].leaf;
      if (z < 0) {
        z = out.add_node(key, NodeKind::kIntersection);
        out.link(x, z);
        trie[static_cast<std::size_t>(cur)].leaf = z;
      }
      out.unlink(y);
      out.link(z, y);
    }
  }
  return out;
}

std::vector<int> home_index(const TreeDecomposition& t) {
  VertexId maxv = -1;
  for (int id : t.alive_ids())
    if (!t.node(id).bag.empty()) maxv = std::max(maxv, t.node(id).bag.back());
  std::vector<int> home(static_cast<std::size_t>(maxv + 1), -1);
  for (int id : subtree_nodes(t, t.root))
    for (VertexId v : t.node(id).bag)
      if (home[static_cast<std::size_t>(v)] == -1)
        home[static_cast<std::size_t>(v)] = id;
  return home;
}

std::vector<int> subtree_nodes(const TreeDecomposition& t, int x) {
  std::vector<int> order;
  if (!t.is_alive(x)) return order;
  order.push_back(x);
  for (std::size_t i = 0; i < order.size(); ++i)
    for (int c : t.node(order[i]).children) order.push_back(c);
  return order;
}

std::vector<VertexId> subtree_vertices(const TreeDecomposition& t, int x) {
  std::vector<VertexId> vs;
  for (int id : subtree_nodes(t, x))
    vs.insert(vs.end(), t.node(id).bag.begin(), t.node(id).bag.end());
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

void reroot(TreeDecomposition& t, int new_root) {
  if (!t.is_alive(new_root)) throw std::invalid_argument("reroot to dead node");
  if (new_root == t.root) return;
  std::vector<int> path;
  for (int cur = new_root; cur != -1; cur = t.node(cur).parent)
    path.push_back(cur);
  if (path.back() != t.root)
    throw std::invalid_argument("reroot target not in tree");
  for (std::size_t i = 0; i + 1 < path.size(); ++i) t.unlink(path[i]);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) t.link(path[i], path[i + 1]);
  t.root = new_root;
}

TreeDecomposition single_bag_decomposition(const Graph& g) {
  TreeDecomposition t;
  std::vector<VertexId> bag(static_cast<std::size_t>(g.num_vertices()));
  for (VertexId v = 0; v < g.num_vertices(); ++v)
    bag[static_cast<std::size_t>(v)] = v;
  t.root = t.add_node(std::move(bag));
  return t;
}

TreeDecomposition td_from_elimination_order(const Graph& g,
                                            const std::vector<VertexId>& order) {
  const VertexId n = g.num_vertices();
  if (static_cast<VertexId>(order.size()) != n)
    throw std::invalid_argument("order must be a permutation of V");
  std::vector<int> pos(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    const VertexId v = order[static_cast<std::size_t>(i)];
    if (v < 0 || v >= n || pos[static_cast<std::size_t>(v)] != -1)
      throw std::invalid_argument("order must be a permutation of V");
    pos[static_cast<std::size_t>(v)] = i;
  }

  TreeDecomposition t;
  if (n == 0) return t;
  std::vector<std::set<VertexId>> live(static_cast<std::size_t>(n));
  for (VertexId v = 0; v < n; ++v)
    live[static_cast<std::size_t>(v)].insert(g.neighbors(v).begin(),
                                             g.neighbors(v).end());
  std::vector<VertexId> attach(static_cast<std::size_t>(n), -1);
  std::vector<int> id_of(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    const VertexId v = order[static_cast<std::size_t>(i)];
    auto& nbrs = live[static_cast<std::size_t>(v)];
    std::vector<VertexId> bag(nbrs.begin(), nbrs.end());
    bag.insert(std::lower_bound(bag.begin(), bag.end(), v), v);
    id_of[static_cast<std::size_t>(v)] = t.add_node(std::move(bag));
    for (VertexId a : nbrs) {
      if (attach[static_cast<std::size_t>(v)] == -1 ||
          pos[static_cast<std::size_t>(a)] <
              pos[static_cast<std::size_t>(attach[static_cast<std::size_t>(v)])])
        attach[static_cast<std::size_t>(v)] = a;
      live[static_cast<std::size_t>(a)].erase(v);
      for (VertexId b : nbrs)
        if (a != b) live[static_cast<std::size_t>(a)].insert(b);
    }
    nbrs.clear();
  }
  t.root = id_of[static_cast<std::size_t>(order.back())];
  for (int i = 0; i + 1 < static_cast<int>(order.size()); ++i) {
    const VertexId v = order[static_cast<std::size_t>(i)];
    VertexId w = attach[static_cast<std::size_t>(v)];
    if (w == -1) w = order[static_cast<std::size_t>(i) + 1];
    t.link(id_of[static_cast<std::size_t>(w)], id_of[static_cast<std::size_t>(v)]);
  }
  return t;
}

std::int64_t rebuild_all_tables(TreeDecomposition& t, const Graph& g, int base) {
  std::int64_t visited = 0;
  const std::vector<int> order = subtree_nodes(t, t.root);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node& x = t.node(*it);
    x.table = init_table(g, x.bag, base);
    visited += static_cast<std::int64_t>(x.table.entries.size());
    for (int c : x.children) visited += add_child(x.table, t.node(c).table);
    x.table_rev = x.structure_rev;
  }
  return visited;
}

namespace {

bool parse_ll(const std::string& tok, long long& out) {
  if (tok.empty()) return false;
  for (char ch : tok)
    if (ch < '0' || ch > '9') return false;
  try {
    out = std::stoll(tok);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

}  // namespace

TreeDecomposition parse_td(std::istream& in) {
  std::string line;
  int lineno = 0;
  long long nbags = -1, maxbag = -1, nverts = -1;
  std::vector<std::vector<VertexId>> bags;
  std::vector<char> declared;
  std::vector<std::pair<int, int>> edges;
  std::set<std::pair<int, int>> seen_edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream iss(line);
    std::vector<std::string> toks;
    std::string tok;
    while (iss >> tok) toks.push_back(tok);
    if (toks.empty() || toks[0] == "c") continue;
    if (toks[0] == "s") {
      if (nbags >= 0) throw ParseError(lineno, "duplicate 's' header");
      if (toks.size() != 5 || toks[1] != "td" || !parse_ll(toks[2], nbags) ||
          !parse_ll(toks[3], maxbag) || !parse_ll(toks[4], nverts))
        throw ParseError(lineno, "malformed header, expected 's td <N> <maxbag> <n>'");
      if (nbags < 1) throw ParseError(lineno, "decomposition needs at least one bag");
      bags.assign(static_cast<std::size_t>(nbags), {});
      declared.assign(static_cast<std::size_t>(nbags), 0);
      continue;
    }
    if (nbags < 0) throw ParseError(lineno, "content before 's td' header");
    if (toks[0] == "b") {
      long long idx;
      if (toks.size() < 2 || !parse_ll(toks[1], idx))
        throw ParseError(lineno, "malformed bag line");
      if (idx < 1 || idx > nbags)
        throw ParseError(lineno, "bag id out of range 1.." + std::to_string(nbags));
      if (declared[static_cast<std::size_t>(idx - 1)])
        throw ParseError(lineno, "duplicate bag " + std::to_string(idx));
      declared[static_cast<std::size_t>(idx - 1)] = 1;
      std::vector<VertexId>& bag = bags[static_cast<std::size_t>(idx - 1)];
      for (std::size_t i = 2; i < toks.size(); ++i) {
        long long v;
        if (!parse_ll(toks[i], v)) throw ParseError(lineno, "malformed bag vertex");
        if (v < 1 || v > nverts)
          throw ParseError(lineno, "bag vertex out of range 1.." + std::to_string(nverts));
        bag.push_back(static_cast<VertexId>(v - 1));
      }
      std::sort(bag.begin(), bag.end());
      if (std::adjacent_find(bag.begin(), bag.end()) != bag.end())
        throw ParseError(lineno, "duplicate vertex in bag " + std::to_string(idx));
      continue;
    }
    long long a, b;
    if (toks.size() != 2 || !parse_ll(toks[0], a) || !parse_ll(toks[1], b))
      throw ParseError(lineno, "malformed decomposition edge");
    if (a < 1 || a > nbags || b < 1 || b > nbags)
      throw ParseError(lineno, "decomposition edge endpoint out of range");
    if (a == b) throw ParseError(lineno, "decomposition self-loop");
    const int ia = static_cast<int>(std::min(a, b));
    const int ib = static_cast<int>(std::max(a, b));
    if (!seen_edges.insert({ia, ib}).second)
      throw ParseError(lineno, "duplicate decomposition edge");
    edges.emplace_back(static_cast<int>(a - 1), static_cast<int>(b - 1));
  }
  if (nbags < 0) throw ParseError(lineno, "missing 's td' header");
  for (long long i = 0; i < nbags; ++i)
    if (!declared[static_cast<std::size_t>(i)])
      throw ParseError(lineno, "bag " + std::to_string(i + 1) + " never declared");
  if (static_cast<long long>(edges.size()) != nbags - 1)
    throw ParseError(lineno, "expected " + std::to_string(nbags - 1) +
                                 " decomposition edges, found " +
                                 std::to_string(edges.size()));
  long long actual_max = 0;
  for (const auto& bag : bags)
    actual_max = std::max<long long>(actual_max, static_cast<long long>(bag.size()));
  if (actual_max != maxbag)
    throw ParseError(lineno, "header declares max bag size " +
                                 std::to_string(maxbag) + ", found " +
                                 std::to_string(actual_max));

  TreeDecomposition t;
  for (auto& bag : bags) t.add_node(std::move(bag));
  t.root = 0;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nbags));
  for (auto [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<char> seen(static_cast<std::size_t>(nbags), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : adj[static_cast<std::size_t>(u)]) {
      if (seen[static_cast<std::size_t>(v)]) continue;
      seen[static_cast<std::size_t>(v)] = 1;
      ++reached;
      t.link(u, v);
      stack.push_back(v);
    }
  }
  if (reached != nbags)
    throw ParseError(lineno, "decomposition tree is disconnected");
  return t;
}

TreeDecomposition parse_td_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_td(in);
}

void write_td(std::ostream& out, const TreeDecomposition& t, VertexId n) {
  const std::vector<int> ids = t.alive_ids();
  if (ids.empty()) throw std::invalid_argument("empty decomposition");
  std::vector<int> index(t.nodes.size(), 0);
  std::size_t maxbag = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    index[static_cast<std::size_t>(ids[i])] = static_cast<int>(i) + 1;
    maxbag = std::max(maxbag, t.node(ids[i]).bag.size());
  }
  out << "s td " << ids.size() << ' ' << maxbag << ' ' << n << '\n';
  for (int id : ids) {
    out << "b " << index[static_cast<std::size_t>(id)];
    for (VertexId v : t.node(id).bag) out << ' ' << v + 1;
    out << '\n';
  }
  for (int id : ids) {
    const int p = t.node(id).parent;
    if (p != -1)
      out << index[static_cast<std::size_t>(p)] << ' '
          << index[static_cast<std::size_t>(id)] << '\n';
  }
}

}  // namespace twsplit
