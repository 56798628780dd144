#include "twsplit/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <utility>

#include "twsplit/dp_table.hpp"

namespace twsplit {

int Rng::uniform_int(int lo, int hi) {
  if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
  const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return static_cast<int>(static_cast<std::int64_t>(lo) +
                          static_cast<std::int64_t>(x % range));
}

bool Rng::bernoulli(double p) {
  if (p <= 0.0) {
    next_u64();
    return false;
  }
  if (p >= 1.0) {
    next_u64();
    return true;
  }
  // 53 uniform bits -> [0,1) with exactly representable steps.
  const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  return u < p;
}

namespace {

GeneratedInstance make_instance(VertexId n, std::vector<Edge> edges) {
  GeneratedInstance out;
  out.graph = Graph(n, edges);
  return out;
}

GeneratedInstance generate_partial_ktree(const GeneratorSpec& spec) {
  const int n = spec.n;
  const int k = spec.k;
  if (k < 1 || n < k + 1)
    throw std::invalid_argument("partial-k-tree needs k >= 1 and n >= k+1");
  Rng rng(spec.seed);

  TreeDecomposition witness;
  std::vector<Edge> edges;
  std::vector<VertexId> clique(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) clique[static_cast<std::size_t>(i)] = i;
  witness.root = witness.add_node(clique);
  for (int a = 0; a <= k; ++a)
    for (int b = a + 1; b <= k; ++b) edges.push_back({a, b});

  for (VertexId v = k + 1; v < n; ++v) {
    const int host = rng.uniform_int(0, static_cast<int>(witness.nodes.size()) - 1);
    const std::vector<VertexId>& host_bag = witness.node(host).bag;
    const int drop = rng.uniform_int(0, k);
    std::vector<VertexId> bag;
    bag.reserve(static_cast<std::size_t>(k) + 1);
    for (int i = 0; i <= k; ++i)
      if (i != drop) bag.push_back(host_bag[static_cast<std::size_t>(i)]);
    for (VertexId c : bag) edges.push_back({c, v});
    bag.push_back(v);  // v is the largest vertex so far; bag stays sorted
    const int id = witness.add_node(std::move(bag));
    witness.link(host, id);
  }

  std::vector<Edge> kept;
  kept.reserve(edges.size());
  for (const Edge& e : edges)
    if (rng.bernoulli(spec.edge_keep)) kept.push_back(e);

  GeneratedInstance out = make_instance(n, std::move(kept));
  out.witness = std::move(witness);
  return out;
}

}  // namespace

GeneratedInstance generate(const GeneratorSpec& spec) {
  const int n = spec.n;
  if (spec.family == "partial-k-tree") return generate_partial_ktree(spec);
  if (spec.family == "path") {
    if (n < 1) throw std::invalid_argument("path needs n >= 1");
    std::vector<Edge> edges;
    for (VertexId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
    return make_instance(n, std::move(edges));
  }
  if (spec.family == "cycle") {
    if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
    std::vector<Edge> edges;
    for (VertexId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1});
    edges.push_back({0, n - 1});
    return make_instance(n, std::move(edges));
  }
  if (spec.family == "complete") {
    if (n < 1) throw std::invalid_argument("complete needs n >= 1");
    std::vector<Edge> edges;
    for (VertexId a = 0; a < n; ++a)
      for (VertexId b = a + 1; b < n; ++b) edges.push_back({a, b});
    return make_instance(n, std::move(edges));
  }
  if (spec.family == "grid") {
    const int rows = spec.n, cols = spec.k;
    if (rows < 1 || cols < 1) throw std::invalid_argument("grid needs n,k >= 1");
    std::vector<Edge> edges;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        if (c + 1 < cols) edges.push_back({id(r, c), id(r, c + 1)});
        if (r + 1 < rows) edges.push_back({id(r, c), id(r + 1, c)});
      }
    return make_instance(rows * cols, std::move(edges));
  }
  if (spec.family == "tree") {
    if (n < 1) throw std::invalid_argument("tree needs n >= 1");
    Rng rng(spec.seed);
    std::vector<Edge> edges;
    for (VertexId v = 1; v < n; ++v)
      edges.push_back({rng.uniform_int(0, v - 1), v});
    return make_instance(n, std::move(edges));
  }
  throw std::invalid_argument("unknown generator family: " + spec.family);
}

int exact_treewidth(const Graph& g) {
  const int n = g.num_vertices();
  if (n > 20) throw std::invalid_argument("exact_treewidth: n > 20");
  if (n == 0) return -1;
  std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
  for (VertexId v = 0; v < n; ++v)
    for (VertexId w : g.neighbors(v)) adj[static_cast<std::size_t>(v)] |= 1u << w;

  const std::uint32_t full = (n == 32) ? ~0u : (1u << n) - 1;
  std::vector<std::uint8_t> f(static_cast<std::size_t>(full) + 1, 0);
  for (std::uint32_t s = 1; s <= full; ++s) {
    int best = n;  // any order gives back-degree <= n-1
    for (std::uint32_t rest = s; rest;) {
      const int v = __builtin_ctz(rest);
      rest &= rest - 1;
      const std::uint32_t prior = s & ~(1u << v);
      // Component of v inside prior ∪ {v}, then its outside neighborhood.
      std::uint32_t comp = 1u << v;
      std::uint32_t frontier = adj[static_cast<std::size_t>(v)] & prior;
      while (frontier) {
        comp |= frontier;
        std::uint32_t grow = 0;
        for (std::uint32_t m = frontier; m;) {
          const int u = __builtin_ctz(m);
          m &= m - 1;
          grow |= adj[static_cast<std::size_t>(u)];
        }
        frontier = grow & prior & ~comp;
      }
      std::uint32_t reach = 0;
      for (std::uint32_t m = comp; m;) {
        const int u = __builtin_ctz(m);
        m &= m - 1;
        reach |= adj[static_cast<std::size_t>(u)];
      }
      const int q = __builtin_popcount(reach & ~prior & ~(1u << v));
      const int cand = std::max<int>(f[prior], q);
      best = std::min(best, cand);
    }
    f[s] = static_cast<std::uint8_t>(best);
  }
  return f[full];
}

std::optional<int> brute_partition_size(const Graph& g,
                                        const std::vector<VertexId>& vs,
                                        const BagPartition& p, int base) {
  if (base != 3 && base != 4) throw std::invalid_argument("base must be 3 or 4");
  if (vs.size() > 15) throw std::invalid_argument("brute_partition_size: |vs| > 15");
  if (!std::is_sorted(vs.begin(), vs.end()) ||
      std::adjacent_find(vs.begin(), vs.end()) != vs.end())
    throw std::invalid_argument("vs must be sorted and unique");
  if (!vs.empty() && (vs.front() < 0 || vs.back() >= g.num_vertices()))
    throw std::invalid_argument("vs contains out-of-range vertices");
  if (!std::includes(vs.begin(), vs.end(), p.bag.begin(), p.bag.end()))
    throw std::invalid_argument("bag must be contained in vs");

  const int m = static_cast<int>(vs.size());
  std::vector<int> local(static_cast<std::size_t>(g.num_vertices()), -1);
  for (int i = 0; i < m; ++i) local[static_cast<std::size_t>(vs[static_cast<std::size_t>(i)])] = i;

  // Fixed digits from the bag labels; -1 means free.
  std::vector<int> fixed(static_cast<std::size_t>(m), -1);
  for (std::size_t i = 0; i < p.bag.size(); ++i)
    fixed[static_cast<std::size_t>(local[static_cast<std::size_t>(p.bag[i])])] =
        label_digit(p.labels[i], base);

  std::vector<std::vector<int>> nbr(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i)
    for (VertexId w : g.neighbors(vs[static_cast<std::size_t>(i)])) {
      const int j = w < static_cast<VertexId>(local.size())
                        ? local[static_cast<std::size_t>(w)]
                        : -1;
      if (j >= 0) nbr[static_cast<std::size_t>(i)].push_back(j);
    }

  // Components of g[vs] that avoid the bag can take an all-W1 labeling at
  // zero cost; restrict the search to components touching the bag, ordered
  // breadth-first from the bag so conflicts surface early.
  std::vector<char> in_bag(static_cast<std::size_t>(m), 0);
  for (VertexId v : p.bag) in_bag[static_cast<std::size_t>(local[static_cast<std::size_t>(v)])] = 1;
  std::vector<int> order;
  std::vector<char> seen(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i)
    if (in_bag[static_cast<std::size_t>(i)]) {
      order.push_back(i);
      seen[static_cast<std::size_t>(i)] = 1;
    }
  for (std::size_t h = 0; h < order.size(); ++h)
    for (int j : nbr[static_cast<std::size_t>(order[h])])
      if (!seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = 1;
        order.push_back(j);
      }

  const int sep = base - 1;
  int best = std::numeric_limits<int>::max();
  std::vector<int> digit(static_cast<std::size_t>(m), -1);
  // Depth-first search over the ordered vertices with cost pruning.
  std::vector<std::pair<int, int>> stack;  // (position, next digit to try)
  int xcount = 0;
  std::size_t pos = 0;
  int trial = 0;
  while (true) {
    if (pos == order.size()) {
      best = std::min(best, xcount);
      if (pos == 0) break;
      --pos;
      const int i = order[pos];
      if (digit[static_cast<std::size_t>(i)] == sep) --xcount;
      trial = fixed[static_cast<std::size_t>(i)] >= 0 ? base
                                                      : digit[static_cast<std::size_t>(i)] + 1;
      digit[static_cast<std::size_t>(i)] = -1;
      continue;
    }
    const int i = order[pos];
    bool advanced = false;
    const int lo = fixed[static_cast<std::size_t>(i)] >= 0 && trial == 0
                       ? fixed[static_cast<std::size_t>(i)]
                       : trial;
    const int hi = fixed[static_cast<std::size_t>(i)] >= 0
                       ? fixed[static_cast<std::size_t>(i)]
                       : base - 1;
    for (int d = lo; d <= hi; ++d) {
      const int cost = xcount + (d == sep ? 1 : 0);
      if (cost >= best) break;  // digits ordered so sep comes last
      bool ok = true;
      for (int j : nbr[static_cast<std::size_t>(i)]) {
        const int dj = digit[static_cast<std::size_t>(j)];
        if (dj >= 0 && dj != d && dj != sep && d != sep) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      digit[static_cast<std::size_t>(i)] = d;
      xcount = cost;
      ++pos;
      trial = 0;
      advanced = true;
      break;
    }
    if (advanced) continue;
    if (pos == 0) break;
    --pos;
    const int i2 = order[pos];
    if (digit[static_cast<std::size_t>(i2)] == sep) --xcount;
    trial = fixed[static_cast<std::size_t>(i2)] >= 0 ? base
                                                     : digit[static_cast<std::size_t>(i2)] + 1;
    digit[static_cast<std::size_t>(i2)] = -1;
  }
  if (best == std::numeric_limits<int>::max()) return std::nullopt;
  return best;
}

namespace {

struct SplitSearch {
  const Graph& g;
  const TreeDecomposition& t;
  int k;
  int base;
  std::vector<int> alive;
  std::vector<std::vector<VertexId>> subtree_vs;  // by node id
  std::map<std::pair<int, PartitionIndex>, int> size_memo;

  // Minimum separator count over the node's subtree vertices compatible with
  // the induced bag labeling (always defined for bag-legal labelings).
  int subtree_size(int node, const std::vector<PartLabel>& parts) {
    const std::vector<VertexId>& bag = t.node(node).bag;
    BagPartition bp;
    bp.bag = bag;
    bp.labels.reserve(bag.size());
    for (VertexId v : bag) bp.labels.push_back(parts[static_cast<std::size_t>(v)]);
    const PartitionIndex idx = encode_partition(bp, base);
    const auto key = std::make_pair(node, idx);
    auto it = size_memo.find(key);
    if (it != size_memo.end()) return it->second;
    const std::optional<int> s =
        brute_partition_size(g, subtree_vs[static_cast<std::size_t>(node)], bp, base);
    if (!s) throw std::logic_error("bag-legal labeling with no completion");
    size_memo.emplace(key, *s);
    return *s;
  }

  // Def 8 consistency: assign a-sets top-down; forced sets must nest, free
  // nodes may take any singleton from the parent.
  bool assign_a(int node, std::uint8_t allowed,
                const std::vector<PartLabel>& parts, std::vector<std::uint8_t>& a) {
    std::uint8_t forced = 0;
    for (VertexId v : t.node(node).bag) {
      const PartLabel l = parts[static_cast<std::size_t>(v)];
      if (l != PartLabel::kX)
        forced = static_cast<std::uint8_t>(forced | (1u << label_digit(l, base)));
    }
    if (forced) {
      if ((forced & allowed) != forced) return false;
      a[static_cast<std::size_t>(node)] = forced;
      for (int c : t.node(node).children)
        if (!assign_a(c, forced, parts, a)) return false;
      return true;
    }
    for (int i = 0; i < base - 1; ++i) {
      const std::uint8_t pick = static_cast<std::uint8_t>(1u << i);
      if (!(allowed & pick)) continue;
      a[static_cast<std::size_t>(node)] = pick;
      bool ok = true;
      for (int c : t.node(node).children)
        if (!assign_a(c, pick, parts, a)) {
          ok = false;
          break;
        }
      if (ok) return true;
    }
    return false;
  }

  bool root_qualifies(const std::vector<PartLabel>& parts, int& size_out) {
    const std::vector<VertexId>& bag = t.node(t.root).bag;
    int wcount[3] = {0, 0, 0};
    for (VertexId v : bag) {
      const PartLabel l = parts[static_cast<std::size_t>(v)];
      if (l != PartLabel::kX) ++wcount[label_digit(l, base)];
    }
    const int size = subtree_size(t.root, parts);
    if (size > k + 1) return false;
    const int b = static_cast<int>(bag.size());
    if (base == 4) {
      for (int i = 0; i < 3; ++i)
        if (wcount[i] + size >= b) return false;
    } else {
      for (int i = 0; i < 2; ++i)
        if (3 * wcount[i] > 2 * b) return false;
    }
    // The bag must land in at least two parts, matching the search engine's
    // notion of a usable root partition.
    int hit = 0;
    for (int i = 0; i < 3; ++i)
      if (wcount[i] > 0) ++hit;
    if (hit < 2) return false;
    size_out = size;
    return true;
  }

  bool edges_good(const std::vector<PartLabel>& parts) {
    for (int y : alive) {
      if (y == t.root) continue;
      const int x = t.node(y).parent;
      const std::vector<VertexId> free =
          set_difference_sorted(t.node(y).bag, t.node(x).bag);
      if (free.empty()) continue;  // labeling fully forced by the parent
      const int chosen = subtree_size(y, parts);
      // Enumerate every compatible relabeling of the free vertices.
      std::vector<PartLabel> cand = parts;
      std::vector<int> digits(free.size(), 0);
      int minimum = std::numeric_limits<int>::max();
      while (true) {
        for (std::size_t i = 0; i < free.size(); ++i)
          cand[static_cast<std::size_t>(free[i])] = digit_label(digits[i], base);
        BagPartition bp;
        bp.bag = t.node(y).bag;
        for (VertexId v : bp.bag)
          bp.labels.push_back(cand[static_cast<std::size_t>(v)]);
        if (is_legal(g, bp)) minimum = std::min(minimum, subtree_size(y, cand));
        std::size_t c = 0;
        while (c < digits.size() && ++digits[c] == base) digits[c++] = 0;
        if (c == digits.size()) break;
      }
      if (chosen != minimum) return false;
    }
    return true;
  }
};

}  // namespace

std::optional<SplitAssignment> exists_split_bruteforce(const Graph& g,
                                                       const TreeDecomposition& t,
                                                       int k, int mode) {
  if (mode != 3 && mode != 4) throw std::invalid_argument("mode must be 3 or 4");
  const int n = g.num_vertices();
  if (n > 12) throw std::invalid_argument("exists_split_bruteforce: n > 12");
  if (n == 0) return std::nullopt;
  if (!t.is_alive(t.root))
    throw std::invalid_argument("decomposition has no root");

  SplitSearch search{g, t, k, mode, t.alive_ids(), {}, {}};
  search.subtree_vs.resize(t.nodes.size());
  for (int id : search.alive)
    search.subtree_vs[static_cast<std::size_t>(id)] = subtree_vertices(t, id);
  if (static_cast<int>(search.subtree_vs[static_cast<std::size_t>(t.root)].size()) != n)
    throw std::invalid_argument("decomposition must cover every vertex");

  // Adjacency to lower-numbered vertices for incremental legality.
  std::vector<std::vector<VertexId>> lower(static_cast<std::size_t>(n));
  for (const Edge& e : g.edges())
    lower[static_cast<std::size_t>(std::max(e.first, e.second))].push_back(
        std::min(e.first, e.second));

  const int base = mode;
  const int sep = base - 1;
  std::vector<int> digit(static_cast<std::size_t>(n), -1);
  std::vector<PartLabel> parts(static_cast<std::size_t>(n), PartLabel::kW1);
  int pos = 0;
  int trial = 0;
  while (true) {
    if (pos == n) {
      for (int v = 0; v < n; ++v)
        parts[static_cast<std::size_t>(v)] =
            digit_label(digit[static_cast<std::size_t>(v)], base);
      int root_size = 0;
      if (search.root_qualifies(parts, root_size) && search.edges_good(parts)) {
        std::vector<std::uint8_t> a(t.nodes.size(), 0);
        std::uint8_t all = static_cast<std::uint8_t>((1u << (base - 1)) - 1);
        if (search.assign_a(t.root, all, parts, a)) {
          int scount = 0;
          for (int v = 0; v < n; ++v)
            if (parts[static_cast<std::size_t>(v)] == PartLabel::kX) ++scount;
          if (scount != root_size)
            throw std::logic_error("separator count disagrees with root size");
          SplitAssignment out;
          out.parts = parts;
          out.a = std::move(a);
          return out;
        }
      }
      --pos;
      trial = digit[static_cast<std::size_t>(pos)] + 1;
      digit[static_cast<std::size_t>(pos)] = -1;
      continue;
    }
    bool advanced = false;
    for (int d = trial; d < base; ++d) {
      bool ok = true;
      for (VertexId w : lower[static_cast<std::size_t>(pos)]) {
        const int dw = digit[static_cast<std::size_t>(w)];
        if (dw != d && dw != sep && d != sep) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      digit[static_cast<std::size_t>(pos)] = d;
      ++pos;
      trial = 0;
      advanced = true;
      break;
    }
    if (advanced) continue;
    if (pos == 0) break;
    --pos;
    trial = digit[static_cast<std::size_t>(pos)] + 1;
    digit[static_cast<std::size_t>(pos)] = -1;
  }
  return std::nullopt;
}

}  // namespace twsplit
