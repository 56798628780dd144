#include "twsplit/dp_table.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace twsplit {

namespace {

constexpr std::uint64_t kMaxEntries = 1ull << 28;

[[noreturn]] void corrupt(const std::string& what) {
  throw std::logic_error("dp table invariant broken: " + what);
}

void check_bases(const DpTable& a, const DpTable& b) {
  if (a.base != b.base) corrupt("base mismatch");
}

// Positions of the parent bag inside the child bag; child may have at most
// one extra vertex, whose child position is returned (-1 if bags are equal).
int case1_extra_position(const DpTable& parent, const DpTable& child) {
  if (child.bag.size() != parent.bag.size() &&
      child.bag.size() != parent.bag.size() + 1)
    corrupt("case 1 bag relation");
  int extra = -1;
  std::size_t pi = 0;
  for (std::size_t ci = 0; ci < child.bag.size(); ++ci) {
    if (pi < parent.bag.size() && parent.bag[pi] == child.bag[ci]) {
      ++pi;
    } else {
      if (extra != -1) corrupt("case 1 bag relation");
      extra = static_cast<int>(ci);
    }
  }
  if (pi != parent.bag.size()) corrupt("case 1 bag relation");
  if (extra == -1 && child.bag.size() != parent.bag.size())
    corrupt("case 1 bag relation");
  return extra;
}

std::int64_t combine_case1(DpTable& parent, const DpTable& child, int sign) {
  check_bases(parent, child);
  const int base = parent.base;
  const int sep = base - 1;
  const int nd = static_cast<int>(parent.bag.size());
  const int posv = case1_extra_position(parent, child);
  const std::uint64_t pw = posv < 0 ? 0 : pow_u64(base, posv);

  std::int64_t visited = static_cast<std::int64_t>(parent.entries.size());
  std::vector<std::uint8_t> digits(nd, 0);
  int xcount = 0;
  for (PartitionIndex i = 0;; ++i) {
    if (parent.entries[i] != kBot) {
      std::uint32_t min_s = kBot;
      if (posv < 0) {
        min_s = child.entries[i];
        ++visited;
      } else {
        const PartitionIndex low = i % pw;
        const PartitionIndex stem = low + (i / pw) * pw * base;
        for (int d = 0; d < base; ++d)
          min_s = std::min<std::uint32_t>(min_s, child.entries[stem + d * pw]);
        visited += base;
      }
      if (min_s == kBot) corrupt("legal parent entry with no legal child entry");
      const std::int32_t val = sign > 0
          ? static_cast<std::int32_t>(parent.entries[i]) + static_cast<std::int32_t>(min_s) - xcount
          : static_cast<std::int32_t>(parent.entries[i]) - static_cast<std::int32_t>(min_s) + xcount;
      if (val < 0 || val >= kBot) corrupt("case 1 entry out of range");
      parent.entries[i] = static_cast<std::uint16_t>(val);
    }
    int p = 0;
    for (; p < nd; ++p) {
      const std::uint8_t od = digits[p];
      const std::uint8_t nd2 = (od + 1 == base) ? 0 : od + 1;
      xcount += (nd2 == sep) - (od == sep);
      digits[p] = nd2;
      if (nd2 != 0) break;
    }
    if (p == nd) break;
  }
  return visited;
}

}  // namespace

std::uint64_t pow_u64(std::uint64_t base, unsigned exp) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < exp; ++i) r *= base;
  return r;
}

std::uint16_t table_entry(const DpTable& t, const BagPartition& p) {
  if (p.bag != t.bag) throw std::invalid_argument("partition bag mismatch");
  return t.entries[encode_partition(p, t.base)];
}

DpTable init_table(const Graph& g, std::vector<VertexId> bag, int base) {
  if (base != 3 && base != 4) throw std::invalid_argument("base must be 3 or 4");
  if (!std::is_sorted(bag.begin(), bag.end()) ||
      std::adjacent_find(bag.begin(), bag.end()) != bag.end())
    throw std::invalid_argument("bag must be sorted and unique");
  const int nd = static_cast<int>(bag.size());
  const std::uint64_t len = pow_u64(base, nd);
  if (len > kMaxEntries) throw std::invalid_argument("bag too large for dense table");

  DpTable t;
  t.base = base;
  t.bag = std::move(bag);
  t.entries.assign(len, 0);

  std::vector<std::vector<int>> adj(nd);
  for (int i = 0; i < nd; ++i)
    for (int j = i + 1; j < nd; ++j)
      if (g.has_edge(t.bag[i], t.bag[j])) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }

  const int sep = base - 1;
  std::vector<std::uint8_t> digits(nd, 0);
  int xcount = 0;
  std::int64_t crossings = 0;
  for (PartitionIndex i = 0;; ++i) {
    t.entries[i] = crossings == 0 ? static_cast<std::uint16_t>(xcount) : kBot;
    int p = 0;
    for (; p < nd; ++p) {
      const std::uint8_t od = digits[p];
      const std::uint8_t nd2 = (od + 1 == base) ? 0 : od + 1;
      for (int q : adj[p]) {
        const std::uint8_t dq = digits[q];
        if (dq == sep) continue;
        crossings += static_cast<int>(nd2 != sep && nd2 != dq) -
                     static_cast<int>(od != sep && od != dq);
      }
      xcount += (nd2 == sep) - (od == sep);
      digits[p] = nd2;
      if (nd2 != 0) break;
    }
    if (p == nd) break;
  }
  return t;
}

std::int64_t add_child_case1(DpTable& parent, const DpTable& child) {
  return combine_case1(parent, child, +1);
}

std::int64_t subtract_child_case1(DpTable& parent, const DpTable& child) {
  return combine_case1(parent, child, -1);
}

std::int64_t combine_mapped_child(DpTable& parent, const DpTable& child,
                                  const std::vector<int>& child_pos_in_parent,
                                  const std::vector<std::uint8_t>& fixed_digits,
                                  int sign) {
  check_bases(parent, child);
  const int base = parent.base;
  const int sep = base - 1;
  const int nd = static_cast<int>(parent.bag.size());
  const int cd = static_cast<int>(child.bag.size());
  if (static_cast<int>(child_pos_in_parent.size()) != cd ||
      static_cast<int>(fixed_digits.size()) != cd)
    corrupt("mapped combine arity");

  // child_of[p] = child position fed by parent position p, or -1.
  std::vector<int> child_of(nd, -1);
  PartitionIndex child_idx = 0;
  int child_x = 0;
  for (int j = 0; j < cd; ++j) {
    const int p = child_pos_in_parent[j];
    if (p >= 0) {
      if (p >= nd || child_of[p] != -1) corrupt("mapped combine positions");
      child_of[p] = j;
    } else {
      if (fixed_digits[j] >= base) corrupt("mapped combine fixed digit");
      child_idx += fixed_digits[j] * pow_u64(base, j);
      child_x += fixed_digits[j] == sep;
    }
  }
  std::vector<std::uint64_t> weight(nd, 0);
  for (int p = 0; p < nd; ++p)
    if (child_of[p] >= 0) weight[p] = pow_u64(base, child_of[p]);

  std::int64_t visited = static_cast<std::int64_t>(parent.entries.size());
  std::vector<std::uint8_t> digits(nd, 0);
  for (PartitionIndex i = 0;; ++i) {
    if (parent.entries[i] != kBot) {
      const std::uint16_t cs = child.entries[child_idx];
      ++visited;
      if (cs == kBot) corrupt("legal parent entry with illegal child entry");
      const std::int32_t contribution = static_cast<std::int32_t>(cs) - child_x;
      const std::int32_t val =
          static_cast<std::int32_t>(parent.entries[i]) + sign * contribution;
      if (val < 0 || val >= kBot) corrupt("case 2 entry out of range");
      parent.entries[i] = static_cast<std::uint16_t>(val);
    }
    int p = 0;
    for (; p < nd; ++p) {
      const std::uint8_t od = digits[p];
      const std::uint8_t nd2 = (od + 1 == base) ? 0 : od + 1;
      if (child_of[p] >= 0) {
        child_idx += (static_cast<std::int64_t>(nd2) - od) * weight[p];
        child_x += (nd2 == sep) - (od == sep);
      }
      digits[p] = nd2;
      if (nd2 != 0) break;
    }
    if (p == nd) break;
  }
  return visited;
}

namespace {

std::int64_t combine_case2(DpTable& parent, const DpTable& child, int sign) {
  std::vector<int> pos(child.bag.size());
  for (std::size_t j = 0; j < child.bag.size(); ++j) {
    auto it = std::lower_bound(parent.bag.begin(), parent.bag.end(), child.bag[j]);
    if (it == parent.bag.end() || *it != child.bag[j])
      corrupt("case 2 bag relation");
    pos[j] = static_cast<int>(it - parent.bag.begin());
  }
  return combine_mapped_child(parent, child, pos,
                              std::vector<std::uint8_t>(child.bag.size(), 0),
                              sign);
}

}  // namespace

std::int64_t add_child_case2(DpTable& parent, const DpTable& child) {
  return combine_case2(parent, child, +1);
}

std::int64_t subtract_child_case2(DpTable& parent, const DpTable& child) {
  return combine_case2(parent, child, -1);
}

std::int64_t update_child_case1(DpTable& parent, const DpTable& before,
                                const DpTable& after) {
  return subtract_child_case1(parent, before) + add_child_case1(parent, after);
}

std::int64_t update_child_case2(DpTable& parent, const DpTable& before,
                                const DpTable& after) {
  return subtract_child_case2(parent, before) + add_child_case2(parent, after);
}

namespace {

bool is_subset(const std::vector<VertexId>& a, const std::vector<VertexId>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

std::int64_t add_child(DpTable& parent, const DpTable& child) {
  return is_subset(child.bag, parent.bag) ? add_child_case2(parent, child)
                                          : add_child_case1(parent, child);
}

std::int64_t subtract_child(DpTable& parent, const DpTable& child) {
  return is_subset(child.bag, parent.bag) ? subtract_child_case2(parent, child)
                                          : subtract_child_case1(parent, child);
}

std::int64_t update_child(DpTable& parent, const DpTable& before,
                          const DpTable& after) {
  return subtract_child(parent, before) + add_child(parent, after);
}

std::int64_t extend_bag_vertex(DpTable& t, const Graph& g, VertexId v) {
  const int base = t.base;
  const int sep = base - 1;
  const int nd = static_cast<int>(t.bag.size());
  auto it = std::lower_bound(t.bag.begin(), t.bag.end(), v);
  if (it != t.bag.end() && *it == v)
    throw std::invalid_argument("vertex already in bag");
  const int pos = static_cast<int>(it - t.bag.begin());
  const std::uint64_t pw = pow_u64(base, pos);
  if (t.entries.size() * base > kMaxEntries)
    throw std::invalid_argument("bag too large for dense table");

  // Per-digit counts over bag positions adjacent to v, for crossing checks.
  std::vector<int> nbr;
  for (int q = 0; q < nd; ++q)
    if (g.has_edge(v, t.bag[q])) nbr.push_back(q);
  std::vector<int> cnt(base, 0);
  cnt[0] = static_cast<int>(nbr.size());
  int nonsep = cnt[0];
  std::vector<char> is_nbr(nd, 0);
  for (int q : nbr) is_nbr[q] = 1;

  std::vector<std::uint16_t> out(t.entries.size() * base);
  std::vector<std::uint8_t> digits(nd, 0);
  for (PartitionIndex i = 0;; ++i) {
    const std::uint16_t s = t.entries[i];
    const PartitionIndex low = i % pw;
    const PartitionIndex stem = low + (i / pw) * pw * base;
    for (int d = 0; d < base; ++d) {
      std::uint16_t val;
      if (s == kBot) {
        val = kBot;
      } else if (d == sep) {
        val = static_cast<std::uint16_t>(s + 1);
        if (val >= kBot) corrupt("extend entry out of range");
      } else {
        val = (nonsep - cnt[d]) > 0 ? kBot : s;
      }
      out[stem + d * pw] = val;
    }
    int p = 0;
    for (; p < nd; ++p) {
      const std::uint8_t od = digits[p];
      const std::uint8_t nd2 = (od + 1 == base) ? 0 : od + 1;
      if (is_nbr[p]) {
        --cnt[od];
        ++cnt[nd2];
        nonsep += (nd2 != sep) - (od != sep);
      }
      digits[p] = nd2;
      if (nd2 != 0) break;
    }
    if (p == nd) break;
  }
  t.bag.insert(t.bag.begin() + pos, v);
  t.entries = std::move(out);
  return static_cast<std::int64_t>(t.entries.size());
}

}  // namespace twsplit
