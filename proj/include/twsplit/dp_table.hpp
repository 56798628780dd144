#pragma once

#include <cstdint>
#include <vector>

#include "twsplit/graph.hpp"
#include "twsplit/partition.hpp"

namespace twsplit {

// Sentinel for illegal partitions; strictly greater than any valid size.
constexpr std::uint16_t kBot = 0xFFFF;

// Dense table over all base^|bag| partitions of a bag. entries[i] is the
// minimum separator count over partitions of the node's subtree vertices
// compatible with the decoded partition i, or kBot when i is illegal on the
// edges induced by the bag (a partition with a legal bag restriction always
// extends legally, so kBot-ness is a property of the bag alone).
struct DpTable {
  int base = 4;
  std::vector<VertexId> bag;           // sorted ascending
  std::vector<std::uint16_t> entries;  // length base^|bag|
};

std::uint64_t pow_u64(std::uint64_t base, unsigned exp);

std::uint16_t table_entry(const DpTable& t, const BagPartition& p);

// Entries = |X| for every bag-legal partition, kBot otherwise.
DpTable init_table(const Graph& g, std::vector<VertexId> bag, int base);

// Child-combination passes. All return the number of entries visited, the
// unit in which table-recomputation work is accounted everywhere.
//
// Case 1 (Intersection parent, Main child): child bag = parent bag plus at
// most one extra vertex; each parent entry combines with the minimum over the
// child placements of the extra vertex:  s_x += min s_y - |X^x|.
// Case 2 (Main parent, Intersection child): child bag subset of parent bag;
// each parent entry combines with its induced child entry:  s_x += s_y - |X^y|.
// Subtraction is the bit-exact inverse of addition with the same child table.
std::int64_t add_child_case1(DpTable& parent, const DpTable& child);
std::int64_t subtract_child_case1(DpTable& parent, const DpTable& child);
std::int64_t add_child_case2(DpTable& parent, const DpTable& child);
std::int64_t subtract_child_case2(DpTable& parent, const DpTable& child);
std::int64_t update_child_case1(DpTable& parent, const DpTable& before,
                                const DpTable& after);
std::int64_t update_child_case2(DpTable& parent, const DpTable& before,
                                const DpTable& after);

// Dispatch on the bag relation: subset -> case 2, superset by one -> case 1.
std::int64_t add_child(DpTable& parent, const DpTable& child);
std::int64_t subtract_child(DpTable& parent, const DpTable& child);
std::int64_t update_child(DpTable& parent, const DpTable& before,
                          const DpTable& after);

// Grow the bag by a vertex v (absent from the bag, with no edges into the
// subtree below the current bag): X placement adds 1, W placements keep the
// value when v crosses no bag edge and become kBot otherwise.
std::int64_t extend_bag_vertex(DpTable& t, const Graph& g, VertexId v);

// Case-2-style combine where child bag positions either map into the parent
// bag (child_pos_in_parent[j] >= 0) or take fixed_digits[j]. The |X^y|
// correction counts separator digits of the full child index, fixed digits
// included. sign is +1 (add) or -1 (subtract).
std::int64_t combine_mapped_child(DpTable& parent, const DpTable& child,
                                  const std::vector<int>& child_pos_in_parent,
                                  const std::vector<std::uint8_t>& fixed_digits,
                                  int sign);

}  // namespace twsplit
