#pragma once

#include <cstdint>
#include <vector>

#include "twsplit/graph.hpp"

namespace twsplit {

// Label of a bag vertex in a partition (W1, W2, W3, X). The W3 part exists
// only in 4-mode (base 4); X is the separator part in every mode.
enum class PartLabel : std::uint8_t { kW1 = 0, kW2 = 1, kW3 = 2, kX = 3 };

// Partition of a bag: labels[i] is the part of bag[i]. Parts may be empty.
struct BagPartition {
  std::vector<VertexId> bag;      // sorted ascending
  std::vector<PartLabel> labels;  // aligned with bag
};

// Dense index of a bag partition in [0, base^|bag|). Digit j (least
// significant = smallest bag vertex) encodes bag[j]'s label:
// 0=W1, 1=W2, 2=W3, 3=X in base 4; 0=W1, 1=W2, 2=X in base 3.
using PartitionIndex = std::uint64_t;

// Digit a label encodes to; throws std::invalid_argument for W3 in base 3.
int label_digit(PartLabel label, int base);
PartLabel digit_label(int digit, int base);
inline int separator_digit(int base) { return base - 1; }

PartitionIndex encode_partition(const BagPartition& p, int base);
BagPartition decode_partition(PartitionIndex index,
                              const std::vector<VertexId>& bag, int base);

// True iff no edge induced by the bag joins two distinct W-parts.
bool is_legal(const Graph& g, const BagPartition& p);

}  // namespace twsplit
