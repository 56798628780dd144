#include "twsplit/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace twsplit {

int label_digit(PartLabel label, int base) {
  if (base != 3 && base != 4) throw std::invalid_argument("base must be 3 or 4");
  if (label == PartLabel::kX) return base - 1;
  int d = static_cast<int>(label);
  if (d >= base - 1)
    throw std::invalid_argument("W3 label is invalid in 3-mode");
  return d;
}

PartLabel digit_label(int digit, int base) {
  if (base != 3 && base != 4) throw std::invalid_argument("base must be 3 or 4");
  if (digit < 0 || digit >= base) throw std::invalid_argument("digit out of range");
  if (digit == base - 1) return PartLabel::kX;
  return static_cast<PartLabel>(digit);
}

PartitionIndex encode_partition(const BagPartition& p, int base) {
  if (p.labels.size() != p.bag.size())
    throw std::invalid_argument("labels/bag size mismatch");
  PartitionIndex index = 0;
  PartitionIndex weight = 1;
  for (std::size_t j = 0; j < p.bag.size(); ++j) {
    index += weight * static_cast<PartitionIndex>(label_digit(p.labels[j], base));
    weight *= static_cast<PartitionIndex>(base);
  }
  return index;
}

BagPartition decode_partition(PartitionIndex index,
                              const std::vector<VertexId>& bag, int base) {
  BagPartition p;
  p.bag = bag;
  p.labels.reserve(bag.size());
  for (std::size_t j = 0; j < bag.size(); ++j) {
    p.labels.push_back(digit_label(static_cast<int>(index % base), base));
    index /= base;
  }
  if (index != 0) throw std::invalid_argument("partition index out of range");
  return p;
}

bool is_legal(const Graph& g, const BagPartition& p) {
  if (p.labels.size() != p.bag.size())
    throw std::invalid_argument("labels/bag size mismatch");
  for (std::size_t i = 0; i < p.bag.size(); ++i) {
    if (p.labels[i] == PartLabel::kX) continue;
    for (std::size_t j = i + 1; j < p.bag.size(); ++j) {
      if (p.labels[j] == PartLabel::kX || p.labels[j] == p.labels[i]) continue;
      if (g.has_edge(p.bag[i], p.bag[j])) return false;
    }
  }
  return true;
}

}  // namespace twsplit
