#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "twsplit/decomposition.hpp"
#include "twsplit/graph.hpp"
#include "twsplit/partition.hpp"
#include "twsplit/split.hpp"

namespace twsplit {

// Deterministic random source. Built on the mt19937_64 engine (whose raw
// output sequence is pinned by the standard) with rejection sampling on top,
// so streams are identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next_u64() { return engine_(); }
  // Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi);
  // True with probability p (p clamped to [0,1]).
  bool bernoulli(double p);
  // Fisher-Yates shuffle driven by uniform_int.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
      std::swap(v[static_cast<std::size_t>(i)],
                v[static_cast<std::size_t>(uniform_int(0, i))]);
  }

 private:
  std::mt19937_64 engine_;
};

// Test-instance generator request. Families:
//   partial-k-tree : random k-tree on n vertices; each edge is then kept
//                    independently with probability edge_keep; the recorded
//                    width-k witness decomposition stays valid for the
//                    remaining subgraph.
//   grid           : n x k grid graph.
//   path, cycle, complete, tree : the usual graphs on n vertices (tree drawn
//                    uniformly from random attachment; k ignored).
struct GeneratorSpec {
  std::string family = "path";
  int n = 0;
  int k = 0;
  double edge_keep = 1.0;
  std::uint64_t seed = 0;
};

struct GeneratedInstance {
  Graph graph{0, {}};
  // Present for partial-k-tree: a decomposition of width <= spec.k valid for
  // the generated graph.
  std::optional<TreeDecomposition> witness;
};

GeneratedInstance generate(const GeneratorSpec& spec);

// Exact treewidth by dynamic programming over vertex subsets (minimum over
// elimination orders of the maximum back-degree). Enforces n <= 20.
int exact_treewidth(const Graph& g);

// Minimum separator count over all legal labelings of vs that agree with p
// on its bag, counting only edges induced inside vs; std::nullopt when no
// legal labeling exists. Labels range over the partition alphabet implied by
// base (3 or 4), taken from p via its label vector. Enforces |vs| <= 15.
std::optional<int> brute_partition_size(const Graph& g,
                                        const std::vector<VertexId>& vs,
                                        const BagPartition& p, int base);

// Exhaustive split existence: enumerates every global labeling of V and
// every admissible a-function against the definitions directly (legality,
// per-edge goodness, root balance for the mode, a-consistency). Agrees with
// find_split on existence, not necessarily on the witness. Enforces n <= 12.
std::optional<SplitAssignment> exists_split_bruteforce(const Graph& g,
                                                       const TreeDecomposition& t,
                                                       int k, int mode);

}  // namespace twsplit
