#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "dqc/circuit.hpp"

namespace dqc {

/// Disjoint qubit sets covering [0, width), one per part, each matching its
/// requested size.
struct Partition {
  std::vector<std::vector<int>> parts;  // each sorted ascending
  std::vector<int> target_sizes;
};

struct CutReport {
  long long total_cut = 0;
  std::map<std::pair<int, int>, long long> pairwise_cut;  // (part a < part b)
};

struct PartitionResult {
  Partition partition;
  CutReport cut;
};

/// Kernighan-Lin bisection on the weighted interaction graph with fixed part
/// sizes. Starts from a seeded random split, runs gain-driven pair-swap
/// passes committing the best positive prefix, and stops when a pass yields
/// no improvement. The best result over `restarts` independent starts wins;
/// the returned cut is never worse than the initial random split.
PartitionResult kl_bisect(const InteractionGraph& g, int size_a, int size_b,
                          std::uint64_t seed, int restarts = 10);

/// k-way partitioning by recursive bisection: the requested sizes are split
/// into two near-equal-total groups (sorted descending, greedy balance),
/// the graph is bisected at that split, and each side recurses. Parts in the
/// result line up with the requested target_sizes order.
PartitionResult kway_partition(const InteractionGraph& g,
                               const std::vector<int>& target_sizes,
                               std::uint64_t seed);

/// Total cut weight of a near-equal k-way partition (sizes differ by at most
/// one, larger parts first). This is the training target for the partition
/// cost regression.
long long balanced_cut_size(const InteractionGraph& g, int k,
                            std::uint64_t seed, int restarts = 10);

/// Recounts the crossing edge weights of an explicit partition; used to keep
/// every reported cut consistent with its parts.
CutReport recount_cut(const InteractionGraph& g,
                      const std::vector<std::vector<int>>& parts);

}  // namespace dqc
