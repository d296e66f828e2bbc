#include "dqc/klpartition.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "dqc/rng.hpp"

namespace dqc {

namespace {

// Dense symmetric weight matrix over a node subset, relabeled to 0..n-1.
struct DenseGraph {
  int n = 0;
  std::vector<long long> w;  // n*n, symmetric, zero diagonal

  long long at(int a, int b) const {
    return w[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) +
             static_cast<std::size_t>(b)];
  }
};

DenseGraph induced_dense(const InteractionGraph& g, const std::vector<int>& nodes) {
  DenseGraph d;
  d.n = static_cast<int>(nodes.size());
  d.w.assign(static_cast<std::size_t>(d.n) * static_cast<std::size_t>(d.n), 0);
  std::vector<int> local(static_cast<std::size_t>(g.width()), -1);
  for (int i = 0; i < d.n; ++i) local[static_cast<std::size_t>(nodes[static_cast<std::size_t>(i)])] = i;
  for (const auto& [edge, weight] : g.edges()) {
    const int a = local[static_cast<std::size_t>(edge.first)];
    const int b = local[static_cast<std::size_t>(edge.second)];
    if (a < 0 || b < 0) continue;
    d.w[static_cast<std::size_t>(a) * static_cast<std::size_t>(d.n) + static_cast<std::size_t>(b)] += weight;
    d.w[static_cast<std::size_t>(b) * static_cast<std::size_t>(d.n) + static_cast<std::size_t>(a)] += weight;
  }
  return d;
}

long long cut_of_sides(const DenseGraph& d, const std::vector<int>& side) {
  long long cut = 0;
  for (int a = 0; a < d.n; ++a) {
    for (int b = a + 1; b < d.n; ++b) {
      if (side[static_cast<std::size_t>(a)] != side[static_cast<std::size_t>(b)]) cut += d.at(a, b);
    }
  }
  return cut;
}

// One K-L run from a random initial split of the requested sizes. Gain-driven
// pair swaps; the best positive prefix of each pass is committed.
std::pair<std::vector<int>, long long> kl_run(const DenseGraph& d, int size_a,
                                              Rng& rng) {
  const int n = d.n;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<int> side(static_cast<std::size_t>(n), 1);
  for (int i = 0; i < size_a; ++i) side[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 0;

  const int steps = std::min(size_a, n - size_a);
  std::vector<long long> gain_d(static_cast<std::size_t>(n));
  std::vector<bool> locked(static_cast<std::size_t>(n));

  for (;;) {
    for (int v = 0; v < n; ++v) {
      long long dv = 0;
      for (int u = 0; u < n; ++u) {
        if (u == v) continue;
        dv += (side[static_cast<std::size_t>(u)] != side[static_cast<std::size_t>(v)]) ? d.at(v, u) : -d.at(v, u);
      }
      gain_d[static_cast<std::size_t>(v)] = dv;
    }
    std::fill(locked.begin(), locked.end(), false);

    std::vector<std::pair<int, int>> swaps;
    std::vector<long long> gains;
    for (int step = 0; step < steps; ++step) {
      long long best = std::numeric_limits<long long>::min();
      int best_a = -1;
      int best_b = -1;
      for (int a = 0; a < n; ++a) {
        if (side[static_cast<std::size_t>(a)] != 0 || locked[static_cast<std::size_t>(a)]) continue;
        for (int b = 0; b < n; ++b) {
          if (side[static_cast<std::size_t>(b)] != 1 || locked[static_cast<std::size_t>(b)]) continue;
          const long long gain = gain_d[static_cast<std::size_t>(a)] + gain_d[static_cast<std::size_t>(b)] - 2 * d.at(a, b);
          if (gain > best) {
            best = gain;
            best_a = a;
            best_b = b;
          }
        }
      }
      if (best_a < 0) break;
      locked[static_cast<std::size_t>(best_a)] = true;
      locked[static_cast<std::size_t>(best_b)] = true;
      swaps.emplace_back(best_a, best_b);
      gains.push_back(best);
      for (int x = 0; x < n; ++x) {
        if (locked[static_cast<std::size_t>(x)]) continue;
        const long long wa = d.at(x, best_a);
        const long long wb = d.at(x, best_b);
        if (side[static_cast<std::size_t>(x)] == 0) {
          gain_d[static_cast<std::size_t>(x)] += 2 * wa - 2 * wb;
        } else {
          gain_d[static_cast<std::size_t>(x)] += 2 * wb - 2 * wa;
        }
      }
    }

    long long running = 0;
    long long best_prefix_gain = 0;
    std::size_t best_prefix = 0;
    for (std::size_t p = 0; p < gains.size(); ++p) {
      running += gains[p];
      if (running > best_prefix_gain) {
        best_prefix_gain = running;
        best_prefix = p + 1;
      }
    }
    if (best_prefix_gain <= 0) break;
    for (std::size_t p = 0; p < best_prefix; ++p) {
      side[static_cast<std::size_t>(swaps[p].first)] = 1;
      side[static_cast<std::size_t>(swaps[p].second)] = 0;
    }
  }
  return {side, cut_of_sides(d, side)};
}

std::pair<std::vector<int>, long long> best_bisection(const DenseGraph& d, int size_a,
                                                      std::uint64_t seed, int restarts,
                                                      std::uint64_t call_id) {
  if (restarts < 1) restarts = 1;
  std::vector<int> best_side;
  long long best_cut = std::numeric_limits<long long>::max();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, streams::kPartition,
                        (call_id << 20) ^ static_cast<std::uint64_t>(r)));
    auto [side, cut] = kl_run(d, size_a, rng);
    if (cut < best_cut) {
      best_cut = cut;
      best_side = std::move(side);
    }
  }
  return {best_side, best_cut};
}

struct SizeEntry {
  int slot = 0;  // index into the caller's target_sizes
  int size = 0;
};

// Recursive bisection; fills parts[slot] for every size entry.
void kway_recurse(const InteractionGraph& g, const std::vector<int>& nodes,
                  std::vector<SizeEntry> entries, std::uint64_t seed, int restarts,
                  std::uint64_t& call_id, std::vector<std::vector<int>>& parts) {
  if (entries.size() == 1) {
    parts[static_cast<std::size_t>(entries[0].slot)] = nodes;
    return;
  }
  // Split the requested sizes into two near-equal halves: sort descending,
  // then greedily add to the lighter side.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const SizeEntry& a, const SizeEntry& b) { return a.size > b.size; });
  std::vector<SizeEntry> left, right;
  long long sum_left = 0;
  long long sum_right = 0;
  for (const SizeEntry& e : entries) {
    if (sum_left <= sum_right) {
      left.push_back(e);
      sum_left += e.size;
    } else {
      right.push_back(e);
      sum_right += e.size;
    }
  }

  const DenseGraph dense = induced_dense(g, nodes);
  const std::uint64_t id = call_id++;
  auto [side, cut] = best_bisection(dense, static_cast<int>(sum_left), seed, restarts, id);
  (void)cut;
  std::vector<int> nodes_left, nodes_right;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    (side[i] == 0 ? nodes_left : nodes_right).push_back(nodes[i]);
  }
  kway_recurse(g, nodes_left, std::move(left), seed, restarts, call_id, parts);
  kway_recurse(g, nodes_right, std::move(right), seed, restarts, call_id, parts);
}

PartitionResult kway_with_restarts(const InteractionGraph& g,
                                   const std::vector<int>& target_sizes,
                                   std::uint64_t seed, int restarts) {
  long long size_sum = 0;
  for (int s : target_sizes) {
    if (s < 1) throw std::invalid_argument("every part size must be >= 1");
    size_sum += s;
  }
  if (target_sizes.empty() || size_sum != g.width()) {
    throw std::invalid_argument("part sizes must cover the circuit width");
  }

  std::vector<int> nodes(static_cast<std::size_t>(g.width()));
  std::iota(nodes.begin(), nodes.end(), 0);
  std::vector<SizeEntry> entries;
  for (std::size_t i = 0; i < target_sizes.size(); ++i) {
    entries.push_back({static_cast<int>(i), target_sizes[i]});
  }

  PartitionResult result;
  result.partition.target_sizes = target_sizes;
  result.partition.parts.resize(target_sizes.size());
  std::uint64_t call_id = 0;
  kway_recurse(g, nodes, std::move(entries), seed, restarts, call_id,
               result.partition.parts);
  for (auto& part : result.partition.parts) std::sort(part.begin(), part.end());
  result.cut = recount_cut(g, result.partition.parts);
  return result;
}

}  // namespace

PartitionResult kl_bisect(const InteractionGraph& g, int size_a, int size_b,
                          std::uint64_t seed, int restarts) {
  if (size_a < 1 || size_b < 1 || size_a + size_b != g.width()) {
    throw std::invalid_argument("bisection sizes must be >= 1 and sum to width");
  }
  std::vector<int> nodes(static_cast<std::size_t>(g.width()));
  std::iota(nodes.begin(), nodes.end(), 0);
  const DenseGraph dense = induced_dense(g, nodes);
  auto [side, cut] = best_bisection(dense, size_a, seed, restarts, 0);

  PartitionResult result;
  result.partition.target_sizes = {size_a, size_b};
  result.partition.parts.resize(2);
  for (int v = 0; v < g.width(); ++v) {
    result.partition.parts[static_cast<std::size_t>(side[static_cast<std::size_t>(v)])].push_back(v);
  }
  result.cut = recount_cut(g, result.partition.parts);
  if (result.cut.total_cut != cut) {
    throw std::logic_error("bisection cut bookkeeping mismatch");
  }
  return result;
}

PartitionResult kway_partition(const InteractionGraph& g,
                               const std::vector<int>& target_sizes,
                               std::uint64_t seed) {
  return kway_with_restarts(g, target_sizes, seed, 10);
}

long long balanced_cut_size(const InteractionGraph& g, int k, std::uint64_t seed,
                            int restarts) {
  if (k < 2 || k > g.width()) {
    throw std::invalid_argument("partition count must be in [2, width]");
  }
  const int base = g.width() / k;
  const int remainder = g.width() % k;
  std::vector<int> sizes(static_cast<std::size_t>(k), base);
  for (int i = 0; i < remainder; ++i) ++sizes[static_cast<std::size_t>(i)];
  return kway_with_restarts(g, sizes, seed, restarts).cut.total_cut;
}

CutReport recount_cut(const InteractionGraph& g,
                      const std::vector<std::vector<int>>& parts) {
  std::vector<int> part_of(static_cast<std::size_t>(g.width()), -1);
  for (std::size_t p = 0; p < parts.size(); ++p) {
    for (int v : parts[p]) {
      if (v < 0 || v >= g.width() || part_of[static_cast<std::size_t>(v)] != -1) {
        throw std::invalid_argument("parts must be disjoint subsets of [0, width)");
      }
      part_of[static_cast<std::size_t>(v)] = static_cast<int>(p);
    }
  }
  for (int v = 0; v < g.width(); ++v) {
    if (part_of[static_cast<std::size_t>(v)] == -1) {
      throw std::invalid_argument("parts must cover every qubit");
    }
  }
  CutReport report;
  for (const auto& [edge, weight] : g.edges()) {
    const int pa = part_of[static_cast<std::size_t>(edge.first)];
    const int pb = part_of[static_cast<std::size_t>(edge.second)];
    if (pa == pb) continue;
    report.total_cut += weight;
    report.pairwise_cut[{std::min(pa, pb), std::max(pa, pb)}] += weight;
  }
  return report;
}

}  // namespace dqc
