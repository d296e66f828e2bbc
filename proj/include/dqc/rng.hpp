#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace dqc {

// 64-bit mixing finalizer (splitmix64). Used to derive independent seed
// streams from a single declared seed.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Named randomness streams. Every consumer of randomness draws from its own
// stream so that, e.g., changing the number of partitioner restarts never
// perturbs workload sampling.
namespace streams {
inline constexpr std::uint64_t kCapacity = 1;   // capacity-to-QPU placement
inline constexpr std::uint64_t kWorkload = 2;   // circuit widths and arrival order
inline constexpr std::uint64_t kPartition = 3;  // K-L initial splits
inline constexpr std::uint64_t kBaseline = 4;   // random-allocation draws
}  // namespace streams

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t counter = 0) {
  return mix64(mix64(base ^ (stream * 0xd1b54a32d192ed03ULL)) + counter);
}

// mt19937_64 with hand-rolled bounded draws. std::uniform_int_distribution is
// implementation-defined, which would make result files differ between
// standard libraries; the rejection sampler below is fully portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, n).
  std::uint64_t bounded(std::uint64_t n) {
    if (n < 2) return 0;
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = eng_();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(bounded(static_cast<std::uint64_t>(hi) -
                                         static_cast<std::uint64_t>(lo) + 1));
  }

  // Uniform in [0, 1).
  double uniform_real() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(bounded(i))]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace dqc
