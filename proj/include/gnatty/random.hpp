#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace gnatty {

/// Independent randomness consumers. Each gets its own stream derived from the
/// experiment seed so that, e.g., changing the query count never perturbs the
/// pivots chosen during build.
enum class Stream : std::uint64_t {
  kDataset = 1,
  kQuerySplit = 2,
  kPivots = 3,
  kReducedTable = 4,
};

/// Seedable generator with portable output.
///
/// The engine is std::mt19937_64, whose sequence is fixed by the standard; the
/// distribution helpers below are implemented here because the std::
/// distributions are allowed to differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng for_stream(std::uint64_t seed, Stream stream);

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform real in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Rearranges `items` so that its first `count` elements are a uniform random
/// sample without replacement, in random order (partial Fisher-Yates).
template <class T>
void partial_shuffle(std::span<T> items, std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count && i + 1 < items.size(); ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(items.size() - i));
    using std::swap;
    swap(items[i], items[j]);
  }
}

}  // namespace gnatty
