#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "gnatty/errors.hpp"
#include "gnatty/metric.hpp"
#include "gnatty/query.hpp"

namespace gnatty {

/// All pairwise distances, strict lower triangle only: the pair (i, j) with
/// i < j lives at j*(j-1)/2 + i.
class AesaMatrix {
 public:
  AesaMatrix() = default;
  AesaMatrix(std::size_t n, std::vector<double> values, std::uint64_t build_evals)
      : n_(n), values_(std::move(values)), build_evals_(build_evals) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t stored_values() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }
  std::uint64_t build_distance_evals() const noexcept { return build_evals_; }

  double lookup(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    if (i > j) std::swap(i, j);
    return values_[j * (j - 1) / 2 + i];
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
  std::uint64_t build_evals_ = 0;
};

template <class Object, class Metric>
AesaMatrix aesa_build(const std::vector<Object>& objects, const Metric& metric) {
  const std::size_t n = objects.size();
  DistanceCounter<Metric> counter(metric);
  std::vector<double> values;
  values.reserve(n < 2 ? 0 : n * (n - 1) / 2);
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) values.push_back(counter(objects[i], objects[j]));
  }
  return AesaMatrix(n, std::move(values), counter.count());
}

/// AESA elimination search. The next pivot is the survivor with the smallest
/// accumulated lower bound max_p |e_p - d(u, p)|, ties to the lower index.
template <class Object, class Metric>
QueryStats aesa_range_search(const AesaMatrix& matrix, const std::vector<Object>& objects, const Object& query,
                             double r, const Metric& metric) {
  if (matrix.size() != objects.size()) throw ConfigError("aesa_range_search: matrix and dataset sizes differ");
  if (!(r >= 0.0)) throw ConfigError("aesa_range_search: radius must be non-negative");
  DistanceCounter<Metric> counter(metric);
  QueryStats stats;

  std::vector<ObjectId> alive(objects.size());
  std::iota(alive.begin(), alive.end(), ObjectId{0});
  std::vector<double> lower(objects.size(), 0.0);
  while (!alive.empty()) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < alive.size(); ++k) {
      if (lower[alive[k]] < lower[alive[best]]) best = k;
    }
    const ObjectId pivot = alive[best];
    const double e = counter(query, objects[pivot]);
    if (e <= r) stats.results.push_back(pivot);

    std::size_t kept = 0;
    for (const auto u : alive) {
      if (u == pivot) continue;
      const double d = matrix.lookup(u, pivot);
      ++stats.entries_inspected;
      if (eliminates(e, r, Interval{d, d})) continue;
      lower[u] = std::max({lower[u], e - d, d - e});
      alive[kept++] = u;
    }
    alive.resize(kept);
  }
  std::sort(stats.results.begin(), stats.results.end());
  stats.distance_evals = counter.count();
  return stats;
}

}  // namespace gnatty
