#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gnatty {

using Vector = std::vector<double>;

/// Index of an object within a dataset; datasets are dense 0..n-1.
using ObjectId = std::uint32_t;

/// L2 distance. Throws ConfigError on dimension mismatch or empty vectors.
double euclidean_distance(std::span<const double> u, std::span<const double> v);

/// Unit-cost Levenshtein distance over bytes, O(min(|s|,|t|)) memory.
std::size_t edit_distance(std::string_view s, std::string_view t);

struct Euclidean {
  double operator()(std::span<const double> u, std::span<const double> v) const {
    return euclidean_distance(u, v);
  }
};

struct EditDistance {
  double operator()(std::string_view s, std::string_view t) const {
    return static_cast<double>(edit_distance(s, t));
  }
};

template <class M, class Object>
concept MetricFor = requires(const M& metric, const Object& a, const Object& b) {
  { metric(a, b) } -> std::convertible_to<double>;
};

/// Forwards to a metric and counts invocations. One counter belongs to one
/// build or one query; it is not meant to be shared between threads.
template <class Metric>
class DistanceCounter {
 public:
  explicit DistanceCounter(const Metric& metric) : metric_(&metric) {}

  template <class A, class B>
  double operator()(const A& a, const B& b) {
    ++count_;
    return static_cast<double>((*metric_)(a, b));
  }

  std::uint64_t count() const noexcept { return count_; }

 private:
  const Metric* metric_;
  std::uint64_t count_ = 0;
};

}  // namespace gnatty
