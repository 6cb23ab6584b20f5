#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "gnatty/errors.hpp"
#include "gnatty/metric.hpp"
#include "gnatty/query.hpp"

namespace gnatty {

struct Cluster {
  ObjectId center = 0;
  double covering_radius = 0.0;
  std::vector<ObjectId> members;  // excludes the center
};

class ClusterList {
 public:
  ClusterList() = default;
  ClusterList(std::vector<Cluster> clusters, std::uint64_t build_evals)
      : clusters_(std::move(clusters)), build_evals_(build_evals) {}

  const std::vector<Cluster>& clusters() const noexcept { return clusters_; }
  std::uint64_t build_distance_evals() const noexcept { return build_evals_; }

 private:
  std::vector<Cluster> clusters_;
  std::uint64_t build_evals_ = 0;
};

/// Each cluster takes the lowest remaining id as center and its bucket_size
/// nearest remaining objects (ties to the lower id) as members.
template <class Object, class Metric>
ClusterList lc_build(const std::vector<Object>& objects, const Metric& metric, std::size_t bucket_size) {
  if (bucket_size < 1) throw ConfigError("lc_build: bucket size must be at least 1");
  DistanceCounter<Metric> counter(metric);
  std::vector<Cluster> clusters;
  std::vector<ObjectId> remaining(objects.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = static_cast<ObjectId>(i);

  std::vector<std::pair<double, ObjectId>> scored;
  while (!remaining.empty()) {
    Cluster cluster;
    cluster.center = remaining.front();
    scored.clear();
    for (std::size_t k = 1; k < remaining.size(); ++k) {
      scored.emplace_back(counter(objects[cluster.center], objects[remaining[k]]), remaining[k]);
    }
    const std::size_t take = std::min(bucket_size, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end());
    for (std::size_t k = 0; k < take; ++k) {
      cluster.members.push_back(scored[k].second);
      cluster.covering_radius = std::max(cluster.covering_radius, scored[k].first);
    }
    std::sort(cluster.members.begin(), cluster.members.end());

    std::vector<ObjectId> rest;
    rest.reserve(scored.size() - take);
    for (std::size_t k = take; k < scored.size(); ++k) rest.push_back(scored[k].second);
    std::sort(rest.begin(), rest.end());
    remaining = std::move(rest);
    clusters.push_back(std::move(cluster));
  }
  return ClusterList(std::move(clusters), counter.count());
}

template <class Object, class Metric>
QueryStats lc_range_search(const ClusterList& list, const std::vector<Object>& objects, const Object& query,
                           double r, const Metric& metric) {
  if (!(r >= 0.0)) throw ConfigError("lc_range_search: radius must be non-negative");
  DistanceCounter<Metric> counter(metric);
  QueryStats stats;
  for (const auto& cluster : list.clusters()) {
    const double e = counter(query, objects[cluster.center]);
    if (e <= r) stats.results.push_back(cluster.center);
    if (e <= cluster.covering_radius + r) {
      for (const auto id : cluster.members) {
        if (counter(query, objects[id]) <= r) stats.results.push_back(id);
      }
    }
    // Later clusters only hold objects at distance >= covering radius from
    // this center, so a query ball strictly inside this ball cannot reach them.
    if (e < cluster.covering_radius - r) break;
  }
  std::sort(stats.results.begin(), stats.results.end());
  stats.distance_evals = counter.count();
  return stats;
}

}  // namespace gnatty
