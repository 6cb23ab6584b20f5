#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "gnatty/metric.hpp"
#include "gnatty/query.hpp"

namespace gnatty {

/// Brute-force reference answers, used to check the indexes.
template <class Object, class Metric>
std::vector<ObjectId> linear_range_scan(const std::vector<Object>& objects, const Object& query, double r,
                                        const Metric& metric) {
  std::vector<ObjectId> hits;
  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (static_cast<double>(metric(query, objects[i])) <= r) hits.push_back(static_cast<ObjectId>(i));
  }
  return hits;
}

template <class Object, class Metric>
std::vector<Neighbor> brute_force_knn(const std::vector<Object>& objects, const Object& query, std::size_t k,
                                      const Metric& metric) {
  std::vector<std::pair<double, ObjectId>> all;
  all.reserve(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    all.emplace_back(static_cast<double>(metric(query, objects[i])), static_cast<ObjectId>(i));
  }
  std::sort(all.begin(), all.end());
  all.resize(std::min(k, all.size()));
  std::vector<Neighbor> out;
  for (const auto& [d, id] : all) out.push_back({id, d});
  return out;
}

}  // namespace gnatty
