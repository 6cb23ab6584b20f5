#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gnatty/errors.hpp"
#include "gnatty/gnat_tree.hpp"
#include "gnatty/metric.hpp"
#include "gnatty/query.hpp"

namespace gnatty {
namespace detail {

class RangeCollector {
 public:
  static constexpr bool kShrinking = false;

  explicit RangeCollector(double radius) : radius_(radius) {}

  double radius() const noexcept { return radius_; }
  void offer(ObjectId id, double d) {
    if (d <= radius_) hits_.push_back(id);
  }
  std::vector<ObjectId> take() {
    std::sort(hits_.begin(), hits_.end());
    return std::move(hits_);
  }

 private:
  double radius_;
  std::vector<ObjectId> hits_;
};

/// Keeps the k best (distance, id) pairs; the k-th best distance is the
/// current search radius.
class KnnCollector {
 public:
  static constexpr bool kShrinking = true;

  explicit KnnCollector(std::size_t k) : k_(k) {}

  double radius() const noexcept {
    return heap_.size() < k_ ? std::numeric_limits<double>::infinity() : heap_.top().first;
  }
  void offer(ObjectId id, double d) {
    const std::pair<double, ObjectId> candidate{d, id};
    if (heap_.size() < k_) {
      heap_.push(candidate);
    } else if (candidate < heap_.top()) {
      heap_.pop();
      heap_.push(candidate);
    }
  }
  std::vector<Neighbor> take() {
    std::vector<Neighbor> out(heap_.size());
    for (auto i = out.size(); i-- > 0; heap_.pop()) out[i] = {heap_.top().second, heap_.top().first};
    return out;
  }

 private:
  std::size_t k_;
  std::priority_queue<std::pair<double, ObjectId>> heap_;
};

template <class Object, class Metric, class Collector>
class TreeSearch {
 public:
  TreeSearch(const GnatTree& tree, std::span<const Object> objects, const Object& query, const Metric& metric,
             SearchMode mode, Collector& out)
      : tree_(tree), objects_(objects), query_(query), counter_(metric), mode_(mode), out_(out) {}

  void run() { visit(tree_.root()); }

  QueryStats stats() const {
    QueryStats stats;
    stats.distance_evals = counter_.count();
    stats.nodes_visited = nodes_visited_;
    stats.entries_inspected = entries_inspected_;
    return stats;
  }

 private:
  struct NodeState {
    std::vector<double> lower;  // lower bound on d(q, x) for x under each child
    std::vector<std::uint8_t> alive;
  };

  double measure(ObjectId id) { return counter_(query_, objects_[id]); }

  void visit(const Subtree& subtree) {
    if (subtree.is_node()) {
      visit_node(tree_.node(subtree.node));
      return;
    }
    for (const auto id : subtree.bucket) out_.offer(id, measure(id));
  }

  void visit_node(const GnatNode& node) {
    ++nodes_visited_;
    const std::size_t m = node.centers.size();
    NodeState state{std::vector<double>(m, 0.0), std::vector<std::uint8_t>(m, 1)};
    if (mode_ == SearchMode::kEgnat) {
      eliminate_egnat(node, state);
    } else {
      eliminate_gnat(node, state);
    }
    descend(node, state);
  }

  // Apply one measured pivot (table row) to every surviving child.
  void apply_pivot(const GnatNode& node, std::size_t row, double e, NodeState& state) {
    const double r = out_.radius();
    for (std::size_t j = 0; j < node.centers.size(); ++j) {
      if (!state.alive[j]) continue;
      const Interval iv = node.table.entry(row, j);
      ++entries_inspected_;
      if (eliminates(e, r, iv)) {
        state.alive[j] = 0;
      } else {
        state.lower[j] = std::max({state.lower[j], e - iv.hi, iv.lo - e});
      }
    }
  }

  bool beyond_radius(const NodeState& state, std::size_t j) const {
    return Collector::kShrinking && state.lower[j] > out_.radius();
  }

  void eliminate_gnat(const GnatNode& node, NodeState& state) {
    const std::size_t m = node.centers.size();
    std::vector<std::uint8_t> tried(m, 0);
    for (;;) {
      // Next pivot: smallest lower bound among untried survivors, ties to the lower object id.
      std::size_t best = m;
      for (const auto p : node.measuring) {
        if (tried[p] || !state.alive[p]) continue;
        if (beyond_radius(state, p)) {
          state.alive[p] = 0;
          continue;
        }
        if (best == m || state.lower[p] < state.lower[best] ||
            (state.lower[p] == state.lower[best] && node.centers[p] < node.centers[best])) {
          best = p;
        }
      }
      if (best == m) break;
      const double e = measure(node.centers[best]);
      tried[best] = 1;
      out_.offer(node.centers[best], e);
      apply_pivot(node, static_cast<std::size_t>(node.row_of[best]), e, state);
    }
    if (node.measuring.size() == m) return;
    // Centers without a table row are only measured, never used for pruning.
    for (std::size_t j = 0; j < m; ++j) {
      if (tried[j] || !state.alive[j]) continue;
      if (beyond_radius(state, j)) {
        state.alive[j] = 0;
        continue;
      }
      out_.offer(node.centers[j], measure(node.centers[j]));
    }
  }

  void eliminate_egnat(const GnatNode& node, NodeState& state) {
    const std::size_t m = node.centers.size();
    std::vector<double> e(m);
    for (std::size_t j = 0; j < m; ++j) {
      e[j] = measure(node.centers[j]);
      out_.offer(node.centers[j], e[j]);
    }
    std::size_t nearest = node.measuring.front();
    for (const auto p : node.measuring) {
      if (e[p] < e[nearest]) nearest = p;
    }
    apply_pivot(node, static_cast<std::size_t>(node.row_of[nearest]), e[nearest], state);
  }

  void descend(const GnatNode& node, const NodeState& state) {
    std::vector<std::uint32_t> order;
    for (std::uint32_t j = 0; j < node.children.size(); ++j) {
      if (state.alive[j] && !node.children[j].empty()) order.push_back(j);
    }
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return state.lower[a] < state.lower[b] || (state.lower[a] == state.lower[b] && a < b);
    });
    for (const auto j : order) {
      if (beyond_radius(state, j)) continue;
      visit(node.children[j]);
    }
  }

  const GnatTree& tree_;
  std::span<const Object> objects_;
  const Object& query_;
  DistanceCounter<Metric> counter_;
  SearchMode mode_;
  Collector& out_;
  std::uint64_t nodes_visited_ = 0;
  std::uint64_t entries_inspected_ = 0;
};

template <class Object>
void check_tree_matches(const GnatTree& tree, const std::vector<Object>& objects) {
  if (tree.size() != objects.size()) {
    throw ConfigError("tree indexes " + std::to_string(tree.size()) + " objects but " +
                      std::to_string(objects.size()) + " were supplied");
  }
}

}  // namespace detail

/// All objects within distance r of `query`. Exact for every tree variant.
template <class Object, class Metric>
QueryStats range_search(const GnatTree& tree, const std::vector<Object>& objects, const Object& query, double r,
                        const Metric& metric, SearchMode mode = SearchMode::kGnat) {
  detail::check_tree_matches(tree, objects);
  if (!(r >= 0.0)) throw ConfigError("range_search: radius must be non-negative");
  detail::RangeCollector out(r);
  detail::TreeSearch<Object, Metric, detail::RangeCollector> search(tree, objects, query, metric, mode, out);
  search.run();
  auto stats = search.stats();
  stats.results = out.take();
  return stats;
}

template <class Object, class Metric>
QueryStats gnat_range_search(const GnatTree& tree, const std::vector<Object>& objects, const Object& query, double r,
                             const Metric& metric) {
  return range_search(tree, objects, query, r, metric, SearchMode::kGnat);
}

template <class Object, class Metric>
QueryStats egnat_range_search(const GnatTree& tree, const std::vector<Object>& objects, const Object& query,
                              double r, const Metric& metric) {
  return range_search(tree, objects, query, r, metric, SearchMode::kEgnat);
}

/// The k nearest objects, by a range search whose radius shrinks to the
/// current k-th best distance. Ties at equal distance go to the lower id.
template <class Object, class Metric>
KnnResult knn_search(const GnatTree& tree, const std::vector<Object>& objects, const Object& query, std::size_t k,
                     const Metric& metric, SearchMode mode = SearchMode::kGnat) {
  detail::check_tree_matches(tree, objects);
  if (k == 0 || k > objects.size()) {
    throw ConfigError("knn_search: k=" + std::to_string(k) + " outside [1, " + std::to_string(objects.size()) + "]");
  }
  detail::KnnCollector out(k);
  detail::TreeSearch<Object, Metric, detail::KnnCollector> search(tree, objects, query, metric, mode, out);
  search.run();
  KnnResult result;
  result.stats = search.stats();
  result.neighbors = out.take();
  for (const auto& nb : result.neighbors) result.stats.results.push_back(nb.id);
  return result;
}

}  // namespace gnatty
