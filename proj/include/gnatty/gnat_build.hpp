#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "gnatty/errors.hpp"
#include "gnatty/gnat_tree.hpp"
#include "gnatty/metric.hpp"
#include "gnatty/random.hpp"

namespace gnatty {

/// Per center, the positions (into the node's object list) assigned to it.
using Cells = std::vector<std::vector<std::uint32_t>>;

/// Distances from a node's measuring pivots to its objects that were already
/// evaluated while partitioning, so the range table does not pay for them twice.
class KnownDistances {
 public:
  KnownDistances(std::span<const std::int32_t> row_of, std::size_t rows, std::size_t objects)
      : row_of_(row_of.begin(), row_of.end()),
        objects_(objects),
        values_(rows * objects, std::numeric_limits<double>::quiet_NaN()) {}

  void record(std::size_t center, std::size_t object, double d) {
    if (const auto row = row_of_[center]; row >= 0) values_[static_cast<std::size_t>(row) * objects_ + object] = d;
  }

  /// NaN when unknown.
  double lookup(std::size_t center, std::size_t object) const {
    const auto row = row_of_[center];
    return row < 0 ? std::numeric_limits<double>::quiet_NaN()
                   : values_[static_cast<std::size_t>(row) * objects_ + object];
  }

 private:
  std::vector<std::int32_t> row_of_;
  std::size_t objects_;
  std::vector<double> values_;
};

/// m distinct objects sampled uniformly without replacement, in draw order.
inline std::vector<ObjectId> select_pivots(std::span<const ObjectId> objects, std::size_t m, Rng& rng) {
  if (m > objects.size()) throw std::logic_error("select_pivots: more pivots than objects");
  std::vector<ObjectId> pool(objects.begin(), objects.end());
  partial_shuffle(std::span<ObjectId>(pool), m, rng);
  pool.resize(m);
  return pool;
}

/// Assigns each object to its nearest center, ties to the lower center
/// position. `dist(center_id, object_id)` is evaluated |objects|*|centers| times.
template <class Dist>
Cells hyperplane_partition(std::span<const ObjectId> objects, std::span<const ObjectId> centers, Dist&& dist,
                           KnownDistances* known = nullptr) {
  Cells cells(centers.size());
  for (std::size_t x = 0; x < objects.size(); ++x) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i) {
      const double d = dist(centers[i], objects[x]);
      if (known) known->record(i, x, d);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    cells[best].push_back(static_cast<std::uint32_t>(x));
  }
  return cells;
}

/// Capacity of each of the first m-1 balls: max(1, ceil(n^gamma / m)).
inline std::size_t ball_capacity(std::size_t n, std::size_t m, double gamma) {
  const double raw = std::pow(static_cast<double>(n), gamma) / static_cast<double>(m);
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw)));
}

/// Ball partitioning: centers 0..m-2 in turn take the `ball_capacity` nearest
/// objects not yet taken (ties to the lower object id); the last center gets
/// whatever is left.
template <class Dist>
Cells ball_partition(std::span<const ObjectId> objects, std::span<const ObjectId> centers, double gamma,
                     Dist&& dist, KnownDistances* known = nullptr) {
  const std::size_t m = centers.size();
  Cells cells(m);
  if (m == 0) return cells;
  const std::size_t capacity = ball_capacity(objects.size(), m, gamma);

  std::vector<std::uint32_t> remaining(objects.size());
  std::iota(remaining.begin(), remaining.end(), std::uint32_t{0});
  std::vector<std::pair<double, std::uint32_t>> scored;
  for (std::size_t i = 0; i + 1 < m && !remaining.empty(); ++i) {
    scored.clear();
    for (const auto x : remaining) {
      const double d = dist(centers[i], objects[x]);
      if (known) known->record(i, x, d);
      scored.emplace_back(d, x);
    }
    const std::size_t take = std::min(capacity, scored.size());
    const auto closer = [&](const auto& a, const auto& b) {
      return a.first < b.first || (a.first == b.first && objects[a.second] < objects[b.second]);
    };
    if (take < scored.size()) {
      std::nth_element(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), closer);
    }
    auto& cell = cells[i];
    for (std::size_t k = 0; k < take; ++k) cell.push_back(scored[k].second);
    std::sort(cell.begin(), cell.end());

    std::vector<std::uint32_t> rest;
    rest.reserve(remaining.size() - take);
    std::set_difference(remaining.begin(), remaining.end(), cell.begin(), cell.end(), std::back_inserter(rest));
    remaining = std::move(rest);
  }
  cells[m - 1] = std::move(remaining);
  return cells;
}

/// Range table with one row per measuring pivot (a center position) and one
/// column per center: entry (i, j) = [min, max] of d(center[measuring[i]], x)
/// over x in cells[j] plus center j itself.
template <class Dist>
RangeTable compute_range_table(std::span<const std::uint32_t> measuring, std::span<const ObjectId> objects,
                               std::span<const ObjectId> centers, const Cells& cells, Dist&& dist,
                               const KnownDistances* known = nullptr) {
  const std::size_t m = centers.size();
  RangeTable table(measuring.size(), m);
  std::vector<double> between(m * m, std::numeric_limits<double>::quiet_NaN());
  const auto center_distance = [&](std::size_t a, std::size_t b) {
    if (a == b) return 0.0;
    auto& slot = between[std::min(a, b) * m + std::max(a, b)];
    if (std::isnan(slot)) slot = dist(centers[a], centers[b]);
    return slot;
  };
  for (std::size_t row = 0; row < measuring.size(); ++row) {
    const std::size_t p = measuring[row];
    for (std::size_t j = 0; j < m; ++j) {
      const double own = center_distance(p, j);
      Interval iv{own, own};
      for (const auto x : cells[j]) {
        double d = known ? known->lookup(p, x) : std::numeric_limits<double>::quiet_NaN();
        if (std::isnan(d)) d = dist(centers[p], objects[x]);
        iv.lo = std::min(iv.lo, d);
        iv.hi = std::max(iv.hi, d);
      }
      table.set(row, j, iv);
    }
  }
  return table;
}

namespace detail {

template <class Dist>
class TreeBuilder {
 public:
  TreeBuilder(const BuildConfig& config, Dist& dist)
      : config_(config),
        dist_(dist),
        pivot_rng_(Rng::for_stream(config.seed, Stream::kPivots)),
        reduce_rng_(Rng::for_stream(config.seed, Stream::kReducedTable)) {}

  Subtree build(std::vector<ObjectId> ids) {
    if (ids.size() <= std::max<std::size_t>(config_.bucket_size, 1)) return Subtree{-1, std::move(ids)};

    const std::size_t index = nodes_.size();
    nodes_.emplace_back();
    GnatNode node;
    const std::size_t m = arity_for(ids.size(), config_.arity);
    node.centers = select_pivots(ids, m, pivot_rng_);
    node.measuring = select_measuring(m);
    node.index_rows();

    std::vector<ObjectId> sorted_centers = node.centers;
    std::sort(sorted_centers.begin(), sorted_centers.end());
    std::vector<ObjectId> rest;
    rest.reserve(ids.size() - m);
    std::set_difference(ids.begin(), ids.end(), sorted_centers.begin(), sorted_centers.end(),
                        std::back_inserter(rest));
    ids.clear();
    ids.shrink_to_fit();

    Cells cells;
    {
      KnownDistances known(node.row_of, node.measuring.size(), rest.size());
      cells = config_.partition == PartitionKind::kBall
                  ? ball_partition(rest, node.centers, config_.gamma, dist_, &known)
                  : hyperplane_partition(rest, node.centers, dist_, &known);
      node.table = compute_range_table(node.measuring, rest, node.centers, cells, dist_, &known);
    }

    std::vector<std::vector<ObjectId>> child_ids(m);
    for (std::size_t j = 0; j < m; ++j) {
      child_ids[j].reserve(cells[j].size());
      for (const auto x : cells[j]) child_ids[j].push_back(rest[x]);
    }
    cells.clear();
    rest.clear();
    rest.shrink_to_fit();

    node.children.reserve(m);
    for (auto& child : child_ids) node.children.push_back(build(std::move(child)));
    nodes_[index] = std::move(node);
    return Subtree{static_cast<std::int32_t>(index), {}};
  }

  std::vector<GnatNode> take_nodes() { return std::move(nodes_); }

 private:
  std::vector<std::uint32_t> select_measuring(std::size_t m) {
    std::vector<std::uint32_t> positions(m);
    std::iota(positions.begin(), positions.end(), std::uint32_t{0});
    if (config_.reduce_factor == 1.0) return positions;
    const auto keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(static_cast<double>(m) / config_.reduce_factor)));
    partial_shuffle(std::span<std::uint32_t>(positions), keep, reduce_rng_);
    positions.resize(keep);
    std::sort(positions.begin(), positions.end());
    return positions;
  }

  const BuildConfig& config_;
  Dist& dist_;
  Rng pivot_rng_;
  Rng reduce_rng_;
  std::vector<GnatNode> nodes_;
};

}  // namespace detail

/// Builds a GNAT over objects[0..n). Throws ConfigError for an empty dataset
/// or an invalid configuration.
template <class Object, class Metric>
GnatTree build(std::span<const Object> objects, const Metric& metric, const BuildConfig& config) {
  config.validate();
  if (objects.empty()) throw ConfigError("build: dataset is empty");
  if (objects.size() > std::numeric_limits<ObjectId>::max()) throw ConfigError("build: too many objects");

  DistanceCounter<Metric> counter(metric);
  auto dist = [&](ObjectId a, ObjectId b) { return counter(objects[a], objects[b]); };
  std::vector<ObjectId> ids(objects.size());
  std::iota(ids.begin(), ids.end(), ObjectId{0});

  detail::TreeBuilder<decltype(dist)> builder(config, dist);
  Subtree root = builder.build(std::move(ids));

  BuildConfig stored = config;
  stored.codec = ExactCodec{};
  GnatTree tree(stored, objects.size(), std::move(root), builder.take_nodes(), counter.count());
  if (const auto* fp = std::get_if<FixedPointParams>(&config.codec)) tree.encode_tables(*fp);
  return tree;
}

template <class Object, class Metric>
GnatTree build(const std::vector<Object>& objects, const Metric& metric, const BuildConfig& config) {
  return build<Object, Metric>(std::span<const Object>(objects), metric, config);
}

}  // namespace gnatty
