#pragma once

#include <cstdint>
#include <vector>

#include "gnatty/interval.hpp"
#include "gnatty/metric.hpp"

namespace gnatty {

enum class SearchMode : std::uint8_t {
  kGnat = 0,   // pivot-by-pivot elimination inside each node
  kEgnat = 1,  // measure every center, prune with the nearest center's row
};

struct QueryStats {
  std::vector<ObjectId> results;  // ascending ids for range queries
  std::uint64_t distance_evals = 0;
  std::uint64_t nodes_visited = 0;
  std::uint64_t entries_inspected = 0;
};

struct Neighbor {
  ObjectId id = 0;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

struct KnnResult {
  std::vector<Neighbor> neighbors;  // ascending distance, ties by id
  QueryStats stats;
};

enum class PruneDecision : std::uint8_t { kKeep, kEliminate };

/// [e - r, e + r] against a closed interval; touching counts as intersecting.
inline bool eliminates(double e, double r, const Interval& iv) { return e - r > iv.hi || e + r < iv.lo; }

inline PruneDecision prune_check(double e, double r, const Interval& iv) {
  return eliminates(e, r, iv) ? PruneDecision::kEliminate : PruneDecision::kKeep;
}

}  // namespace gnatty
