#pragma once

namespace gnatty {

/// Closed distance range [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace gnatty
