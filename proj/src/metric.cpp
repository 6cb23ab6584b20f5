#include "gnatty/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gnatty/errors.hpp"

namespace gnatty {

double euclidean_distance(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw ConfigError("euclidean_distance: dimension mismatch (" + std::to_string(u.size()) +
                      " vs " + std::to_string(v.size()) + ")");
  }
  if (u.empty()) throw ConfigError("euclidean_distance: zero-dimensional vectors");
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double diff = u[i] - v[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

std::size_t edit_distance(std::string_view s, std::string_view t) {
  if (s.size() < t.size()) std::swap(s, t);
  // t is the shorter string; row holds distances from a prefix of s to every prefix of t.
  std::vector<std::size_t> row(t.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= s.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const std::size_t above = row[j];
      const std::size_t substitute = diagonal + (s[i - 1] == t[j - 1] ? 0 : 1);
      row[j] = std::min({above + 1, row[j - 1] + 1, substitute});
      diagonal = above;
    }
  }
  return row[t.size()];
}

}  // namespace gnatty
