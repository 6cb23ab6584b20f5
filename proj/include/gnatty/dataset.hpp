#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gnatty/errors.hpp"
#include "gnatty/metric.hpp"
#include "gnatty/random.hpp"

namespace gnatty {

/// Objects addressed by position; the position is the object's stable id.
template <class Object>
using Dataset = std::vector<Object>;

/// n vectors with coordinates drawn uniformly from [0, 1).
Dataset<Vector> generate_uniform_vectors(std::size_t n, std::size_t dim, std::uint64_t seed);

/// n lowercase ASCII words with lengths uniform in [min_len, max_len].
Dataset<std::string> generate_random_strings(std::size_t n, std::uint64_t seed,
                                             std::size_t min_len = 4, std::size_t max_len = 12);

// Vector files: first line "<dim> <n>", then n lines of dim reals.
Dataset<Vector> read_vectors(std::istream& in, const std::string& source = "<stream>");
Dataset<Vector> load_vectors(const std::filesystem::path& path);

// String files: one UTF-8 object per line.
Dataset<std::string> read_strings(std::istream& in, const std::string& source = "<stream>");
Dataset<std::string> load_strings(const std::filesystem::path& path);

bool is_valid_utf8(std::string_view text);

template <class Object>
struct QuerySplit {
  Dataset<Object> queries;
  Dataset<Object> database;
};

/// Picks q objects uniformly without replacement as queries; the rest, in
/// their original order, form the database.
template <class Object>
QuerySplit<Object> split_queries(const Dataset<Object>& data, std::size_t q, std::uint64_t seed) {
  if (q > data.size()) {
    throw ConfigError("split_queries: " + std::to_string(q) + " queries requested from " +
                      std::to_string(data.size()) + " objects");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto rng = Rng::for_stream(seed, Stream::kQuerySplit);
  partial_shuffle(std::span<std::size_t>(order), q, rng);

  std::vector<bool> is_query(data.size(), false);
  QuerySplit<Object> split;
  split.queries.reserve(q);
  for (std::size_t i = 0; i < q; ++i) {
    is_query[order[i]] = true;
    split.queries.push_back(data[order[i]]);
  }
  split.database.reserve(data.size() - q);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!is_query[i]) split.database.push_back(data[i]);
  }
  return split;
}

}  // namespace gnatty
