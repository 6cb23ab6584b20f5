#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gnatty/dataset.hpp"
#include "gnatty/fixed_point.hpp"
#include "gnatty/gnat_build.hpp"
#include "gnatty/gnat_tree.hpp"
#include "gnatty/query.hpp"

namespace gnatty::bench {

enum class MetricKind { kEuclidean, kEdit };
enum class IndexKind { kGnatty, kGnat, kAesa, kLc };
enum class CodecKind { kExact, kFixedPoint };

std::string to_string(MetricKind kind);
std::string to_string(IndexKind kind);
std::string to_string(CodecKind kind);
std::string to_string(SearchMode mode);

struct DataSource {
  std::string path;  // empty: synthetic data
  MetricKind metric = MetricKind::kEuclidean;
  std::size_t n = 2000;  // synthetic database size; queries are generated on top
  std::size_t dim = 10;
};

/// One experiment grid. Every list is a sweep axis.
struct ExperimentSpec {
  DataSource source;
  std::size_t queries = 100;
  std::vector<double> radii;            // absolute radii
  std::vector<std::size_t> target_ks;   // radius calibrated per query to the k-th neighbor
  std::vector<IndexKind> indexes{IndexKind::kGnatty};
  std::vector<PartitionKind> partitions;  // empty: ball for gnatty, hyperplane for gnat
  std::vector<std::size_t> constant_arities{8};
  std::vector<double> alphas{0.5};
  std::vector<double> gammas{0.9};
  std::vector<CodecKind> codecs{CodecKind::kExact};
  std::optional<FixedPointParams> fixed_point;  // empty: per-metric default
  std::vector<double> reduce_factors{1.0};
  std::vector<std::size_t> bucket_sizes{0};
  std::vector<SearchMode> searches{SearchMode::kGnat};
  std::vector<std::size_t> lc_buckets{16};
  std::vector<std::uint64_t> seeds{1};
  bool equal_memory = false;  // gnat rows use the constant arity matching each gnatty tree's entry count
  bool timing = false;        // wall-clock columns (not reproducible)
  std::size_t aesa_limit = 20000;
  bool verify = false;  // compare every query against a linear scan

  /// Throws ConfigError when a value lies outside its domain.
  void validate() const;
};

struct ResultRow {
  std::string dataset;
  std::string metric;
  std::uint64_t n = 0;
  std::uint64_t dim = 0;
  std::uint64_t queries = 0;
  std::uint64_t seed = 0;
  std::string index;
  std::string partition;  // empty when not applicable
  std::string arity;
  std::optional<double> gamma;
  std::string codec;
  std::optional<std::uint64_t> fp_bits;
  std::optional<std::uint64_t> fp_mag;
  std::optional<double> beta;
  std::optional<double> reduce;
  std::optional<std::uint64_t> bucket;
  std::optional<std::uint64_t> lc_bucket;
  std::string search;
  std::string radius_mode;  // "r" absolute, "k" calibrated
  double radius = 0.0;      // r, or k for calibrated rows
  double mean_results = 0.0;
  double median_evals = 0.0;
  double mean_evals = 0.0;
  std::uint64_t table_entries = 0;
  std::uint64_t table_bytes = 0;
  std::uint64_t build_evals = 0;
  std::optional<std::uint64_t> memory_target;
  double build_ms = 0.0;
  double query_ms = 0.0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

/// Distance from q to its target_k-th nearest object in the database.
template <class Object, class Metric>
double calibrate_radius(const std::vector<Object>& database, const Object& q, std::size_t target_k,
                        const Metric& metric) {
  if (target_k == 0 || target_k > database.size()) {
    throw ConfigError("calibrate_radius: target_k outside [1, " + std::to_string(database.size()) + "]");
  }
  std::vector<double> d(database.size());
  for (std::size_t i = 0; i < database.size(); ++i) d[i] = static_cast<double>(metric(q, database[i]));
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(target_k - 1), d.end());
  return d[target_k - 1];
}

/// Finds the constant arity whose tree has the entry count closest to
/// `target_entries` (binary search; ties to the smaller arity).
template <class Object, class Metric>
std::size_t match_constant_arity(const std::vector<Object>& database, const Metric& metric,
                                 std::size_t target_entries, BuildConfig config) {
  config.codec = ExactCodec{};
  const auto entries_for = [&](std::size_t m) {
    config.arity = ConstantArity{m};
    return table_entry_count(build(database, metric, config));
  };
  std::size_t lo = 2;
  std::size_t hi = std::max<std::size_t>(2, database.size());
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (entries_for(mid) < target_entries) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo > 2) {
    const auto above = entries_for(lo);
    const auto below = entries_for(lo - 1);
    const auto gap = [&](std::size_t e) { return e > target_entries ? e - target_entries : target_entries - e; };
    if (gap(below) <= gap(above)) return lo - 1;
  }
  return lo;
}

struct OracleTally {
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
};

/// Runs the full grid. Infeasible cells are skipped with a warning on `log`.
/// With spec.verify set, every answer is checked against a linear scan and
/// counted in `tally`; mismatches are also reported on `log`.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, std::ostream* log = nullptr,
                                      OracleTally* tally = nullptr);

/// Queries an existing tree (built over this spec's database split) for every
/// search mode and radius in the spec.
std::vector<ResultRow> run_on_tree(const ExperimentSpec& spec, const GnatTree& tree, std::ostream* log = nullptr,
                                   OracleTally* tally = nullptr);

/// Builds one tree over the database split of `seed`. A fixed-point codec in
/// `config` is resolved the same way sweeps resolve it.
GnatTree build_from_spec(const ExperimentSpec& spec, BuildConfig config, std::uint64_t seed);

std::vector<std::string> csv_columns(bool timing);
void write_csv(const std::vector<ResultRow>& rows, std::ostream& out, bool timing = false);
void emit_csv(const std::vector<ResultRow>& rows, const std::string& path, bool timing = false);
std::vector<ResultRow> read_csv(std::istream& in);

}  // namespace gnatty::bench
