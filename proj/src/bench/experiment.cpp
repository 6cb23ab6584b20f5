#include "gnatty/bench/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <numeric>
#include <ostream>

#include "gnatty/aesa.hpp"
#include "gnatty/linear_scan.hpp"
#include "gnatty/list_of_clusters.hpp"
#include "gnatty/search.hpp"

namespace gnatty::bench {

std::string to_string(MetricKind kind) { return kind == MetricKind::kEdit ? "edit" : "euclidean"; }

std::string to_string(IndexKind kind) {
  switch (kind) {
    case IndexKind::kGnatty: return "gnatty";
    case IndexKind::kGnat: return "gnat";
    case IndexKind::kAesa: return "aesa";
    case IndexKind::kLc: return "lc";
  }
  return "?";
}

std::string to_string(CodecKind kind) { return kind == CodecKind::kFixedPoint ? "fp" : "exact"; }

std::string to_string(SearchMode mode) { return mode == SearchMode::kEgnat ? "egnat" : "gnat"; }

void ExperimentSpec::validate() const {
  if (source.path.empty() && source.metric == MetricKind::kEuclidean && source.dim == 0) {
    throw ConfigError("dimension must be at least 1");
  }
  if (radii.empty() && target_ks.empty()) throw ConfigError("give at least one radius or target-k");
  for (const double r : radii) {
    if (!(r >= 0.0)) throw ConfigError("radius must be non-negative");
  }
  for (const auto k : target_ks) {
    if (k == 0) throw ConfigError("target-k must be at least 1");
  }
  if (indexes.empty() || codecs.empty() || searches.empty() || seeds.empty()) {
    throw ConfigError("index, codec, search and seed lists must not be empty");
  }
  BuildConfig probe;
  for (const auto m : constant_arities) {
    probe.arity = ConstantArity{m};
    probe.validate();
  }
  for (const double a : alphas) {
    probe.arity = PowerArity{a};
    probe.validate();
  }
  probe.arity = PowerArity{0.5};
  for (const double g : gammas) {
    probe.gamma = g;
    probe.validate();
  }
  probe.gamma = 0.9;
  for (const double a : reduce_factors) {
    probe.reduce_factor = a;
    probe.validate();
  }
  for (const auto b : lc_buckets) {
    if (b == 0) throw ConfigError("LC bucket size must be at least 1");
  }
  if (fixed_point) fixed_point->validate();
}

namespace {

using Clock = std::chrono::steady_clock;

double millis_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
}

struct RadiusSet {
  std::string mode;
  double value = 0.0;
  std::vector<double> per_query;
  std::vector<std::vector<ObjectId>> expected;  // filled when verifying
};

template <class Object, class Metric>
class Runner {
 public:
  Runner(const ExperimentSpec& spec, std::ostream* log, std::vector<ResultRow>& rows, OracleTally* tally)
      : spec_(spec), log_(log), rows_(rows), tally_(tally) {}

  /// Queries a previously built tree instead of sweeping the index grid.
  void run_loaded(const Dataset<Object>& data, const std::string& label, std::size_t dim, std::uint64_t seed,
                  const GnatTree& tree) {
    if (!prepare(data, label, dim, seed)) return;
    if (tree.size() != split_.database.size()) {
      throw ConfigError("tree indexes " + std::to_string(tree.size()) + " objects but the database has " +
                        std::to_string(split_.database.size()));
    }
    const bool constant = std::holds_alternative<ConstantArity>(tree.config().arity);
    encoded_tree_rows(constant ? IndexKind::kGnat : IndexKind::kGnatty, tree, 0.0, std::nullopt);
  }

  void run(const Dataset<Object>& data, const std::string& label, std::size_t dim, std::uint64_t seed) {
    if (!prepare(data, label, dim, seed)) return;

    for (const auto kind : spec_.indexes) {
      switch (kind) {
        case IndexKind::kGnatty:
          for (const double alpha : spec_.alphas) tree_cells(kind, PowerArity{alpha});
          break;
        case IndexKind::kGnat:
          if (spec_.equal_memory) break;  // produced alongside the gnatty cells
          for (const auto m : spec_.constant_arities) {
            if (m > split_.database.size()) {
              warn("constant arity " + std::to_string(m) + " exceeds database size; cell skipped");
              continue;
            }
            tree_cells(kind, ConstantArity{m});
          }
          break;
        case IndexKind::kAesa:
          aesa_cell();
          break;
        case IndexKind::kLc:
          for (const auto b : spec_.lc_buckets) lc_cell(b);
          break;
      }
    }
  }

 private:
  bool prepare(const Dataset<Object>& data, const std::string& label, std::size_t dim, std::uint64_t seed) {
    label_ = label;
    dim_ = dim;
    seed_ = seed;
    split_ = split_queries(data, spec_.queries, seed);
    if (split_.database.empty()) {
      warn("database is empty after taking " + std::to_string(spec_.queries) + " queries; seed skipped");
      return false;
    }
    prepare_radii();
    return !radius_sets_.empty();
  }

  void warn(const std::string& message) const {
    if (log_) *log_ << "warning: " << message << '\n';
  }

  void prepare_radii() {
    radius_sets_.clear();
    const Metric metric;
    for (const double r : spec_.radii) {
      radius_sets_.push_back({"r", r, std::vector<double>(split_.queries.size(), r), {}});
    }
    for (const auto k : spec_.target_ks) {
      if (k > split_.database.size()) {
        warn("target-k " + std::to_string(k) + " exceeds database size; skipped");
        continue;
      }
      RadiusSet set{"k", static_cast<double>(k), {}, {}};
      for (const auto& q : split_.queries) set.per_query.push_back(calibrate_radius(split_.database, q, k, metric));
      radius_sets_.push_back(std::move(set));
    }
    if (!spec_.verify) return;
    for (auto& set : radius_sets_) {
      for (std::size_t i = 0; i < split_.queries.size(); ++i) {
        set.expected.push_back(linear_range_scan(split_.database, split_.queries[i], set.per_query[i], metric));
      }
    }
  }

  void check(const ResultRow& row, const RadiusSet& set, std::size_t i, const QueryStats& stats) {
    if (!spec_.verify) return;
    if (tally_) ++tally_->checked;
    if (stats.results == set.expected[i]) return;
    if (tally_) ++tally_->mismatches;
    if (log_) {
      *log_ << "mismatch: index=" << row.index << " partition=" << row.partition << " arity=" << row.arity
            << " codec=" << row.codec << " search=" << row.search << " seed=" << row.seed << " query=" << i
            << " expected " << set.expected[i].size() << " results, got " << stats.results.size() << '\n';
    }
  }

  ResultRow base_row(IndexKind kind) const {
    ResultRow row;
    row.dataset = label_;
    row.metric = to_string(spec_.source.metric);
    row.n = split_.database.size();
    row.dim = dim_;
    row.queries = split_.queries.size();
    row.seed = seed_;
    row.index = to_string(kind);
    return row;
  }

  template <class Query>
  void run_queries(const ResultRow& base, Query&& query) {
    for (const auto& set : radius_sets_) {
      ResultRow row = base;
      row.radius_mode = set.mode;
      row.radius = set.value;
      std::vector<double> evals;
      double results = 0.0;
      const auto start = Clock::now();
      for (std::size_t i = 0; i < split_.queries.size(); ++i) {
        const QueryStats stats = query(split_.queries[i], set.per_query[i]);
        check(row, set, i, stats);
        evals.push_back(static_cast<double>(stats.distance_evals));
        results += static_cast<double>(stats.results.size());
      }
      if (spec_.timing) row.query_ms = millis_since(start);
      const double count = static_cast<double>(std::max<std::size_t>(1, evals.size()));
      row.mean_results = results / count;
      row.mean_evals = std::accumulate(evals.begin(), evals.end(), 0.0) / count;
      row.median_evals = median(std::move(evals));
      rows_.push_back(std::move(row));
    }
  }

  FixedPointParams fixed_point_for(const GnatTree& exact_tree) const {
    if (spec_.fixed_point) return *spec_.fixed_point;
    if (spec_.source.metric == MetricKind::kEdit) return integer_range_params(exact_tree.max_table_distance());
    return FixedPointParams{};
  }

  struct Built {
    GnatTree tree;
    double build_ms = 0.0;
  };

  Built build_tree(const BuildConfig& config) const {
    const auto start = Clock::now();
    Built built{build(split_.database, Metric{}, config), 0.0};
    if (spec_.timing) built.build_ms = millis_since(start);
    return built;
  }

  // Rows for every codec and search mode over one built (exact) tree.
  void tree_rows(IndexKind kind, const Built& built, std::optional<std::uint64_t> memory_target) {
    for (const auto codec : spec_.codecs) {
      GnatTree tree = built.tree;
      if (codec == CodecKind::kFixedPoint) tree.encode_tables(fixed_point_for(built.tree));
      encoded_tree_rows(kind, tree, built.build_ms, memory_target);
    }
  }

  void encoded_tree_rows(IndexKind kind, const GnatTree& tree, double build_ms,
                         std::optional<std::uint64_t> memory_target) {
    const auto& config = tree.config();
    ResultRow base = base_row(kind);
    base.partition = describe(config.partition);
    base.arity = describe(config.arity);
    if (config.partition == PartitionKind::kBall) base.gamma = config.gamma;
    base.reduce = config.reduce_factor;
    base.bucket = config.bucket_size;
    if (const auto* params = std::get_if<FixedPointParams>(&config.codec)) {
      base.codec = to_string(CodecKind::kFixedPoint);
      base.fp_bits = static_cast<std::uint64_t>(params->total_bits);
      base.fp_mag = static_cast<std::uint64_t>(params->magnitude_bits);
      base.beta = params->beta;
    } else {
      base.codec = to_string(CodecKind::kExact);
    }
    base.table_entries = table_entry_count(tree);
    base.table_bytes = table_bytes(tree);
    base.build_evals = tree.build_distance_evals();
    base.memory_target = memory_target;
    base.build_ms = build_ms;
    for (const auto mode : spec_.searches) {
      ResultRow row = base;
      row.search = to_string(mode);
      run_queries(row, [&](const Object& q, double r) {
        return range_search(tree, split_.database, q, r, Metric{}, mode);
      });
    }
  }

  void tree_cells(IndexKind kind, const ArityPolicy& arity) {
    std::vector<PartitionKind> partitions = spec_.partitions;
    if (partitions.empty()) {
      partitions.push_back(kind == IndexKind::kGnatty ? PartitionKind::kBall : PartitionKind::kHyperplane);
    }
    for (const auto partition : partitions) {
      const std::vector<double> gammas =
          partition == PartitionKind::kBall ? spec_.gammas : std::vector<double>{spec_.gammas.front()};
      for (const double gamma : gammas) {
        for (const double reduce : spec_.reduce_factors) {
          for (const auto bucket : spec_.bucket_sizes) {
            BuildConfig config;
            config.partition = partition;
            config.arity = arity;
            config.gamma = gamma;
            config.reduce_factor = reduce;
            config.bucket_size = bucket;
            config.seed = seed_;
            const Built built = build_tree(config);
            tree_rows(kind, built, std::nullopt);
            if (kind == IndexKind::kGnatty && spec_.equal_memory && wants(IndexKind::kGnat)) {
              equal_memory_cell(config, table_entry_count(built.tree));
            }
          }
        }
      }
    }
  }

  void equal_memory_cell(BuildConfig config, std::size_t target_entries) {
    config.partition = PartitionKind::kHyperplane;
    const auto m = match_constant_arity(split_.database, Metric{}, target_entries, config);
    config.arity = ConstantArity{m};
    tree_rows(IndexKind::kGnat, build_tree(config), target_entries);
  }

  bool wants(IndexKind kind) const {
    return std::find(spec_.indexes.begin(), spec_.indexes.end(), kind) != spec_.indexes.end();
  }

  void aesa_cell() {
    if (split_.database.size() > spec_.aesa_limit) {
      warn("AESA matrix for " + std::to_string(split_.database.size()) + " objects exceeds the limit of " +
           std::to_string(spec_.aesa_limit) + "; cell skipped");
      return;
    }
    const auto start = Clock::now();
    const auto matrix = aesa_build(split_.database, Metric{});
    ResultRow base = base_row(IndexKind::kAesa);
    if (spec_.timing) base.build_ms = millis_since(start);
    base.codec = "exact";
    base.table_entries = matrix.stored_values();
    base.table_bytes = matrix.stored_values() * 4;
    base.build_evals = matrix.build_distance_evals();
    run_queries(base, [&](const Object& q, double r) {
      return aesa_range_search(matrix, split_.database, q, r, Metric{});
    });
  }

  void lc_cell(std::size_t bucket) {
    const auto start = Clock::now();
    const auto list = lc_build(split_.database, Metric{}, bucket);
    ResultRow base = base_row(IndexKind::kLc);
    if (spec_.timing) base.build_ms = millis_since(start);
    base.codec = "exact";
    base.lc_bucket = bucket;
    base.table_entries = list.clusters().size();
    base.table_bytes = list.clusters().size() * 4;
    base.build_evals = list.build_distance_evals();
    run_queries(base, [&](const Object& q, double r) {
      return lc_range_search(list, split_.database, q, r, Metric{});
    });
  }

  const ExperimentSpec& spec_;
  std::ostream* log_;
  std::vector<ResultRow>& rows_;
  OracleTally* tally_;
  std::string label_;
  std::size_t dim_ = 0;
  std::uint64_t seed_ = 0;
  QuerySplit<Object> split_;
  std::vector<RadiusSet> radius_sets_;
};

}  // namespace

namespace {

std::string source_label(const DataSource& source) {
  if (!source.path.empty()) return std::filesystem::path(source.path).filename().string();
  return source.metric == MetricKind::kEdit ? "random-strings" : "uniform";
}

template <class Body>
void for_each_seed(const ExperimentSpec& spec, Body&& body) {
  const auto& source = spec.source;
  const std::string label = source_label(source);
  if (source.metric == MetricKind::kEuclidean) {
    Dataset<Vector> file_data;
    if (!source.path.empty()) file_data = load_vectors(source.path);
    for (const auto seed : spec.seeds) {
      const auto data =
          source.path.empty() ? generate_uniform_vectors(source.n + spec.queries, source.dim, seed) : file_data;
      const std::size_t dim = data.empty() ? source.dim : data.front().size();
      body(static_cast<Runner<Vector, Euclidean>*>(nullptr), data, label, dim, seed);
    }
  } else {
    Dataset<std::string> file_data;
    if (!source.path.empty()) file_data = load_strings(source.path);
    for (const auto seed : spec.seeds) {
      const auto data = source.path.empty() ? generate_random_strings(source.n + spec.queries, seed) : file_data;
      body(static_cast<Runner<std::string, EditDistance>*>(nullptr), data, label, std::size_t{0}, seed);
    }
  }
}

}  // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, std::ostream* log, OracleTally* tally) {
  spec.validate();
  std::vector<ResultRow> rows;
  for_each_seed(spec, [&](auto* tag, const auto& data, const std::string& label, std::size_t dim, std::uint64_t seed) {
    using R = std::remove_pointer_t<decltype(tag)>;
    R(spec, log, rows, tally).run(data, label, dim, seed);
  });
  return rows;
}

std::vector<ResultRow> run_on_tree(const ExperimentSpec& spec, const GnatTree& tree, std::ostream* log,
                                   OracleTally* tally) {
  spec.validate();
  std::vector<ResultRow> rows;
  for_each_seed(spec, [&](auto* tag, const auto& data, const std::string& label, std::size_t dim, std::uint64_t seed) {
    using R = std::remove_pointer_t<decltype(tag)>;
    R(spec, log, rows, tally).run_loaded(data, label, dim, seed, tree);
  });
  return rows;
}

GnatTree build_from_spec(const ExperimentSpec& spec, BuildConfig config, std::uint64_t seed) {
  ExperimentSpec single = spec;
  single.seeds = {seed};
  std::optional<GnatTree> result;
  for_each_seed(single, [&](auto* tag, const auto& data, const std::string&, std::size_t, std::uint64_t s) {
    using Object = typename std::decay_t<decltype(data)>::value_type;
    using Metric = std::conditional_t<std::is_same_v<Object, Vector>, Euclidean, EditDistance>;
    (void)tag;
    const auto split = split_queries(data, spec.queries, s);
    config.seed = s;
    auto codec = config.codec;
    config.codec = ExactCodec{};
    GnatTree tree = build(split.database, Metric{}, config);
    if (std::holds_alternative<FixedPointParams>(codec)) {
      FixedPointParams params = std::get<FixedPointParams>(codec);
      if (!spec.fixed_point && spec.source.metric == MetricKind::kEdit) {
        params = integer_range_params(tree.max_table_distance());
      }
      tree.encode_tables(params);
    }
    result = std::move(tree);
  });
  return std::move(*result);
}

}  // namespace gnatty::bench
