#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gnatty/fixed_point.hpp"
#include "gnatty/metric.hpp"
#include "gnatty/range_table.hpp"

namespace gnatty {

enum class PartitionKind : std::uint8_t { kHyperplane = 0, kBall = 1 };

struct ConstantArity {
  std::size_t m = 8;
  friend bool operator==(const ConstantArity&, const ConstantArity&) = default;
};

/// Node arity n_i^alpha for a node holding n_i objects.
struct PowerArity {
  double alpha = 0.5;
  friend bool operator==(const PowerArity&, const PowerArity&) = default;
};

using ArityPolicy = std::variant<ConstantArity, PowerArity>;

struct ExactCodec {
  friend bool operator==(const ExactCodec&, const ExactCodec&) = default;
};

using TableCodec = std::variant<ExactCodec, FixedPointParams>;

struct BuildConfig {
  PartitionKind partition = PartitionKind::kHyperplane;
  ArityPolicy arity = PowerArity{0.5};
  double gamma = 0.9;             // ball capacity exponent, ignored for hyperplanes
  std::size_t bucket_size = 0;    // 0 builds the whole way down
  double reduce_factor = 1.0;     // |C'| = ceil(|C| / reduce_factor)
  TableCodec codec = ExactCodec{};
  std::uint64_t seed = 0;

  /// Throws ConfigError for out-of-domain values.
  void validate() const;

  friend bool operator==(const BuildConfig&, const BuildConfig&) = default;
};

std::string describe(const ArityPolicy& arity);
std::string describe(PartitionKind partition);

/// Arity of a node holding n objects: Constant -> min(m, n); Power ->
/// round(n^alpha) clamped to [2, n]. Nodes with fewer than 2 objects get n.
std::size_t arity_for(std::size_t n, const ArityPolicy& policy);

/// A child slot: an internal node, a bucket of raw objects, or nothing.
struct Subtree {
  std::int32_t node = -1;
  std::vector<ObjectId> bucket;

  bool is_node() const noexcept { return node >= 0; }
  bool empty() const noexcept { return node < 0 && bucket.empty(); }

  friend bool operator==(const Subtree&, const Subtree&) = default;
};

struct GnatNode {
  std::vector<ObjectId> centers;
  /// Positions (into centers) of the measuring pivots, ascending. Every
  /// position unless reduced tables are enabled.
  std::vector<std::uint32_t> measuring;
  /// Center position -> table row, or -1 for centers without a row.
  std::vector<std::int32_t> row_of;
  RangeTable table;
  std::vector<Subtree> children;

  void index_rows();
};

/// Immutable GNAT index over object ids 0..size()-1. The objects themselves
/// live with the caller and are passed to every query.
class GnatTree {
 public:
  GnatTree() = default;
  GnatTree(BuildConfig config, std::size_t size, Subtree root, std::vector<GnatNode> nodes,
           std::uint64_t build_distance_evals);

  const BuildConfig& config() const noexcept { return config_; }
  std::size_t size() const noexcept { return size_; }
  const Subtree& root() const noexcept { return root_; }
  const GnatNode& node(std::int32_t index) const { return nodes_[static_cast<std::size_t>(index)]; }
  std::span<const GnatNode> nodes() const noexcept { return nodes_; }
  std::uint64_t build_distance_evals() const noexcept { return build_distance_evals_; }

  /// Converts every exact table to fixed point; the tree shape is unchanged.
  void encode_tables(const FixedPointParams& params);

  /// Largest finite hi bound over all exact tables (0 for a tree without tables).
  double max_table_distance() const;

 private:
  BuildConfig config_;
  std::size_t size_ = 0;
  Subtree root_;
  std::vector<GnatNode> nodes_;
  std::uint64_t build_distance_evals_ = 0;
};

/// Sum of rows x cols over all internal nodes.
std::size_t table_entry_count(const GnatTree& tree);

/// Codec-aware storage of all range tables.
std::size_t table_bytes(const GnatTree& tree);

}  // namespace gnatty
