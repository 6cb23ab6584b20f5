#include "gnatty/gnat_tree.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "gnatty/errors.hpp"

namespace gnatty {

void BuildConfig::validate() const {
  if (const auto* c = std::get_if<ConstantArity>(&arity); c && c->m < 2) {
    throw ConfigError("constant arity must be at least 2, got " + std::to_string(c->m));
  }
  if (const auto* p = std::get_if<PowerArity>(&arity); p && !(p->alpha > 0.0 && p->alpha <= 1.0)) {
    throw ConfigError("alpha must lie in (0, 1], got " + std::to_string(p->alpha));
  }
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1], got " + std::to_string(gamma));
  if (!(reduce_factor >= 1.0) || !std::isfinite(reduce_factor)) {
    throw ConfigError("reduce factor must be >= 1, got " + std::to_string(reduce_factor));
  }
  if (const auto* fp = std::get_if<FixedPointParams>(&codec)) fp->validate();
}

std::string describe(const ArityPolicy& arity) {
  std::ostringstream out;
  if (const auto* c = std::get_if<ConstantArity>(&arity)) {
    out << "const:" << c->m;
  } else {
    out << "alpha:" << std::get<PowerArity>(arity).alpha;
  }
  return out.str();
}

std::string describe(PartitionKind partition) {
  return partition == PartitionKind::kBall ? "ball" : "hyperplane";
}

std::size_t arity_for(std::size_t n, const ArityPolicy& policy) {
  if (n < 2) return n;
  if (const auto* c = std::get_if<ConstantArity>(&policy)) return std::min(c->m, n);
  const double alpha = std::get<PowerArity>(policy).alpha;
  const auto rounded = static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(n), alpha)));
  return std::clamp<std::size_t>(rounded, 2, n);
}

void GnatNode::index_rows() {
  row_of.assign(centers.size(), -1);
  for (std::size_t row = 0; row < measuring.size(); ++row) {
    row_of[measuring[row]] = static_cast<std::int32_t>(row);
  }
}

GnatTree::GnatTree(BuildConfig config, std::size_t size, Subtree root, std::vector<GnatNode> nodes,
                   std::uint64_t build_distance_evals)
    : config_(std::move(config)),
      size_(size),
      root_(std::move(root)),
      nodes_(std::move(nodes)),
      build_distance_evals_(build_distance_evals) {}

void GnatTree::encode_tables(const FixedPointParams& params) {
  auto codec = std::make_shared<const FixedPointCodec>(params);
  for (auto& node : nodes_) node.table.encode(codec);
  config_.codec = params;
}

double GnatTree::max_table_distance() const {
  double best = 0.0;
  for (const auto& node : nodes_) {
    if (node.table.fixed_point()) throw std::logic_error("max_table_distance needs exact tables");
    for (const auto& iv : node.table.exact_entries()) {
      if (std::isfinite(iv.hi)) best = std::max(best, iv.hi);
    }
  }
  return best;
}

std::size_t table_entry_count(const GnatTree& tree) {
  std::size_t total = 0;
  for (const auto& node : tree.nodes()) total += node.table.entry_count();
  return total;
}

std::size_t table_bytes(const GnatTree& tree) {
  std::size_t total = 0;
  for (const auto& node : tree.nodes()) total += node.table.byte_size();
  return total;
}

}  // namespace gnatty
