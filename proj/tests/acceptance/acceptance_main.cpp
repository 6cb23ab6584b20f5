// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gnatty/aesa.hpp"
#include "gnatty/bench/experiment.hpp"
#include "gnatty/gnat_build.hpp"
#include "gnatty/linear_scan.hpp"
#include "gnatty/search.hpp"
#include "../test_util.hpp"

namespace {

using namespace gnatty;
using namespace gnatty::bench;
using gnatty::testing::collect_ids;
using gnatty::testing::uniform_workload;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "  violated: " << what << '\n';
    }
  }
};

std::vector<double> calibrated_radii(const Dataset<Vector>& db, const Dataset<Vector>& queries, std::size_t k) {
  std::vector<double> radii;
  for (const auto& q : queries) radii.push_back(calibrate_radius(db, q, k, Euclidean{}));
  return radii;
}

std::uint64_t total_evals(const GnatTree& tree, const gnatty::testing::VectorWorkload& w,
                          const std::vector<double>& radii, SearchMode mode) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < w.queries.size(); ++i) {
    total += range_search(tree, w.database, w.queries[i], radii[i], Euclidean{}, mode).distance_evals;
  }
  return total;
}

void oracle_exactness(Outcome& out) {
  ExperimentSpec spec;
  spec.source.n = 2000;
  spec.source.dim = 10;
  spec.queries = 100;
  spec.target_ks = {10};
  spec.seeds = {1, 2, 3, 4, 5};
  spec.indexes = {IndexKind::kGnatty, IndexKind::kGnat, IndexKind::kAesa, IndexKind::kLc};
  spec.partitions = {PartitionKind::kHyperplane, PartitionKind::kBall};
  spec.constant_arities = {8};
  spec.alphas = {0.5};
  spec.gammas = {0.9, 1.0};
  spec.codecs = {CodecKind::kExact, CodecKind::kFixedPoint};
  spec.fixed_point = FixedPointParams{8, 2, 0.2};
  spec.reduce_factors = {1.0, 2.0};
  spec.searches = {SearchMode::kGnat, SearchMode::kEgnat};
  spec.verify = true;
  OracleTally tally;
  std::ostringstream log;
  const auto rows = run_experiment(spec, &log, &tally);
  out.detail << "  " << rows.size() << " configurations, " << tally.checked << " queries checked, "
             << tally.mismatches << " mismatches\n";
  // 2 arities x (hyperplane + ball at two gammas) x 2 reductions x 2 codecs x 2 modes, plus AESA and LC.
  out.require(rows.size() == 5 * (2 * 3 * 2 * 2 * 2 + 2), "every grid cell produced a row");
  out.require(tally.checked == rows.size() * 100, "every query was checked");
  out.require(tally.mismatches == 0, "no query differs from the linear scan");
  if (tally.mismatches) out.detail << log.str();
}

void aesa_degeneracy(Outcome& out) {
  const auto w = uniform_workload(500, 100, 10, 1);
  BuildConfig config;
  config.arity = PowerArity{1.0};
  const auto tree = build(w.database, Euclidean{}, config);
  out.require(tree.nodes().size() == 1, "single node");
  bool degenerate = true;
  const auto& table = tree.node(0).table;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < table.cols(); ++j) {
      degenerate &= table.entry(i, j).lo == table.entry(i, j).hi && table.entry(i, j) == table.entry(j, i);
    }
  }
  out.require(degenerate, "lo = hi and symmetric entries");
  const auto matrix = aesa_build(w.database, Euclidean{});
  const auto radii = calibrated_radii(w.database, w.queries, 10);
  std::uint64_t gnat = 0;
  std::uint64_t aesa = 0;
  for (std::size_t i = 0; i < w.queries.size(); ++i) {
    gnat += gnat_range_search(tree, w.database, w.queries[i], radii[i], Euclidean{}).distance_evals;
    aesa += aesa_range_search(matrix, w.database, w.queries[i], radii[i], Euclidean{}).distance_evals;
  }
  out.detail << "  total distance evaluations: gnat " << gnat << ", aesa " << aesa << '\n';
  out.require(gnat == aesa, "equal totals");
}

void space_scaling(Outcome& out) {
  std::vector<double> ratios;
  for (const std::size_t n : {1000u, 10000u, 100000u}) {
    const auto data = generate_uniform_vectors(n, 8, 1);
    BuildConfig config;
    config.arity = PowerArity{0.5};
    const auto entries = static_cast<double>(table_entry_count(build(data, Euclidean{}, config)));
    const double nd = static_cast<double>(n);
    ratios.push_back(entries / (nd * std::log2(std::log2(nd))));
    out.detail << "  n=" << n << " entries=" << entries << " ratio=" << ratios.back() << '\n';
  }
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  out.detail << "  spread " << *hi / *lo << '\n';
  out.require(*hi / *lo < 2.0, "ratio spread below 2x");
}

void fixed_point_space(Outcome& out) {
  const auto w = uniform_workload(2000, 100, 10, 2);
  const auto radii = calibrated_radii(w.database, w.queries, 10);
  for (const auto& [partition, arity] : {std::pair{PartitionKind::kBall, ArityPolicy{PowerArity{0.5}}},
                                         std::pair{PartitionKind::kHyperplane, ArityPolicy{ConstantArity{8}}}}) {
    BuildConfig config;
    config.partition = partition;
    config.arity = arity;
    const auto exact = build(w.database, Euclidean{}, config);
    auto fp = exact;
    fp.encode_tables(FixedPointParams{8, 2, 0.2});
    out.require(table_bytes(fp) * 4 == table_bytes(exact), "fixed-point bytes are a quarter");
    std::uint64_t exact_evals = 0;
    std::uint64_t fp_evals = 0;
    bool same = true;
    for (std::size_t i = 0; i < w.queries.size(); ++i) {
      const auto a = gnat_range_search(exact, w.database, w.queries[i], radii[i], Euclidean{});
      const auto b = gnat_range_search(fp, w.database, w.queries[i], radii[i], Euclidean{});
      same &= a.results == b.results;
      exact_evals += a.distance_evals;
      fp_evals += b.distance_evals;
    }
    out.require(same, "identical result sets");
    out.require(fp_evals >= exact_evals, "fixed point never evaluates fewer distances");
    out.detail << "  " << describe(partition) << ' ' << describe(arity) << ": bytes " << table_bytes(exact) << " -> "
               << table_bytes(fp) << ", evals " << exact_evals << " -> " << fp_evals << " (+"
               << 100.0 * (static_cast<double>(fp_evals) / static_cast<double>(exact_evals) - 1.0) << "%)\n";
  }
}

void alpha_trend(Outcome& out) {
  ExperimentSpec spec;
  spec.source.n = 10000;
  spec.source.dim = 12;
  spec.queries = 1000;
  spec.target_ks = {10};
  spec.alphas = {0.3, 0.5, 0.7};
  spec.partitions = {PartitionKind::kBall};
  spec.gammas = {0.9};
  const auto rows = run_experiment(spec);
  out.require(rows.size() == 3, "three rows");
  if (rows.size() != 3) return;
  for (const auto& row : rows) out.detail << "  " << row.arity << " median evals " << row.median_evals << '\n';
  for (std::size_t i = 1; i < rows.size(); ++i) {
    out.require(rows[i].median_evals <= 1.05 * rows[i - 1].median_evals, rows[i].arity + " within 5% of " + rows[i - 1].arity);
  }
}

void egnat_ordering(Outcome& out) {
  const auto w = uniform_workload(10000, 100, 10, 3);
  const auto radii = calibrated_radii(w.database, w.queries, 10);
  std::vector<double> gaps;
  for (const std::size_t m : {8u, 32u}) {
    BuildConfig config;
    config.arity = ConstantArity{m};
    const auto tree = build(w.database, Euclidean{}, config);
    const auto gnat = total_evals(tree, w, radii, SearchMode::kGnat);
    const auto egnat = total_evals(tree, w, radii, SearchMode::kEgnat);
    gaps.push_back(static_cast<double>(egnat) - static_cast<double>(gnat));
    out.detail << "  m=" << m << " gnat " << gnat << ", egnat " << egnat << ", gap " << gaps.back() << " ("
               << 100.0 * gaps.back() / static_cast<double>(gnat) << "%)\n";
    if (m == 32) out.require(egnat >= gnat, "egnat >= gnat at m=32");
  }
  out.require(gaps[1] > gaps[0], "gap at m=32 exceeds gap at m=8");
}

std::size_t subtree_size(const GnatTree& tree, const Subtree& s) {
  std::vector<ObjectId> ids;
  collect_ids(tree, s, ids);
  return ids.size();
}

void ball_structure(Outcome& out) {
  const auto data = generate_uniform_vectors(5000, 10, 4);
  BuildConfig config;
  config.partition = PartitionKind::kBall;
  config.arity = PowerArity{0.5};
  config.seed = 4;
  config.gamma = 1.0;
  const auto balanced = build(data, Euclidean{}, config);
  std::size_t checked = 0;
  bool exact_sizes = true;
  for (const auto& node : balanced.nodes()) {
    const std::size_t m = node.centers.size();
    std::vector<std::size_t> sizes;
    std::size_t rest = 0;
    for (const auto& child : node.children) {
      sizes.push_back(subtree_size(balanced, child));
      rest += sizes.back();
    }
    const std::size_t b = ball_capacity(rest, m, 1.0);
    std::size_t remaining = rest;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      exact_sizes &= sizes[i] == std::min(b, remaining);
      remaining -= sizes[i];
    }
    ++checked;
  }
  out.require(exact_sizes, "first m-1 children match the capacity formula at every node");

  config.gamma = 0.9;
  const auto skewed = build(data, Euclidean{}, config);
  const auto last = [](const GnatTree& tree) {
    const auto& root = tree.node(tree.root().node);
    return subtree_size(tree, root.children.back());
  };
  out.detail << "  " << checked << " nodes checked; root last child: gamma=1 " << last(balanced) << ", gamma=0.9 "
             << last(skewed) << '\n';
  out.require(balanced.node(0).centers == skewed.node(0).centers, "same root centers");
  out.require(last(skewed) > last(balanced), "gamma=0.9 has a larger last child");
}

void knn_oracle(Outcome& out) {
  const auto w = uniform_workload(2000, 100, 10, 5);
  std::size_t checked = 0;
  std::size_t wrong = 0;
  for (const auto& [partition, arity] : {std::pair{PartitionKind::kBall, ArityPolicy{PowerArity{0.5}}},
                                         std::pair{PartitionKind::kHyperplane, ArityPolicy{ConstantArity{8}}}}) {
    BuildConfig config;
    config.partition = partition;
    config.arity = arity;
    const auto tree = build(w.database, Euclidean{}, config);
    for (const auto mode : {SearchMode::kGnat, SearchMode::kEgnat}) {
      for (const std::size_t k : {1u, 10u}) {
        for (const auto& q : w.queries) {
          ++checked;
          if (knn_search(tree, w.database, q, k, Euclidean{}, mode).neighbors !=
              brute_force_knn(w.database, q, k, Euclidean{})) {
            ++wrong;
          }
        }
      }
    }
  }
  out.detail << "  " << checked << " queries, " << wrong << " differ\n";
  out.require(wrong == 0, "every kNN answer equals the sorted brute force");
}

template <class Object, class Metric>
bool axioms_hold(const Dataset<Object>& data, const Metric& metric) {
  Rng rng(99);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto& x = data[rng.below(data.size())];
    const auto& y = data[rng.below(data.size())];
    const auto& z = data[rng.below(data.size())];
    const double dxy = metric(x, y);
    const double via = metric(x, z) + metric(z, y);
    if (metric(x, x) != 0.0 || dxy < 0.0 || dxy != metric(y, x) || dxy > via * (1 + 1e-12)) return false;
  }
  return true;
}

void metric_hygiene(Outcome& out) {
  out.require(axioms_hold(generate_uniform_vectors(1000, 10, 6), Euclidean{}), "euclidean axioms on 10^4 triples");
  out.require(axioms_hold(generate_random_strings(1000, 6, 0, 12), EditDistance{}), "edit-distance axioms on 10^4 triples");
  const auto oracle = gnatty::testing::edit_distance_by_search("kitten", "sitting");
  out.require(oracle == 3 && edit_distance("kitten", "sitting") == 3, "kitten/sitting is 3 by both routes");
  for (const std::size_t n : {200u, 500u}) {
    const auto matrix = aesa_build(generate_uniform_vectors(n, 4, 6), Euclidean{});
    out.require(matrix.build_distance_evals() == n * (n - 1) / 2, "AESA build evaluates n(n-1)/2 distances");
  }
}

void determinism(Outcome& out) {
  ExperimentSpec spec;
  spec.source.n = 1000;
  spec.queries = 50;
  spec.target_ks = {10};
  spec.seeds = {1, 2};
  spec.indexes = {IndexKind::kGnatty, IndexKind::kGnat, IndexKind::kAesa, IndexKind::kLc};
  spec.partitions = {PartitionKind::kHyperplane, PartitionKind::kBall};
  spec.codecs = {CodecKind::kExact, CodecKind::kFixedPoint};
  spec.reduce_factors = {1.0, 2.0};
  spec.searches = {SearchMode::kGnat, SearchMode::kEgnat};
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = (dir / "gnatty_acceptance_a.csv").string();
  const auto b = (dir / "gnatty_acceptance_b.csv").string();
  emit_csv(run_experiment(spec), a);
  emit_csv(run_experiment(spec), b);
  const auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const auto first = slurp(a);
  out.detail << "  " << first.size() << " bytes per run\n";
  out.require(!first.empty() && first == slurp(b), "byte-identical CSV");
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"oracle exactness over the variant grid, AESA and LC", oracle_exactness},
      {"alpha=1 tree degenerates to AESA", aesa_degeneracy},
      {"table entries grow like n log log n", space_scaling},
      {"fixed-point tables: quarter size, same answers", fixed_point_space},
      {"median evaluations fall as alpha grows", alpha_trend},
      {"EGNAT search costs more than GNAT search", egnat_ordering},
      {"ball partition sizes", ball_structure},
      {"kNN equals brute force", knn_oracle},
      {"metric axioms and evaluation counts", metric_hygiene},
      {"sweep CSV is reproducible", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(out);
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail << "  exception: " << e.what() << '\n';
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (out.pass ? "PASS" : "FAIL") << ' ' << i + 1 << ": " << criteria[i].first << " (" << seconds
              << " s)\n"
              << out.detail.str() << std::flush;
    failures += out.pass ? 0 : 1;
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
