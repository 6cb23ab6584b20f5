#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "gnatty/aesa.hpp"
#include "gnatty/bench/experiment.hpp"
#include "gnatty/gnat_build.hpp"
#include "gnatty/linear_scan.hpp"
#include "gnatty/search.hpp"
#include "test_util.hpp"

namespace gnatty {
namespace {

using testing::collect_ids;
using testing::uniform_workload;

TEST(PruneCheck, Examples) {
  EXPECT_EQ(prune_check(5, 1, {7, 9}), PruneDecision::kEliminate);
  EXPECT_EQ(prune_check(5, 2, {7, 9}), PruneDecision::kKeep);
  EXPECT_EQ(prune_check(10, 0.5, {7, 9}), PruneDecision::kEliminate);
  EXPECT_EQ(prune_check(10, 1, {7, 9}), PruneDecision::kKeep);
  EXPECT_EQ(prune_check(1e9, 1, {0, std::numeric_limits<double>::infinity()}), PruneDecision::kKeep);
}

class SearchTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { workload_ = new testing::VectorWorkload(uniform_workload(2000, 100, 10, 3)); }
  static void TearDownTestSuite() {
    delete workload_;
    workload_ = nullptr;
  }

  static const Dataset<Vector>& db() { return workload_->database; }
  static const Dataset<Vector>& queries() { return workload_->queries; }
  static double radius_for(const Vector& q, std::size_t k = 10) {
    return bench::calibrate_radius(db(), q, k, Euclidean{});
  }

  static testing::VectorWorkload* workload_;
};

testing::VectorWorkload* SearchTest::workload_ = nullptr;

TEST_F(SearchTest, HugeRadiusReturnsEverythingAtCostN) {
  const auto tree = build(db(), Euclidean{}, BuildConfig{});
  std::vector<ObjectId> all(db().size());
  std::iota(all.begin(), all.end(), ObjectId{0});
  for (const auto mode : {SearchMode::kGnat, SearchMode::kEgnat}) {
    const auto stats = range_search(tree, db(), queries()[0], 100.0, Euclidean{}, mode);
    EXPECT_EQ(stats.results, all);
    EXPECT_EQ(stats.distance_evals, db().size());
  }
}

TEST_F(SearchTest, TinyRadiusReturnsNothing) {
  const auto tree = build(db(), Euclidean{}, BuildConfig{});
  const auto& q = queries()[1];
  const double nearest = bench::calibrate_radius(db(), q, 1, Euclidean{});
  EXPECT_TRUE(gnat_range_search(tree, db(), q, nearest * 0.5, Euclidean{}).results.empty());
  EXPECT_TRUE(egnat_range_search(tree, db(), q, nearest * 0.5, Euclidean{}).results.empty());
}

TEST_F(SearchTest, ExactForEveryVariant) {
  std::vector<std::vector<ObjectId>> expected;
  std::vector<double> radii;
  for (const auto& q : queries()) {
    radii.push_back(radius_for(q));
    expected.push_back(linear_range_scan(db(), q, radii.back(), Euclidean{}));
  }
  for (const auto partition : {PartitionKind::kHyperplane, PartitionKind::kBall}) {
    for (const ArityPolicy arity : {ArityPolicy{ConstantArity{8}}, ArityPolicy{PowerArity{0.5}}}) {
      for (const double reduce : {1.0, 2.0}) {
        for (const bool fp : {false, true}) {
          BuildConfig config;
          config.partition = partition;
          config.arity = arity;
          config.reduce_factor = reduce;
          if (fp) config.codec = FixedPointParams{8, 2, 0.2};
          const auto tree = build(db(), Euclidean{}, config);
          for (const auto mode : {SearchMode::kGnat, SearchMode::kEgnat}) {
            for (std::size_t i = 0; i < queries().size(); ++i) {
              const auto stats = range_search(tree, db(), queries()[i], radii[i], Euclidean{}, mode);
              ASSERT_EQ(stats.results, expected[i])
                  << describe(partition) << ' ' << describe(arity) << " reduce=" << reduce << " fp=" << fp
                  << " mode=" << static_cast<int>(mode) << " query=" << i;
              ASSERT_LE(stats.distance_evals, db().size());
            }
          }
        }
      }
    }
  }
}

TEST_F(SearchTest, ExactWithBuckets) {
  BuildConfig config;
  config.arity = ConstantArity{6};
  config.bucket_size = 25;
  const auto tree = build(db(), Euclidean{}, config);
  for (std::size_t i = 0; i < 30; ++i) {
    const double r = radius_for(queries()[i]);
    EXPECT_EQ(gnat_range_search(tree, db(), queries()[i], r, Euclidean{}).results,
              linear_range_scan(db(), queries()[i], r, Euclidean{}));
  }
}

TEST_F(SearchTest, MonotoneInRadius) {
  BuildConfig config;
  config.partition = PartitionKind::kBall;
  const auto tree = build(db(), Euclidean{}, config);
  for (std::size_t i = 0; i < 20; ++i) {
    std::vector<ObjectId> previous;
    for (const std::size_t k : {1u, 5u, 10u, 40u, 200u}) {
      const auto results = gnat_range_search(tree, db(), queries()[i], radius_for(queries()[i], k), Euclidean{}).results;
      EXPECT_TRUE(std::includes(results.begin(), results.end(), previous.begin(), previous.end()));
      previous = results;
    }
  }
}

TEST_F(SearchTest, EgnatMeasuresAtLeastAsMuchAsGnat) {
  BuildConfig config;
  config.arity = ConstantArity{16};
  const auto tree = build(db(), Euclidean{}, config);
  std::uint64_t gnat = 0;
  std::uint64_t egnat = 0;
  for (const auto& q : queries()) {
    const double r = radius_for(q);
    gnat += gnat_range_search(tree, db(), q, r, Euclidean{}).distance_evals;
    egnat += egnat_range_search(tree, db(), q, r, Euclidean{}).distance_evals;
  }
  EXPECT_GE(egnat, gnat);
}

TEST_F(SearchTest, FixedPointChangesOnlyTheCost) {
  BuildConfig config;
  config.partition = PartitionKind::kBall;
  const auto exact = build(db(), Euclidean{}, config);
  auto fp = exact;
  fp.encode_tables(FixedPointParams{8, 2, 0.2});
  std::uint64_t exact_evals = 0;
  std::uint64_t fp_evals = 0;
  for (const auto& q : queries()) {
    const double r = radius_for(q);
    const auto a = gnat_range_search(exact, db(), q, r, Euclidean{});
    const auto b = gnat_range_search(fp, db(), q, r, Euclidean{});
    EXPECT_EQ(a.results, b.results);
    exact_evals += a.distance_evals;
    fp_evals += b.distance_evals;
  }
  EXPECT_GE(fp_evals, exact_evals);
}

TEST_F(SearchTest, SingleNodeEgnatMeasuresEveryCenter) {
  const Dataset<Vector> small(db().begin(), db().begin() + 40);
  BuildConfig config;
  config.arity = ConstantArity{40};
  const auto tree = build(small, Euclidean{}, config);
  ASSERT_EQ(tree.nodes().size(), 1u);
  const auto& q = queries()[0];
  const double r = bench::calibrate_radius(small, q, 5, Euclidean{});
  const auto stats = egnat_range_search(tree, small, q, r, Euclidean{});
  EXPECT_EQ(stats.results, linear_range_scan(small, q, r, Euclidean{}));
  EXPECT_EQ(stats.distance_evals, 40u);
}

TEST_F(SearchTest, PowerOneMatchesAesaQueryByQuery) {
  const Dataset<Vector> small(db().begin(), db().begin() + 500);
  BuildConfig config;
  config.arity = PowerArity{1.0};
  const auto tree = build(small, Euclidean{}, config);
  const auto matrix = aesa_build(small, Euclidean{});
  for (const auto& q : queries()) {
    const double r = bench::calibrate_radius(small, q, 10, Euclidean{});
    const auto g = gnat_range_search(tree, small, q, r, Euclidean{});
    const auto a = aesa_range_search(matrix, small, q, r, Euclidean{});
    EXPECT_EQ(g.results, a.results);
    EXPECT_EQ(g.distance_evals, a.distance_evals);
  }
}

// A child holding an answer must survive every pivot row of its node.
TEST_F(SearchTest, NoPrunedChildHoldsAnAnswer) {
  const Dataset<Vector> small(db().begin(), db().begin() + 300);
  BuildConfig config;
  config.arity = ConstantArity{5};
  config.partition = PartitionKind::kBall;
  const auto tree = build(small, Euclidean{}, config);
  for (std::size_t i = 0; i < 20; ++i) {
    const auto& q = queries()[i];
    const double r = bench::calibrate_radius(small, q, 8, Euclidean{});
    const auto answers = linear_range_scan(small, q, r, Euclidean{});
    const auto stats = gnat_range_search(tree, small, q, r, Euclidean{});
    ASSERT_EQ(stats.results, answers);
    for (const auto& node : tree.nodes()) {
      for (std::size_t j = 0; j < node.children.size(); ++j) {
        std::vector<ObjectId> under{node.centers[j]};
        collect_ids(tree, node.children[j], under);
        bool holds_answer = false;
        for (const auto x : under) holds_answer |= std::binary_search(answers.begin(), answers.end(), x);
        if (!holds_answer) continue;
        for (std::size_t row = 0; row < node.measuring.size(); ++row) {
          const double e = euclidean_distance(q, small[node.centers[node.measuring[row]]]);
          EXPECT_EQ(prune_check(e, r, node.table.entry(row, j)), PruneDecision::kKeep);
        }
      }
    }
  }
}

TEST_F(SearchTest, KnnMatchesBruteForce) {
  for (const auto partition : {PartitionKind::kHyperplane, PartitionKind::kBall}) {
    BuildConfig config;
    config.partition = partition;
    const auto tree = build(db(), Euclidean{}, config);
    for (const auto mode : {SearchMode::kGnat, SearchMode::kEgnat}) {
      for (const std::size_t k : {1u, 10u}) {
        for (const auto& q : queries()) {
          const auto got = knn_search(tree, db(), q, k, Euclidean{}, mode);
          ASSERT_EQ(got.neighbors, brute_force_knn(db(), q, k, Euclidean{}));
        }
      }
    }
  }
}

TEST_F(SearchTest, KnnExamples) {
  const Dataset<Vector> small(db().begin(), db().begin() + 50);
  const auto tree = build(small, Euclidean{}, BuildConfig{});
  const auto nearest = knn_search(tree, small, small[17], 1, Euclidean{});
  ASSERT_EQ(nearest.neighbors.size(), 1u);
  EXPECT_EQ(nearest.neighbors[0], (Neighbor{17, 0.0}));
  const auto all = knn_search(tree, small, queries()[0], 50, Euclidean{});
  EXPECT_EQ(all.neighbors, brute_force_knn(small, queries()[0], 50, Euclidean{}));
}

TEST(KnnTies, LowerIdWinsAtEqualDistance) {
  // Four points at distance 1 from the origin query.
  const Dataset<Vector> data{{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {3, 3}, {2, 2}};
  for (const std::size_t m : {2u, 3u, 6u}) {
    BuildConfig config;
    config.arity = ConstantArity{m};
    const auto tree = build(data, Euclidean{}, config);
    for (const auto mode : {SearchMode::kGnat, SearchMode::kEgnat}) {
      const auto got = knn_search(tree, data, Vector{0, 0}, 2, Euclidean{}, mode);
      ASSERT_EQ(got.neighbors.size(), 2u);
      EXPECT_EQ(got.neighbors[0].id, 0u);
      EXPECT_EQ(got.neighbors[1].id, 1u);
    }
  }
}

TEST(SearchErrors, ConfigErrors) {
  const auto data = generate_uniform_vectors(20, 2, 1);
  const auto tree = build(data, Euclidean{}, BuildConfig{});
  EXPECT_THROW(gnat_range_search(tree, data, data[0], -1.0, Euclidean{}), ConfigError);
  EXPECT_THROW(knn_search(tree, data, data[0], 0, Euclidean{}), ConfigError);
  EXPECT_THROW(knn_search(tree, data, data[0], 21, Euclidean{}), ConfigError);
  const Dataset<Vector> fewer(data.begin(), data.begin() + 10);
  EXPECT_THROW(gnat_range_search(tree, fewer, data[0], 0.1, Euclidean{}), ConfigError);
}

TEST(SearchStrings, ExactUnderEditDistance) {
  const auto words = generate_random_strings(1200, 4);
  const auto split = split_queries(words, 50, 4);
  for (const bool fp : {false, true}) {
    BuildConfig config;
    config.partition = PartitionKind::kBall;
    const auto exact = build(split.database, EditDistance{}, config);
    auto tree = exact;
    if (fp) tree.encode_tables(integer_range_params(exact.max_table_distance()));
    for (const auto& q : split.queries) {
      for (const double r : {1.0, 2.0, 3.0}) {
        ASSERT_EQ(gnat_range_search(tree, split.database, q, r, EditDistance{}).results,
                  linear_range_scan(split.database, q, r, EditDistance{}));
        ASSERT_EQ(egnat_range_search(tree, split.database, q, r, EditDistance{}).results,
                  linear_range_scan(split.database, q, r, EditDistance{}));
      }
    }
  }
}

}  // namespace
}  // namespace gnatty
