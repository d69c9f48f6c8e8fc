#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "homophily/error.hpp"
#include "homophily/matrix.hpp"
#include "homophily/parallel.hpp"
#include "homophily/random.hpp"
#include "homophily/stats.hpp"

namespace homophily {
namespace {

TEST(Rng, Deterministic) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
}

TEST(Rng, UniformAndBelowRanges) {
  Rng r(1);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    ++counts[r.below(7)];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 400);
}

TEST(Rng, NormalMoments) {
  Rng r(2);
  std::vector<double> v(20000);
  for (auto& x : v) x = r.normal();
  EXPECT_NEAR(mean(v), 0.0, 0.03);
  EXPECT_NEAR(sample_stddev(v), 1.0, 0.03);
}

TEST(Rng, ShuffleIsPermutation) {
  Rng r(3);
  std::vector<int> v(50);
  std::iota(v.begin(), v.end(), 0);
  r.shuffle(std::span<int>(v));
  EXPECT_EQ(std::set<int>(v.begin(), v.end()).size(), 50u);
}

TEST(ChildSeed, DistinctAndStable) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(child_seed(7, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(child_seed(7, 3), child_seed(7, 3));
  EXPECT_NE(child_seed(7, 3), child_seed(8, 3));
}

TEST(ParallelFor, EachIndexOnce) {
  for (unsigned threads : {1u, 2u, 4u}) {
    std::vector<std::atomic<int>> hits(500);
    parallel_for(hits.size(), threads, [&](std::size_t i) { ++hits[i]; });
    for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  }
}

TEST(ParallelFor, RethrowsTaskError) {
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 5) throw Error("boom");
                            }),
               Error);
}

TEST(Stats, MeanAndUnbiasedStd) {
  const std::vector<double> v{1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(mean(v), 2.5);
  EXPECT_DOUBLE_EQ(sample_stddev(v), std::sqrt(5.0 / 3.0));
  EXPECT_EQ(sample_stddev(std::vector<double>{3.0}), 0.0);
}

TEST(Matrix, ProductsAgreeWithLoops) {
  Rng r(4);
  Matrix a(5, 3), b(3, 4), c(5, 4);
  for (auto& v : a.data()) v = r.normal();
  for (auto& v : b.data()) v = r.normal();
  for (auto& v : c.data()) v = r.normal();
  Matrix ab(5, 4);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 3; ++k) ab(i, j) += a(i, k) * b(k, j);
  EXPECT_LT(max_abs_diff(matmul(a, b), ab), 1e-14);
  EXPECT_LT(max_abs_diff(matmul_tn(transpose(a), b), ab), 1e-14);
  EXPECT_LT(max_abs_diff(matmul_nt(a, transpose(b)), ab), 1e-14);
  EXPECT_THROW(matmul(a, c), std::invalid_argument);
}

TEST(Matrix, ArgmaxTiesGoLow) {
  EXPECT_EQ(row_argmax(Matrix(2, 3, {1, 3, 3, 0, 0, 0})), (std::vector<int>{1, 0}));
}

TEST(PairwiseSum, Accurate) {
  std::vector<double> v(100000, 0.1);
  EXPECT_NEAR(pairwise_sum(v), 10000.0, 1e-9);
}

TEST(FormatIds, Truncates) {
  std::vector<std::int64_t> ids(25);
  std::iota(ids.begin(), ids.end(), 0);
  const auto s = format_ids(ids, 3);
  EXPECT_EQ(s, "0, 1, 2 (+22 more)");
  EXPECT_EQ(format_ids({4, 9}), "4, 9");
}

}  // namespace
}  // namespace homophily
