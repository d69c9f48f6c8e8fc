#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "homophily/bench.hpp"
#include "homophily/error.hpp"
#include "homophily/generators.hpp"
#include "homophily/methods.hpp"
#include "homophily/propagation.hpp"
#include "homophily/stats.hpp"

namespace homophily {
namespace {

MethodGrids small_grids() {
  return MethodGrids::from_json(R"({"mlp": {"hidden": [8], "layers": [2]},
                                    "cs": {"schemes": ["sym"], "alpha1": [0.5], "alpha2": [0.8], "fdiff_scale": [1.0]},
                                    "train": {"epochs": 60}})");
}

LabeledDataset archetype(ArchetypeKind kind, int classes, std::int64_t groups, std::int64_t size) {
  ArchetypeParams p;
  p.kind = kind;
  p.num_classes = classes;
  p.groups = groups;
  p.group_size = size;
  return generate_archetype(p);
}

TEST(ParseMethod, ListsValidNames) {
  EXPECT_EQ(parse_method("cs2"), MethodId::cs2);
  try {
    parse_method("gcn");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("mlp, lp1, lp2, link, sgc1, sgc2, cs1, cs2"), std::string::npos);
  }
}

TEST(MethodGrids, JsonOverrides) {
  const auto g = MethodGrids::from_json(R"({"lp": {"alpha": [0.5]}, "train": {"epochs": 3}})");
  EXPECT_EQ(g.lp_alpha, std::vector<double>{0.5});
  EXPECT_EQ(g.train.epochs, 3);
  EXPECT_EQ(g.link_weight_decay, MethodGrids{}.link_weight_decay);
  EXPECT_THROW(MethodGrids::from_json("{"), Error);
  EXPECT_THROW(MethodGrids::from_json(R"({"lp": {"alpha": []}})"), Error);
  EXPECT_THROW(MethodGrids::from_json(R"({"lp": {"alpha": "x"}})"), Error);
}

TEST(RunMethod, Lp1PerfectOnPureHomophily) {
  const auto ds = archetype(ArchetypeKind::pure_homophily, 0, 4, 6);
  for (const auto& split : make_splits(ds.labels, 3)) {
    const auto out = run_method(MethodId::lp1, ds, split, {});
    EXPECT_EQ(out.test_metric, 1.0);
  }
}

TEST(RunMethod, Sgc1IsTrainClassifierOnSgcFeatures) {
  auto ds = archetype(ArchetypeKind::pure_homophily, 0, 3, 8);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd;
  Matrix x(24, 3);
  for (auto& v : x.data()) v = nd(gen);
  ds.features = FeatureMatrix(x);
  const auto split = make_splits(ds.labels, 1).front();
  auto grids = small_grids();
  grids.sgc_weight_decay = {0.01};
  const auto out = run_method(MethodId::sgc1, ds, split, grids);

  TrainConfig cfg = grids.train;
  cfg.weight_decay = 0.01;
  cfg.seed = child_seed(child_seed(split.seed, 1000 + static_cast<std::uint64_t>(MethodId::sgc1)), 0);
  const auto sx = sgc_features(ds, 1);
  const auto res = train_classifier(sx, ds.labels, split, {}, cfg);
  EXPECT_EQ(out.scores, res.model.predict_proba(sx));
  EXPECT_EQ(out.val_metric, res.best_val);
}

// In a two-class one_per_class block, opposite corners of the 4-cycle have
// the same neighbors but different classes, so adjacency rows alone cannot
// separate them and LINK has no edge over a featureless MLP.
TEST(RunMethod, OnePerClassTwinsShareAdjacencyRows) {
  auto ds = archetype(ArchetypeKind::one_per_class, 2, 25, 0);
  const Matrix rows = link_features(ds.graph).to_dense();
  for (NodeId x = 0; x < ds.graph.num_nodes(); ++x) {
    int twins = 0;
    for (NodeId y = 0; y < ds.graph.num_nodes(); ++y)
      if (y != x && std::equal(rows.row(x).begin(), rows.row(x).end(), rows.row(y).begin())) {
        ++twins;
        EXPECT_NE(ds.labels[x], ds.labels[y]);
      }
    EXPECT_EQ(twins, 1);
  }

  ds.features = FeatureMatrix(Matrix(static_cast<std::size_t>(ds.graph.num_nodes()), 4));
  const auto grids = small_grids();
  std::vector<double> link, mlp;
  for (const auto& split : make_splits(ds.labels, 3)) {
    link.push_back(run_method(MethodId::link, ds, split, grids).test_metric);
    mlp.push_back(run_method(MethodId::mlp, ds, split, grids).test_metric);
  }
  EXPECT_LE(mean(link), 0.6);
  EXPECT_LE(mean(mlp), 0.6);
}

TEST(RunMethod, MissingFeatures) {
  const auto ds = archetype(ArchetypeKind::pure_homophily, 0, 2, 4);
  const auto split = make_splits(ds.labels, 1).front();
  EXPECT_THROW(run_method(MethodId::mlp, ds, split, small_grids()), Error);
  EXPECT_THROW(run_method(MethodId::sgc1, ds, split, small_grids()), Error);
  EXPECT_NO_THROW(run_method(MethodId::link, ds, split, small_grids()));
}

TEST(RunMethod, ThreadCountDoesNotChangeOutcome) {
  auto ds = archetype(ArchetypeKind::pure_homophily, 0, 3, 8);
  std::mt19937_64 gen(2);
  std::normal_distribution<double> nd;
  Matrix x(24, 3);
  for (auto& v : x.data()) v = nd(gen);
  ds.features = FeatureMatrix(x);
  const auto split = make_splits(ds.labels, 1).front();
  auto grids = small_grids();
  grids.mlp_hidden = {4, 8};
  for (auto m : {MethodId::mlp, MethodId::lp2, MethodId::cs1}) {
    const auto a = run_method(m, ds, split, grids, nullptr, 1);
    const auto b = run_method(m, ds, split, grids, nullptr, 4);
    EXPECT_EQ(a.scores, b.scores);
    EXPECT_EQ(a.best_config, b.best_config);
  }
}

TEST(Benchmark, PureHomophilyLp1) {
  const auto ds = archetype(ArchetypeKind::pure_homophily, 0, 4, 6);
  const auto table = benchmark(ds, {MethodId::lp1}, make_splits(ds.labels), {});
  ASSERT_EQ(table.results.size(), 1u);
  EXPECT_EQ(table.results[0].mean, 1.0);
  EXPECT_EQ(table.results[0].std, 0.0);
  EXPECT_EQ(table.summary(), "lp1 1.000±0.000\n");
}

TEST(Benchmark, RandomLabelsNearMajority) {
  ErConfig cfg;
  cfg.n = 200;
  cfg.p = 0.05;
  cfg.class_fractions = {0.7, 0.3};
  cfg.seed = 4;
  auto ds = generate_er_labeled(cfg);
  std::mt19937_64 gen(4);
  std::normal_distribution<double> nd;
  Matrix x(200, 5);
  for (auto& v : x.data()) v = nd(gen);
  ds.features = FeatureMatrix(x);
  const std::vector<MethodId> methods{MethodId::mlp, MethodId::lp1, MethodId::lp2, MethodId::link,
                                      MethodId::sgc1, MethodId::cs1};
  const auto table = benchmark(ds, methods, make_splits(ds.labels), small_grids(), 2);
  EXPECT_TRUE(table.errors.empty());
  for (const auto& r : table.results) {
    // Binomial spread of a 50-node test set around the majority rate.
    const double sd = std::sqrt(0.7 * 0.3 / 50);
    EXPECT_NEAR(r.mean, 0.7, 3 * sd) << r.method;
  }
}

TEST(Benchmark, DeterministicAndAggregatesStoredValues) {
  auto ds = archetype(ArchetypeKind::pure_homophily, 0, 3, 8);
  std::mt19937_64 gen(5);
  std::normal_distribution<double> nd;
  Matrix x(24, 3);
  for (auto& v : x.data()) v = nd(gen);
  ds.features = FeatureMatrix(x);
  const std::vector<MethodId> methods{MethodId::mlp, MethodId::sgc2, MethodId::cs2};
  const auto splits = make_splits(ds.labels, 3);
  const auto a = benchmark(ds, methods, splits, small_grids(), 1);
  const auto b = benchmark(ds, methods, splits, small_grids(), 4);
  EXPECT_EQ(a.csv(), b.csv());
  for (const auto& r : a.results) {
    EXPECT_EQ(r.mean, mean(r.values));
    EXPECT_EQ(r.std, sample_stddev(r.values));
    EXPECT_EQ(r.values.size(), 3u);
  }
  EXPECT_EQ(a.csv().substr(0, 26), "method,split,metric,value\n");
}

TEST(Benchmark, ErrorsKeepPartialResults) {
  const auto ds = archetype(ArchetypeKind::pure_homophily, 0, 3, 4);
  const auto table = benchmark(ds, {MethodId::lp1, MethodId::mlp}, make_splits(ds.labels, 2), small_grids());
  EXPECT_EQ(table.errors.size(), 2u);
  EXPECT_EQ(table.results[0].values.size(), 2u);
  EXPECT_NE(table.summary().find("mlp ERROR"), std::string::npos) << table.summary();
}

TEST(Benchmark, RocAucDataset) {
  auto ds = archetype(ArchetypeKind::pure_homophily, 0, 2, 12);
  ds.task_metric = TaskMetric::roc_auc;
  const auto table = benchmark(ds, {MethodId::lp1}, make_splits(ds.labels, 2), {});
  EXPECT_EQ(table.results[0].metric, "roc_auc");
  EXPECT_EQ(table.results[0].mean, 1.0);
}

}  // namespace
}  // namespace homophily
