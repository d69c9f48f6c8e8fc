#include <gtest/gtest.h>

#include <random>

#include "homophily/correct_smooth.hpp"
#include "homophily/error.hpp"
#include "homophily/propagation.hpp"
#include "oracles.hpp"

namespace homophily {
namespace {

SparseGraph undirected(std::vector<Edge> edges, NodeId n) {
  BuildOptions opts;
  opts.symmetrize = true;
  return build_graph(edges, n, opts);
}

LabeledDataset make_dataset(SparseGraph g, std::vector<int> labels, int c) {
  LabeledDataset ds;
  ds.graph = std::move(g);
  ds.labels = NodeLabels(std::move(labels), c);
  return ds;
}

NormScheme lib(oracle::Norm n) {
  return n == oracle::Norm::sym ? NormScheme::sym : n == oracle::Norm::row ? NormScheme::row : NormScheme::col;
}

TEST(LabelPropagation, PathTieGoesToLowestClass) {
  const auto ds = make_dataset(undirected({{0, 1}, {1, 2}}, 3), {0, 1, 1}, 2);
  const std::vector<NodeId> train{0, 2};
  const Matrix y = label_propagation(ds, train, {0.9, 50, NormScheme::row, 1});
  EXPECT_EQ(y(1, 0), y(1, 1));
  EXPECT_EQ(row_argmax(y)[1], 0);
  const auto want = oracle::label_propagation(oracle::dense_adjacency(ds.graph), ds.labels.values(), 2,
                                              {0, 2}, 0.9, 50, oracle::Norm::row);
  EXPECT_LT(oracle::max_diff(oracle::to_dense(y), want), 1e-12);
}

TEST(LabelPropagation, AllTrainReturnsLabels) {
  std::mt19937_64 gen(1);
  const auto lab = oracle::random_labels(gen, 20, 3);
  const auto ds = make_dataset(undirected(oracle::random_edges(gen, 20, 0.2), 20), lab, 3);
  std::vector<NodeId> all(20);
  for (NodeId i = 0; i < 20; ++i) all[i] = i;
  const auto pred = row_argmax(label_propagation(ds, all, {}));
  EXPECT_EQ(pred, lab);
}

TEST(LabelPropagation, StarOneStep) {
  const auto ds = make_dataset(undirected({{0, 1}, {0, 2}, {0, 3}, {0, 4}}, 5), {0, 1, 1, 2, 2}, 3);
  const std::vector<NodeId> train{0};
  const Matrix y = label_propagation(ds, train, {0.5, 1, NormScheme::row, 1});
  for (NodeId leaf = 1; leaf <= 4; ++leaf) {
    EXPECT_DOUBLE_EQ(y(leaf, 0), 0.5);
    EXPECT_EQ(y(leaf, 1), 0.0);
    EXPECT_EQ(y(leaf, 2), 0.0);
  }
}

TEST(LabelPropagation, Errors) {
  const auto ds = make_dataset(undirected({{0, 1}}, 2), {0, 1}, 2);
  EXPECT_THROW(label_propagation(ds, std::vector<NodeId>{}, {}), Error);
  EXPECT_THROW(label_propagation(ds, std::vector<NodeId>{0}, {1.0, 50, NormScheme::row, 1}), Error);
  EXPECT_THROW(label_propagation(ds, std::vector<NodeId>{0}, {0.5, 0, NormScheme::row, 1}), Error);
  EXPECT_THROW(label_propagation(ds, std::vector<NodeId>{0}, {0.5, 5, NormScheme::row, 3}), Error);
}

TEST(LabelPropagation, IsolatedNodesKeepInitialScores) {
  const auto ds = make_dataset(undirected({{0, 1}}, 3), {0, 1, 1}, 2);
  const Matrix y = label_propagation(ds, std::vector<NodeId>{0, 2}, {0.9, 10, NormScheme::row, 1});
  EXPECT_EQ(y(2, 1), 1.0);
  EXPECT_GT(y(1, 0), 0.0);
}

TEST(LabelPropagation, MatchesDenseOracle) {
  std::mt19937_64 gen(42);
  const oracle::Norm schemes[] = {oracle::Norm::row, oracle::Norm::sym, oracle::Norm::col};
  for (int trial = 0; trial < 30; ++trial) {
    const NodeId n = 4 + static_cast<NodeId>(gen() % 29);
    const int c = 2 + static_cast<int>(gen() % 3);
    const auto g = undirected(oracle::random_edges(gen, n, 0.1, true), n);
    const auto lab = oracle::random_labels(gen, n, c);
    std::vector<std::int64_t> train;
    for (NodeId i = 0; i < n; ++i)
      if (gen() % 2) train.push_back(i);
    if (train.empty()) train.push_back(0);
    const auto scheme = schemes[trial % 3];
    const double alpha = 0.1 + 0.8 * static_cast<double>(gen() % 100) / 100.0;
    const auto got = propagate_labels(g, NodeLabels(lab, c), train, {alpha, 50, lib(scheme), 1});
    const auto want = oracle::label_propagation(oracle::dense_adjacency(g), lab, c, train, alpha, 50, scheme);
    EXPECT_LT(oracle::max_diff(oracle::to_dense(got), want), 1e-8);
  }
}

TEST(LabelPropagation, RowSumsBoundedByOne) {
  std::mt19937_64 gen(43);
  const auto g = undirected(oracle::random_edges(gen, 30, 0.1, true), 30);
  const NodeLabels lab(oracle::random_labels(gen, 30, 3), 3);
  const std::vector<NodeId> train{0, 1, 2, 5, 9};
  for (int iters = 1; iters <= 20; ++iters) {
    const Matrix y = propagate_labels(g, lab, train, {0.9, iters, NormScheme::row, 1});
    for (std::size_t r = 0; r < y.rows(); ++r) {
      double s = 0.0;
      for (double v : y.row(r)) s += v;
      EXPECT_LE(s, 1.0 + 1e-12);
    }
  }
}

TEST(LabelPropagation, TwoHopEqualsOneHopOnTwoHopGraph) {
  std::mt19937_64 gen(44);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = undirected(oracle::random_edges(gen, 25, 0.1), 25);
    const auto ds = make_dataset(g, oracle::random_labels(gen, 25, 2), 2);
    const std::vector<NodeId> train{0, 1, 3, 7, 11};
    const Matrix two = label_propagation(ds, train, {0.8, 50, NormScheme::row, 2});
    const Matrix one = propagate_labels(two_hop_graph(g), ds.labels, train, {0.8, 50, NormScheme::row, 1});
    EXPECT_EQ(two, one);
  }
}

TEST(LabelPropagation, DirectedInputIsSymmetrized) {
  const std::vector<Edge> edges{{0, 1}, {2, 1}};
  auto ds = make_dataset(build_graph(edges, 3), {0, 0, 1}, 2);
  const std::vector<NodeId> train{0, 2};
  const Matrix y = label_propagation(ds, train, {});
  const Matrix sym = propagate_labels(symmetrized(ds.graph), ds.labels, train, {});
  EXPECT_EQ(y, sym);
}

// ---------------------------------------------------------------------------

TEST(SgcFeatures, ZeroHopsIsIdentity) {
  auto ds = make_dataset(undirected({{0, 1}}, 2), {0, 1}, 2);
  ds.features = FeatureMatrix(Matrix(2, 3, {1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(sgc_features(ds, 0), *ds.features);
}

TEST(SgcFeatures, SingleEdge) {
  auto ds = make_dataset(undirected({{0, 1}}, 2), {0, 1}, 2);
  ds.features = FeatureMatrix(Matrix(2, 2, {1, 0, 0, 1}));
  const Matrix x = sgc_features(ds, 1).dense();
  for (double v : x.data()) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(SgcFeatures, MissingFeatures) {
  const auto ds = make_dataset(undirected({{0, 1}}, 2), {0, 1}, 2);
  EXPECT_THROW(sgc_features(ds, 1), Error);
}

TEST(SgcFeatures, CompositionLinearityAndOracle) {
  std::mt19937_64 gen(45);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    const NodeId n = 3 + static_cast<NodeId>(gen() % 30);
    auto ds = make_dataset(undirected(oracle::random_edges(gen, n, 0.1), n), std::vector<int>(n, 0), 1);
    Matrix x1(n, 4), x2(n, 4);
    for (auto& v : x1.data()) v = nd(gen);
    for (auto& v : x2.data()) v = nd(gen);

    ds.features = FeatureMatrix(x1);
    const Matrix s1 = sgc_features(ds, 1).dense();
    const Matrix s2 = sgc_features(ds, 2).dense();
    auto once = ds;
    once.features = FeatureMatrix(s1);
    EXPECT_LT(max_abs_diff(sgc_features(once, 1).dense(), s2), 1e-12);

    const auto s = oracle::normalize(oracle::dense_adjacency(ds.graph), oracle::Norm::sym, true);
    const auto want = oracle::multiply(s, oracle::multiply(s, oracle::to_dense(x1)));
    EXPECT_LT(oracle::max_diff(oracle::to_dense(s2), want), 1e-12);

    const double a = 0.7;
    Matrix mix = x2;
    axpy(a, x1, mix);
    ds.features = FeatureMatrix(x2);
    Matrix lin = sgc_features(ds, 2).dense();
    axpy(a, s2, lin);
    ds.features = FeatureMatrix(mix);
    EXPECT_LT(max_abs_diff(sgc_features(ds, 2).dense(), lin), 1e-9);
  }
}

// ---------------------------------------------------------------------------

Matrix random_probs(std::mt19937_64& gen, std::size_t n, std::size_t c) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  Matrix z(n, c);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < c; ++j) s += z(i, j) = u(gen);
    for (std::size_t j = 0; j < c; ++j) z(i, j) /= s;
  }
  return z;
}

TEST(CorrectSmooth, MatchesDenseOracle) {
  std::mt19937_64 gen(46);
  const oracle::Norm schemes[] = {oracle::Norm::sym, oracle::Norm::row, oracle::Norm::col};
  for (int trial = 0; trial < 30; ++trial) {
    const NodeId n = 4 + static_cast<NodeId>(gen() % 29);
    const int c = 2 + static_cast<int>(gen() % 3);
    auto ds = make_dataset(undirected(oracle::random_edges(gen, n, 0.1, true), n), oracle::random_labels(gen, n, c),
                           c);
    SplitPlan split;
    for (NodeId i = 0; i < n; ++i)
      if (gen() % 2) split.train_idx.push_back(i);
    if (split.train_idx.empty()) split.train_idx.push_back(0);
    const Matrix z = random_probs(gen, n, c);
    CsConfig cfg;
    const auto a1 = schemes[gen() % 3], a2 = schemes[gen() % 3];
    cfg.a1_scheme = lib(a1);
    cfg.a2_scheme = lib(a2);
    cfg.alpha1 = 0.05 + 0.9 * static_cast<double>(gen() % 100) / 100.0;
    cfg.alpha2 = 0.05 + 0.9 * static_cast<double>(gen() % 100) / 100.0;
    cfg.mode = trial % 2 ? CsScaling::fdiff : CsScaling::autoscale;
    cfg.scale = 0.5 + static_cast<double>(gen() % 3) * 0.5;
    const Matrix got = correct_and_smooth(ds, split, z, cfg);
    const auto want = oracle::correct_and_smooth(oracle::dense_adjacency(ds.graph), ds.labels.values(), c,
                                                 split.train_idx, oracle::to_dense(z), a1, a2, cfg.alpha1,
                                                 cfg.alpha2, cfg.mode == CsScaling::autoscale, cfg.scale, 50);
    EXPECT_LT(oracle::max_diff(oracle::to_dense(got), want), 1e-6) << "trial " << trial;
  }
}

TEST(CorrectSmooth, PerfectBaseIsFixedPoint) {
  std::mt19937_64 gen(47);
  const NodeId n = 24;
  const auto lab = oracle::random_labels(gen, n, 3);
  auto ds = make_dataset(undirected(oracle::random_edges(gen, n, 0.15, true), n), lab, 3);
  Matrix z(n, 3);
  for (NodeId i = 0; i < n; ++i) z(i, lab[i]) = 1.0;
  SplitPlan split;
  split.train_idx = {0, 1, 2, 3, 4, 5};
  for (auto mode : {CsScaling::autoscale, CsScaling::fdiff}) {
    CsConfig cfg;
    cfg.mode = mode;
    const Matrix corrected = cs_correct(ds.graph, ds.labels, split.train_idx, z, cfg);
    EXPECT_EQ(corrected, z);
    EXPECT_EQ(row_argmax(correct_and_smooth(ds, split, z, cfg)), row_argmax(z));
  }
}

TEST(CorrectSmooth, SmallAlphaStaysNearBase) {
  std::mt19937_64 gen(48);
  int changed = 0, total = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const NodeId n = 32;
    auto ds = make_dataset(undirected(oracle::random_edges(gen, n, 0.1, true), n), oracle::random_labels(gen, n, 3),
                           3);
    SplitPlan split;
    for (NodeId i = 0; i < n; i += 3) split.train_idx.push_back(i);
    const Matrix z = random_probs(gen, n, 3);
    CsConfig cfg;
    cfg.alpha1 = cfg.alpha2 = 0.01;
    cfg.mode = CsScaling::fdiff;
    Matrix clamped = z;
    for (NodeId x : split.train_idx)
      for (int k = 0; k < 3; ++k) clamped(x, k) = ds.labels[x] == k;
    const auto got = row_argmax(correct_and_smooth(ds, split, z, cfg));
    const auto base = row_argmax(clamped);
    for (NodeId i = 0; i < n; ++i) changed += got[i] != base[i];
    total += n;
  }
  EXPECT_LT(static_cast<double>(changed) / total, 0.05);
}

TEST(CorrectSmooth, StrictAboutIsolatedNodes) {
  auto ds = make_dataset(undirected({{0, 1}}, 3), {0, 1, 0}, 2);
  SplitPlan split;
  split.train_idx = {0};
  EXPECT_THROW(correct_and_smooth(ds, split, Matrix(3, 2, 0.5), {}), NodeSetError);
}

TEST(CorrectSmooth, ConfigValidation) {
  CsConfig cfg;
  cfg.alpha1 = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = {};
  cfg.mode = CsScaling::fdiff;
  cfg.scale = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
}

}  // namespace
}  // namespace homophily
