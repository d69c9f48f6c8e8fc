#include "homophily/propagation.hpp"

#include <algorithm>

#include "homophily/error.hpp"

namespace homophily {

void LpConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("label propagation: alpha must lie in (0,1)");
  if (iterations < 1) throw Error("label propagation: iterations must be >= 1");
  if (hop != 1 && hop != 2) throw Error("label propagation: hop must be 1 or 2");
}

Matrix residual_propagate(const SparseOperator& s, const Matrix& y0, double alpha, int iterations) {
  Matrix y = y0;
  for (int it = 0; it < iterations; ++it) {
    Matrix next = s.apply(y);
    auto& nd = next.data();
    const auto& d0 = y0.data();
    for (std::size_t i = 0; i < nd.size(); ++i) nd[i] = (1.0 - alpha) * d0[i] + alpha * nd[i];
    for (std::size_t r = 0; r < s.rows; ++r) {
      if (!s.row_empty(r)) continue;
      auto dst = next.row(r);
      auto src = y0.row(r);
      std::copy(src.begin(), src.end(), dst.begin());
    }
    y = std::move(next);
  }
  return y;
}

Matrix one_hot_rows(const NodeLabels& labels, std::span<const NodeId> nodes) {
  Matrix y(labels.size(), static_cast<std::size_t>(labels.num_classes()));
  for (NodeId x : nodes) {
    if (x < 0 || static_cast<std::size_t>(x) >= labels.size())
      throw Error("node " + std::to_string(x) + " out of range");
    if (!labels.labeled(static_cast<std::size_t>(x)))
      throw NodeSetError("index set contains unlabeled nodes", {x});
    y(static_cast<std::size_t>(x), static_cast<std::size_t>(labels[x])) = 1.0;
  }
  return y;
}

Matrix propagate_labels(const SparseGraph& g, const NodeLabels& labels, std::span<const NodeId> train_idx,
                        const LpConfig& cfg) {
  cfg.validate();
  if (train_idx.empty()) throw Error("label propagation needs a nonempty train set");
  const Matrix y0 = one_hot_rows(labels, train_idx);
  const auto s = normalized_adjacency(g, cfg.scheme, false, DegenerateNodes::skip);
  Matrix y = residual_propagate(s, y0, cfg.alpha, cfg.iterations);
  for (NodeId x : train_idx) {
    auto dst = y.row(static_cast<std::size_t>(x));
    auto src = y0.row(static_cast<std::size_t>(x));
    std::copy(src.begin(), src.end(), dst.begin());
  }
  return y;
}

SparseGraph propagation_graph(const SparseGraph& g, int hop) {
  SparseGraph base = g.directed() ? symmetrized(g) : g;
  return hop == 2 ? two_hop_graph(base) : base;
}

Matrix label_propagation(const LabeledDataset& dataset, std::span<const NodeId> train_idx, const LpConfig& cfg) {
  cfg.validate();
  return propagate_labels(propagation_graph(dataset.graph, cfg.hop), dataset.labels, train_idx, cfg);
}

FeatureMatrix sgc_features(const LabeledDataset& dataset, int k, NormScheme scheme, bool add_self_loops) {
  if (!dataset.features) throw Error("SGC needs node features; dataset '" + dataset.name + "' has none");
  if (k < 0) throw Error("SGC hop count must be >= 0");
  if (k == 0) return *dataset.features;
  const auto s = normalized_adjacency(dataset.graph, scheme, add_self_loops);
  Matrix x = dataset.features->to_dense();
  for (int i = 0; i < k; ++i) x = s.apply(x);
  return FeatureMatrix(std::move(x));
}

}  // namespace homophily
