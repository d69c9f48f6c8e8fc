#pragma once

#include <span>
#include <vector>

#include "homophily/graph.hpp"
#include "homophily/matrix.hpp"

namespace homophily {

struct LpConfig {
  double alpha = 0.9;
  int iterations = 50;
  NormScheme scheme = NormScheme::row;
  int hop = 1;

  void validate() const;
};

/// Y <- (1 - alpha) * Y0 + alpha * S * Y, starting from Y = Y0. Rows of S
/// that are empty (zero-degree nodes) keep their Y0 row.
Matrix residual_propagate(const SparseOperator& s, const Matrix& y0, double alpha, int iterations);

/// One-hot rows for `nodes`, zero elsewhere.
Matrix one_hot_rows(const NodeLabels& labels, std::span<const NodeId> nodes);

/// Label propagation on `g` exactly as given (no symmetrization, no two-hop
/// expansion; cfg.hop is ignored). Train rows are clamped to their one-hot
/// labels after the last step.
Matrix propagate_labels(const SparseGraph& g, const NodeLabels& labels, std::span<const NodeId> train_idx,
                        const LpConfig& cfg);

/// Graph the propagation-based methods run on: directed inputs are
/// symmetrized, and hop 2 swaps in the two-hop graph.
SparseGraph propagation_graph(const SparseGraph& g, int hop);

/// n x C label scores. Throws on an empty train set.
Matrix label_propagation(const LabeledDataset& dataset, std::span<const NodeId> train_idx, const LpConfig& cfg);

/// S^k X with S the chosen normalization of the stored graph. k = 0 returns
/// the features untouched.
FeatureMatrix sgc_features(const LabeledDataset& dataset, int k, NormScheme scheme = NormScheme::sym,
                           bool add_self_loops = true);

}  // namespace homophily
