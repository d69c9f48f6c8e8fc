#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "homophily/graph.hpp"

namespace homophily {

struct SplitPlan {
  std::vector<NodeId> train_idx;
  std::vector<NodeId> val_idx;
  std::vector<NodeId> test_idx;
  std::uint64_t seed = 0;
  std::array<double, 3> fractions{0.5, 0.25, 0.25};
};

/// Random train/val/test partitions of the labeled nodes, one per split.
/// Split i is drawn with child_seed(base_seed, i). Sizes are
/// round(f_train * m), round(f_val * m) and the remainder. Index sets are
/// returned sorted.
std::vector<SplitPlan> make_splits(const NodeLabels& labels, int n_splits = 5,
                                   std::array<double, 3> fractions = {0.5, 0.25, 0.25},
                                   std::uint64_t base_seed = 0, bool stratify = false);

// Copy of `labels` with every node outside `keep` marked missing. Metric
// functions refuse to score a node whose truth is missing, so handing them a
// masked array guarantees they never read labels outside the scored set.
std::vector<int> mask_labels(const NodeLabels& labels, std::span<const NodeId> keep);

double accuracy(std::span<const int> pred, std::span<const int> truth, std::span<const NodeId> idx);

/// Mann-Whitney AUC with midranks for tied scores. `truth` holds 0/1.
double roc_auc(std::span<const double> scores, std::span<const int> truth, std::span<const NodeId> idx);

}  // namespace homophily
