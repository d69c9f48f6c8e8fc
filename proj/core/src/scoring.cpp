#include "homophily/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "homophily/error.hpp"
#include "homophily/random.hpp"

namespace homophily {

namespace {

void split_block(std::vector<NodeId>& nodes, Rng& rng, const std::array<double, 3>& f, SplitPlan& plan) {
  rng.shuffle(std::span<NodeId>(nodes));
  const auto m = static_cast<double>(nodes.size());
  const auto n_train = static_cast<std::size_t>(std::llround(f[0] * m));
  const auto n_val = std::min(nodes.size() - n_train, static_cast<std::size_t>(std::llround(f[1] * m)));
  plan.train_idx.insert(plan.train_idx.end(), nodes.begin(), nodes.begin() + n_train);
  plan.val_idx.insert(plan.val_idx.end(), nodes.begin() + n_train, nodes.begin() + n_train + n_val);
  plan.test_idx.insert(plan.test_idx.end(), nodes.begin() + n_train + n_val, nodes.end());
}

void check_idx(std::span<const int> truth, std::span<const NodeId> idx) {
  if (idx.empty()) throw UndefinedMetricError("metric over an empty index set");
  for (NodeId i : idx) {
    if (i < 0 || static_cast<std::size_t>(i) >= truth.size())
      throw Error("metric index " + std::to_string(i) + " out of range");
    if (truth[i] == NodeLabels::kMissing) throw NodeSetError("metric index set contains unlabeled nodes", {i});
  }
}

}  // namespace

std::vector<SplitPlan> make_splits(const NodeLabels& labels, int n_splits, std::array<double, 3> fractions,
                                   std::uint64_t base_seed, bool stratify) {
  if (labels.num_labeled() < 4) throw Error("need at least 4 labeled nodes to split");
  if (n_splits < 1) throw Error("need at least one split");
  const double total = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(total - 1.0) > 1e-9 || fractions[0] <= 0.0 || fractions[1] < 0.0 || fractions[2] < 0.0)
    throw Error("split fractions must be nonnegative and sum to 1");

  std::vector<SplitPlan> plans;
  for (int s = 0; s < n_splits; ++s) {
    SplitPlan plan;
    plan.seed = child_seed(base_seed, static_cast<std::uint64_t>(s));
    plan.fractions = fractions;
    Rng rng(plan.seed);
    if (stratify) {
      for (int k = 0; k < labels.num_classes(); ++k) {
        std::vector<NodeId> members;
        for (std::size_t i = 0; i < labels.size(); ++i)
          if (labels[i] == k) members.push_back(static_cast<NodeId>(i));
        split_block(members, rng, fractions, plan);
      }
    } else {
      std::vector<NodeId> nodes;
      for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels.labeled(i)) nodes.push_back(static_cast<NodeId>(i));
      split_block(nodes, rng, fractions, plan);
    }
    std::sort(plan.train_idx.begin(), plan.train_idx.end());
    std::sort(plan.val_idx.begin(), plan.val_idx.end());
    std::sort(plan.test_idx.begin(), plan.test_idx.end());
    plans.push_back(std::move(plan));
  }
  return plans;
}

std::vector<int> mask_labels(const NodeLabels& labels, std::span<const NodeId> keep) {
  std::vector<int> out(labels.size(), NodeLabels::kMissing);
  for (NodeId i : keep) out[static_cast<std::size_t>(i)] = labels[static_cast<std::size_t>(i)];
  return out;
}

double accuracy(std::span<const int> pred, std::span<const int> truth, std::span<const NodeId> idx) {
  check_idx(truth, idx);
  if (pred.size() != truth.size()) throw Error("prediction and truth lengths differ");
  std::size_t hits = 0;
  for (NodeId i : idx) hits += pred[i] == truth[i] ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(idx.size());
}

double roc_auc(std::span<const double> scores, std::span<const int> truth, std::span<const NodeId> idx) {
  check_idx(truth, idx);
  if (scores.size() != truth.size()) throw Error("score and truth lengths differ");
  std::vector<NodeId> order(idx.begin(), idx.end());
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return scores[a] < scores[b]; });

  double rank_sum_pos = 0.0;
  std::int64_t n_pos = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    // Ranks i+1 .. j share their average.
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t) {
      const int y = truth[order[t]];
      if (y != 0 && y != 1) throw Error("roc_auc needs binary truth labels");
      if (y == 1) {
        rank_sum_pos += midrank;
        ++n_pos;
      }
    }
    i = j;
  }
  const auto n_neg = static_cast<std::int64_t>(order.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) throw UndefinedMetricError("roc_auc is undefined when only one class is present");
  const double pos = static_cast<double>(n_pos);
  return (rank_sum_pos - pos * (pos + 1.0) / 2.0) / (pos * static_cast<double>(n_neg));
}

}  // namespace homophily
