#pragma once

#include <string>

#include "homophily/graph.hpp"
#include "homophily/matrix.hpp"
#include "homophily/scoring.hpp"

namespace homophily {

enum class CsScaling { autoscale, fdiff };

struct CsConfig {
  NormScheme a1_scheme = NormScheme::sym;
  NormScheme a2_scheme = NormScheme::sym;
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  CsScaling mode = CsScaling::autoscale;
  double scale = 1.0;  // fdiff only
  int hop = 1;
  int iterations = 50;

  void validate() const;
  std::string describe() const;
};

/// Correct & Smooth post-processing of base class probabilities `base`
/// (n x C). Runs on the symmetrized graph (two-hop graph for hop = 2).
///
/// Correct: E0 = onehot - Z on train rows (zero elsewhere), propagated as
/// E <- (1-a1) E0 + a1 A1 E. Autoscale rescales each row of E to the mean
/// train-row l1 residual norm sigma (scale sigma/|E_i|_1, reset to 1 when
/// infinite or above 1000); fdiff multiplies by the fixed `scale`.
/// Smooth: Z' = Z + scaled E, train rows clamped to one-hot, then
/// Y <- (1-a2) Y0 + a2 A2 Y.
Matrix correct_and_smooth(const LabeledDataset& dataset, const SplitPlan& split, const Matrix& base,
                          const CsConfig& cfg);

// The two halves, exposed for grid search that shares corrected outputs.
Matrix cs_correct(const SparseGraph& g, const NodeLabels& labels, std::span<const NodeId> train_idx,
                  const Matrix& base, const CsConfig& cfg);
Matrix cs_smooth(const SparseGraph& g, const NodeLabels& labels, std::span<const NodeId> train_idx,
                 const Matrix& corrected, const CsConfig& cfg);

}  // namespace homophily
