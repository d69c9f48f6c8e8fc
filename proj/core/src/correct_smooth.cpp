#include "homophily/correct_smooth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "homophily/error.hpp"
#include "homophily/propagation.hpp"

namespace homophily {

void CsConfig::validate() const {
  if (!(alpha1 > 0.0 && alpha1 < 1.0) || !(alpha2 > 0.0 && alpha2 < 1.0))
    throw Error("C&S: alpha1 and alpha2 must lie in (0,1)");
  if (mode == CsScaling::fdiff && !(scale > 0.0)) throw Error("C&S: fdiff scale must be positive");
  if (hop != 1 && hop != 2) throw Error("C&S: hop must be 1 or 2");
  if (iterations < 1) throw Error("C&S: iterations must be >= 1");
}

std::string CsConfig::describe() const {
  char buf[160];
  if (mode == CsScaling::autoscale)
    std::snprintf(buf, sizeof buf, "A1=%s A2=%s alpha1=%g alpha2=%g autoscale", to_string(a1_scheme).c_str(),
                  to_string(a2_scheme).c_str(), alpha1, alpha2);
  else
    std::snprintf(buf, sizeof buf, "A1=%s A2=%s alpha1=%g alpha2=%g fdiff(%g)", to_string(a1_scheme).c_str(),
                  to_string(a2_scheme).c_str(), alpha1, alpha2, scale);
  return buf;
}

Matrix cs_correct(const SparseGraph& g, const NodeLabels& labels, std::span<const NodeId> train_idx,
                  const Matrix& base, const CsConfig& cfg) {
  cfg.validate();
  if (train_idx.empty()) throw Error("C&S needs a nonempty train set");
  if (base.rows() != labels.size() || base.cols() != static_cast<std::size_t>(labels.num_classes()))
    throw Error("C&S: base predictions have the wrong shape");
  const Matrix onehot = one_hot_rows(labels, train_idx);
  Matrix e0(base.rows(), base.cols());
  double sigma = 0.0;
  for (NodeId node : train_idx) {
    const auto i = static_cast<std::size_t>(node);
    for (std::size_t j = 0; j < base.cols(); ++j) {
      e0(i, j) = onehot(i, j) - base(i, j);
      sigma += std::abs(e0(i, j));
    }
  }
  sigma /= static_cast<double>(train_idx.size());

  const auto a1 = normalized_adjacency(g, cfg.a1_scheme, false);
  const Matrix e = residual_propagate(a1, e0, cfg.alpha1, cfg.iterations);

  Matrix corrected = base;
  for (std::size_t r = 0; r < base.rows(); ++r) {
    auto er = e.row(r);
    double s = cfg.scale;
    if (cfg.mode == CsScaling::autoscale) {
      double norm = 0.0;
      for (double v : er) norm += std::abs(v);
      s = sigma / norm;
      if (!std::isfinite(s) || s > 1000.0) s = 1.0;
    }
    auto cr = corrected.row(r);
    for (std::size_t j = 0; j < cr.size(); ++j) cr[j] += s * er[j];
  }
  return corrected;
}

Matrix cs_smooth(const SparseGraph& g, const NodeLabels& labels, std::span<const NodeId> train_idx,
                 const Matrix& corrected, const CsConfig& cfg) {
  cfg.validate();
  Matrix y0 = corrected;
  const Matrix onehot = one_hot_rows(labels, train_idx);
  for (NodeId node : train_idx) {
    const auto i = static_cast<std::size_t>(node);
    auto src = onehot.row(i);
    std::copy(src.begin(), src.end(), y0.row(i).begin());
  }
  const auto a2 = normalized_adjacency(g, cfg.a2_scheme, false);
  return residual_propagate(a2, y0, cfg.alpha2, cfg.iterations);
}

Matrix correct_and_smooth(const LabeledDataset& dataset, const SplitPlan& split, const Matrix& base,
                          const CsConfig& cfg) {
  cfg.validate();
  const SparseGraph g = propagation_graph(dataset.graph, cfg.hop);
  const Matrix corrected = cs_correct(g, dataset.labels, split.train_idx, base, cfg);
  return cs_smooth(g, dataset.labels, split.train_idx, corrected, cfg);
}

}  // namespace homophily
