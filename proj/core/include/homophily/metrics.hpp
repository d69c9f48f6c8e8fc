#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homophily/graph.hpp"
#include "homophily/matrix.hpp"

namespace homophily {

// All statistics ignore self-loops and edge weights. Degrees are out-degrees,
// so directed graphs are measured in their stored orientation. Every
// operation rejects unlabeled nodes.

/// C x C arc counts: entry (k,l) is the number of arcs u->v with k_u = k and
/// k_v = l.
std::vector<std::int64_t> class_pair_counts(const SparseGraph& g, const NodeLabels& labels);

double edge_homophily(const SparseGraph& g, const NodeLabels& labels);
double node_homophily(const SparseGraph& g, const NodeLabels& labels);

/// h_k per class. A class whose members have no outgoing arcs gets h_k = 0
/// (it cannot contribute a positive excess); `zero_degree_classes` receives
/// those ids when non-null.
std::vector<double> class_homophily(const SparseGraph& g, const NodeLabels& labels,
                                    std::vector<int>* zero_degree_classes = nullptr);

double improved_homophily(const SparseGraph& g, const NodeLabels& labels);

/// Row-normalized class-pair counts. Rows of classes without outgoing arcs
/// are zero and reported through `empty_rows`.
Matrix compatibility_matrix(const SparseGraph& g, const NodeLabels& labels,
                            std::vector<int>* empty_rows = nullptr);

struct HomophilyReport {
  std::string dataset;
  std::int64_t num_nodes = 0;
  std::int64_t num_edges = 0;
  int num_classes = 0;
  bool directed = false;
  double edge_hom = 0.0;
  // Unset for directed graphs that contain sinks (zero out-degree nodes with
  // incoming arcs), where the per-node ratio is undefined.
  std::optional<double> node_hom;
  std::vector<double> class_hom;
  double improved_hom = 0.0;
  Matrix compat;
  std::vector<double> null_baselines;
  std::vector<int> empty_compat_rows;
  std::vector<std::int64_t> sink_nodes;

  std::string to_json() const;
  // H as CSV with a header row `class,0,1,...`.
  std::string compat_csv() const;
};

HomophilyReport analyze(const LabeledDataset& dataset);

}  // namespace homophily
