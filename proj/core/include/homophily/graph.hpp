#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "homophily/matrix.hpp"

namespace homophily {

using NodeId = std::int64_t;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;
};

struct BuildOptions {
  bool symmetrize = false;
  // Duplicate arcs are always collapsed to keep the CSR canonical; with
  // dedupe off a duplicate is reported as an error instead.
  bool dedupe = true;
  bool drop_self_loops = true;
  // Keep per-arc weights. Unweighted graphs store no weight array.
  bool weighted = false;
};

/// Immutable compressed sparse row adjacency over `n` nodes.
///
/// Column indices inside a row are strictly increasing. An undirected graph
/// stores each edge {u,v} as the two arcs u->v and v->u. Degree is the
/// out-degree, i.e. the row length.
class SparseGraph {
 public:
  SparseGraph() : offsets_(1, 0) {}

  /// Validating constructor from raw CSR arrays. Throws GraphError when the
  /// arrays violate canonical form (unsorted or duplicate columns, out of
  /// range ids, asymmetric adjacency for an undirected graph).
  SparseGraph(std::vector<NodeId> offsets, std::vector<NodeId> indices,
              std::vector<double> weights, bool directed);

  NodeId num_nodes() const noexcept { return static_cast<NodeId>(offsets_.size()) - 1; }
  NodeId num_arcs() const noexcept { return static_cast<NodeId>(indices_.size()); }
  // Undirected edge count (self-loops counted once) or arc count if directed.
  NodeId num_edges() const noexcept;
  bool directed() const noexcept { return directed_; }
  bool weighted() const noexcept { return !weights_.empty(); }

  NodeId degree(NodeId x) const { return offsets_[x + 1] - offsets_[x]; }
  std::span<const NodeId> neighbors(NodeId x) const {
    return {indices_.data() + offsets_[x], static_cast<std::size_t>(degree(x))};
  }
  std::span<const double> weights(NodeId x) const {
    if (weights_.empty()) return {};
    return {weights_.data() + offsets_[x], static_cast<std::size_t>(degree(x))};
  }
  bool has_arc(NodeId u, NodeId v) const;
  NodeId num_self_loops() const;

  const std::vector<NodeId>& offsets() const noexcept { return offsets_; }
  const std::vector<NodeId>& indices() const noexcept { return indices_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  bool operator==(const SparseGraph&) const = default;

 private:
  std::vector<NodeId> offsets_;
  std::vector<NodeId> indices_;
  std::vector<double> weights_;
  bool directed_ = true;
};

SparseGraph build_graph(std::span<const Edge> edges, NodeId n, const BuildOptions& options = {});

// Undirected copy of `g`: every arc gets its reverse. Weights are dropped.
SparseGraph symmetrized(const SparseGraph& g);

// Unweighted arc (u,w) iff some u->v->w path exists with w != u.
SparseGraph two_hop_graph(const SparseGraph& g);

// ---------------------------------------------------------------------------

/// Sparse linear operator in CSR form (rows x cols).
struct SparseOperator {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> indices;
  std::vector<double> values;

  // this * x
  Matrix apply(const Matrix& x) const;
  Matrix to_dense() const;
  bool row_empty(std::size_t r) const { return offsets[r] == offsets[r + 1]; }
};

enum class NormScheme { sym, row, col };

std::string to_string(NormScheme s);
NormScheme parse_norm_scheme(const std::string& s);

enum class DegenerateNodes {
  // Zero-degree nodes that the scheme divides by raise NodeSetError.
  error,
  // Such nodes simply get empty rows/columns.
  skip,
};

/// D^{-1/2}(A[+I])D^{-1/2}, D^{-1}(A[+I]) or (A[+I])D^{-1}, with D the
/// out-degree (row sum of weights) after the optional self-loops.
SparseOperator normalized_adjacency(const SparseGraph& g, NormScheme scheme, bool add_self_loops,
                                    DegenerateNodes policy = DegenerateNodes::error);

// ---------------------------------------------------------------------------

class NodeLabels {
 public:
  static constexpr int kMissing = -1;

  NodeLabels() = default;
  // Throws Error if num_classes < 1 or a label is outside {-1, 0..C-1}.
  NodeLabels(std::vector<int> labels, int num_classes);

  std::size_t size() const noexcept { return labels_.size(); }
  int num_classes() const noexcept { return num_classes_; }
  int operator[](std::size_t i) const { return labels_[i]; }
  bool labeled(std::size_t i) const { return labels_[i] != kMissing; }
  const std::vector<int>& values() const noexcept { return labels_; }
  const std::vector<std::int64_t>& class_sizes() const noexcept { return class_sizes_; }
  std::int64_t num_labeled() const noexcept { return num_labeled_; }
  std::vector<NodeId> unlabeled_nodes() const;

  bool operator==(const NodeLabels&) const = default;

 private:
  std::vector<int> labels_;
  int num_classes_ = 0;
  std::vector<std::int64_t> class_sizes_;
  std::int64_t num_labeled_ = 0;
};

/// Sparse row storage for wide, mostly-zero features (LINK adjacency rows,
/// bag-of-words inputs).
struct SparseRows {
  std::size_t cols = 0;
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> indices;
  std::vector<double> values;

  std::size_t rows() const { return offsets.size() - 1; }
  bool operator==(const SparseRows&) const = default;
};

class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  explicit FeatureMatrix(Matrix dense);
  explicit FeatureMatrix(SparseRows sparse);

  std::size_t rows() const;
  std::size_t cols() const;
  bool is_sparse() const { return std::holds_alternative<SparseRows>(storage_); }
  const Matrix& dense() const { return std::get<Matrix>(storage_); }
  const SparseRows& sparse() const { return std::get<SparseRows>(storage_); }

  Matrix to_dense() const;
  // X * w  (w: cols x k)
  Matrix multiply(const Matrix& w) const;
  // X^T * g  (g: rows x k)
  Matrix multiply_transposed(const Matrix& g) const;
  // Number of stored nonzeros in row r.
  std::size_t row_nnz(std::size_t r) const;

  bool operator==(const FeatureMatrix&) const = default;

 private:
  std::variant<Matrix, SparseRows> storage_;
};

enum class TaskMetric { accuracy, roc_auc };

std::string to_string(TaskMetric m);
TaskMetric parse_task_metric(const std::string& s);

struct LabeledDataset {
  std::string name;
  SparseGraph graph;
  NodeLabels labels;
  std::optional<FeatureMatrix> features;
  TaskMetric task_metric = TaskMetric::accuracy;

  // Throws Error on dimension mismatch or roc_auc with C != 2.
  void validate() const;
};

}  // namespace homophily
