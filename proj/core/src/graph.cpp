#include "homophily/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "homophily/error.hpp"

namespace homophily {

SparseGraph::SparseGraph(std::vector<NodeId> offsets, std::vector<NodeId> indices,
                         std::vector<double> weights, bool directed)
    : offsets_(std::move(offsets)),
      indices_(std::move(indices)),
      weights_(std::move(weights)),
      directed_(directed) {
  if (offsets_.empty() || offsets_.front() != 0) throw GraphError("CSR offsets must start at 0");
  if (offsets_.back() != static_cast<NodeId>(indices_.size()))
    throw GraphError("CSR offsets do not cover the index array");
  if (!weights_.empty() && weights_.size() != indices_.size())
    throw GraphError("CSR weight array length differs from index array");
  const NodeId n = num_nodes();
  for (NodeId x = 0; x < n; ++x) {
    if (offsets_[x + 1] < offsets_[x]) throw GraphError("CSR offsets decrease at row " + std::to_string(x));
    auto nb = neighbors(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (nb[i] < 0 || nb[i] >= n)
        throw GraphError("arc (" + std::to_string(x) + "," + std::to_string(nb[i]) + ") out of range");
      if (i > 0 && nb[i] <= nb[i - 1])
        throw GraphError("row " + std::to_string(x) + " is not strictly increasing");
    }
  }
  if (!directed_) {
    for (NodeId x = 0; x < n; ++x)
      for (NodeId v : neighbors(x))
        if (!has_arc(v, x))
          throw GraphError("undirected graph missing reverse arc of (" + std::to_string(x) + "," +
                           std::to_string(v) + ")");
  }
}

NodeId SparseGraph::num_edges() const noexcept {
  if (directed_) return num_arcs();
  const NodeId loops = num_self_loops();
  return (num_arcs() - loops) / 2 + loops;
}

bool SparseGraph::has_arc(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

NodeId SparseGraph::num_self_loops() const {
  NodeId loops = 0;
  for (NodeId x = 0; x < num_nodes(); ++x) loops += has_arc(x, x) ? 1 : 0;
  return loops;
}

SparseGraph build_graph(std::span<const Edge> edges, NodeId n, const BuildOptions& options) {
  if (n < 0) throw GraphError("negative node count");
  std::vector<Edge> arcs;
  arcs.reserve(options.symmetrize ? 2 * edges.size() : edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Edge& e = edges[i];
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n) {
      std::ostringstream os;
      os << "edge #" << i << " (" << e.src << "," << e.dst << ") has an endpoint outside [0," << n << ")";
      throw GraphError(os.str());
    }
    if (options.drop_self_loops && e.src == e.dst) continue;
    arcs.push_back(e);
    if (options.symmetrize && e.src != e.dst) arcs.push_back({e.dst, e.src, e.weight});
  }
  // Stable so that the first occurrence of a duplicate keeps its weight.
  std::stable_sort(arcs.begin(), arcs.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });

  std::vector<NodeId> offsets(static_cast<std::size_t>(n) + 1, 0);
  std::vector<NodeId> indices;
  std::vector<double> weights;
  indices.reserve(arcs.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Edge& e = arcs[i];
    if (i > 0 && arcs[i - 1].src == e.src && arcs[i - 1].dst == e.dst) {
      if (!options.dedupe && !options.symmetrize)
        throw GraphError("duplicate arc (" + std::to_string(e.src) + "," + std::to_string(e.dst) + ")");
      continue;
    }
    indices.push_back(e.dst);
    if (options.weighted) weights.push_back(e.weight);
    ++offsets[static_cast<std::size_t>(e.src) + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return SparseGraph(std::move(offsets), std::move(indices), std::move(weights), !options.symmetrize);
}

SparseGraph symmetrized(const SparseGraph& g) {
  if (!g.directed() && !g.weighted()) return g;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(g.num_arcs()));
  for (NodeId x = 0; x < g.num_nodes(); ++x)
    for (NodeId v : g.neighbors(x)) edges.push_back({x, v, 1.0});
  BuildOptions opt;
  opt.symmetrize = true;
  opt.drop_self_loops = false;
  return build_graph(edges, g.num_nodes(), opt);
}

SparseGraph two_hop_graph(const SparseGraph& g) {
  const NodeId n = g.num_nodes();
  std::vector<NodeId> offsets(static_cast<std::size_t>(n) + 1, 0);
  std::vector<NodeId> indices;
  // mark[w] == u + 1 means w was already emitted for row u.
  std::vector<NodeId> mark(static_cast<std::size_t>(n), 0);
  std::vector<NodeId> row;
  for (NodeId u = 0; u < n; ++u) {
    row.clear();
    for (NodeId v : g.neighbors(u)) {
      for (NodeId w : g.neighbors(v)) {
        if (w == u || mark[w] == u + 1) continue;
        mark[w] = u + 1;
        row.push_back(w);
      }
    }
    std::sort(row.begin(), row.end());
    indices.insert(indices.end(), row.begin(), row.end());
    offsets[u + 1] = static_cast<NodeId>(indices.size());
  }
  return SparseGraph(std::move(offsets), std::move(indices), {}, g.directed());
}

// ---------------------------------------------------------------------------

Matrix SparseOperator::apply(const Matrix& x) const {
  if (x.rows() != cols) throw std::invalid_argument("SparseOperator::apply: shape mismatch");
  Matrix out(rows, x.cols());
  for (std::size_t r = 0; r < rows; ++r) {
    auto orow = out.row(r);
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) {
      const double v = values[k];
      auto xrow = x.row(indices[k]);
      for (std::size_t j = 0; j < orow.size(); ++j) orow[j] += v * xrow[j];
    }
  }
  return out;
}

Matrix SparseOperator::to_dense() const {
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t k = offsets[r]; k < offsets[r + 1]; ++k) out(r, indices[k]) += values[k];
  return out;
}

std::string to_string(NormScheme s) {
  switch (s) {
    case NormScheme::sym: return "sym";
    case NormScheme::row: return "row";
    case NormScheme::col: return "col";
  }
  return "?";
}

NormScheme parse_norm_scheme(const std::string& s) {
  if (s == "sym") return NormScheme::sym;
  if (s == "row") return NormScheme::row;
  if (s == "col") return NormScheme::col;
  throw Error("unknown normalization scheme '" + s + "' (expected sym, row or col)");
}

SparseOperator normalized_adjacency(const SparseGraph& g, NormScheme scheme, bool add_self_loops,
                                    DegenerateNodes policy) {
  const auto n = static_cast<std::size_t>(g.num_nodes());
  SparseOperator op;
  op.rows = op.cols = n;
  op.offsets.assign(n + 1, 0);
  op.indices.reserve(static_cast<std::size_t>(g.num_arcs()) + (add_self_loops ? n : 0));
  op.values.reserve(op.indices.capacity());

  // Raw (A [+ I]) in CSR, keeping rows sorted.
  for (std::size_t x = 0; x < n; ++x) {
    auto nb = g.neighbors(static_cast<NodeId>(x));
    auto w = g.weights(static_cast<NodeId>(x));
    bool loop_done = !add_self_loops;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      const auto v = static_cast<std::size_t>(nb[i]);
      const double wt = w.empty() ? 1.0 : w[i];
      if (!loop_done && v >= x) {
        if (v == x) {
          op.indices.push_back(x);
          op.values.push_back(wt + 1.0);
          loop_done = true;
          continue;
        }
        op.indices.push_back(x);
        op.values.push_back(1.0);
        loop_done = true;
      }
      op.indices.push_back(v);
      op.values.push_back(wt);
    }
    if (!loop_done) {
      op.indices.push_back(x);
      op.values.push_back(1.0);
    }
    op.offsets[x + 1] = op.indices.size();
  }

  std::vector<double> degree(n, 0.0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t k = op.offsets[x]; k < op.offsets[x + 1]; ++k) degree[x] += op.values[k];

  std::vector<NodeId> degenerate;
  if (scheme == NormScheme::col) {
    std::vector<bool> seen(n, false);
    for (std::size_t k = 0; k < op.indices.size(); ++k) {
      const auto c = op.indices[k];
      if (degree[c] <= 0.0 && !seen[c]) {
        seen[c] = true;
        degenerate.push_back(static_cast<NodeId>(c));
      }
    }
    std::sort(degenerate.begin(), degenerate.end());
  } else {
    for (std::size_t x = 0; x < n; ++x)
      if (degree[x] <= 0.0) degenerate.push_back(static_cast<NodeId>(x));
  }
  if (!degenerate.empty() && policy == DegenerateNodes::error)
    throw NodeSetError("zero-degree nodes under '" + to_string(scheme) + "' normalization", degenerate);

  auto inv = [](double d) { return d > 0.0 ? 1.0 / d : 0.0; };
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t k = op.offsets[x]; k < op.offsets[x + 1]; ++k) {
      const auto c = op.indices[k];
      switch (scheme) {
        case NormScheme::sym:
          op.values[k] *= std::sqrt(inv(degree[x])) * std::sqrt(inv(degree[c]));
          break;
        case NormScheme::row: op.values[k] *= inv(degree[x]); break;
        case NormScheme::col: op.values[k] *= inv(degree[c]); break;
      }
    }
  }
  return op;
}

// ---------------------------------------------------------------------------

NodeLabels::NodeLabels(std::vector<int> labels, int num_classes)
    : labels_(std::move(labels)), num_classes_(num_classes), class_sizes_(std::max(num_classes, 0), 0) {
  if (num_classes < 1) throw Error("class count must be at least 1");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const int k = labels_[i];
    if (k == kMissing) continue;
    if (k < 0 || k >= num_classes)
      throw Error("label " + std::to_string(k) + " of node " + std::to_string(i) + " outside [0," +
                  std::to_string(num_classes) + ")");
    ++class_sizes_[k];
    ++num_labeled_;
  }
}

std::vector<NodeId> NodeLabels::unlabeled_nodes() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == kMissing) out.push_back(static_cast<NodeId>(i));
  return out;
}

// ---------------------------------------------------------------------------

FeatureMatrix::FeatureMatrix(Matrix dense) : storage_(std::move(dense)) {
  for (double v : this->dense().data())
    if (!std::isfinite(v)) throw Error("feature matrix contains a non-finite entry");
}

FeatureMatrix::FeatureMatrix(SparseRows sparse) : storage_(std::move(sparse)) {
  const auto& s = this->sparse();
  if (s.offsets.empty() || s.offsets.back() != s.indices.size() || s.values.size() != s.indices.size())
    throw Error("malformed sparse feature rows");
  for (std::size_t k = 0; k < s.indices.size(); ++k) {
    if (s.indices[k] >= s.cols) throw Error("sparse feature column out of range");
    if (!std::isfinite(s.values[k])) throw Error("feature matrix contains a non-finite entry");
  }
}

std::size_t FeatureMatrix::rows() const { return is_sparse() ? sparse().rows() : dense().rows(); }
std::size_t FeatureMatrix::cols() const { return is_sparse() ? sparse().cols : dense().cols(); }

Matrix FeatureMatrix::to_dense() const {
  if (!is_sparse()) return dense();
  const auto& s = sparse();
  Matrix out(s.rows(), s.cols);
  for (std::size_t r = 0; r < s.rows(); ++r)
    for (std::size_t k = s.offsets[r]; k < s.offsets[r + 1]; ++k) out(r, s.indices[k]) += s.values[k];
  return out;
}

Matrix FeatureMatrix::multiply(const Matrix& w) const {
  if (!is_sparse()) return matmul(dense(), w);
  const auto& s = sparse();
  if (w.rows() != s.cols) throw std::invalid_argument("FeatureMatrix::multiply: shape mismatch");
  Matrix out(s.rows(), w.cols());
  for (std::size_t r = 0; r < s.rows(); ++r) {
    auto orow = out.row(r);
    for (std::size_t k = s.offsets[r]; k < s.offsets[r + 1]; ++k) {
      auto wrow = w.row(s.indices[k]);
      const double v = s.values[k];
      for (std::size_t j = 0; j < orow.size(); ++j) orow[j] += v * wrow[j];
    }
  }
  return out;
}

Matrix FeatureMatrix::multiply_transposed(const Matrix& g) const {
  if (!is_sparse()) return matmul_tn(dense(), g);
  const auto& s = sparse();
  if (g.rows() != s.rows()) throw std::invalid_argument("FeatureMatrix::multiply_transposed: shape mismatch");
  Matrix out(s.cols, g.cols());
  for (std::size_t r = 0; r < s.rows(); ++r) {
    auto grow = g.row(r);
    for (std::size_t k = s.offsets[r]; k < s.offsets[r + 1]; ++k) {
      auto orow = out.row(s.indices[k]);
      const double v = s.values[k];
      for (std::size_t j = 0; j < orow.size(); ++j) orow[j] += v * grow[j];
    }
  }
  return out;
}

std::size_t FeatureMatrix::row_nnz(std::size_t r) const {
  if (is_sparse()) return sparse().offsets[r + 1] - sparse().offsets[r];
  auto row = dense().row(r);
  return static_cast<std::size_t>(std::count_if(row.begin(), row.end(), [](double v) { return v != 0.0; }));
}

std::string to_string(TaskMetric m) { return m == TaskMetric::accuracy ? "accuracy" : "roc_auc"; }

TaskMetric parse_task_metric(const std::string& s) {
  if (s == "accuracy") return TaskMetric::accuracy;
  if (s == "roc_auc") return TaskMetric::roc_auc;
  throw Error("unknown task metric '" + s + "' (expected accuracy or roc_auc)");
}

void LabeledDataset::validate() const {
  const auto n = static_cast<std::size_t>(graph.num_nodes());
  if (labels.size() != n)
    throw Error("dataset '" + name + "': " + std::to_string(labels.size()) + " labels for " + std::to_string(n) +
                " nodes");
  if (features && features->rows() != n)
    throw Error("dataset '" + name + "': " + std::to_string(features->rows()) + " feature rows for " +
                std::to_string(n) + " nodes");
  if (task_metric == TaskMetric::roc_auc && labels.num_classes() != 2)
    throw Error("dataset '" + name + "': roc_auc requires exactly 2 classes");
}

}  // namespace homophily
