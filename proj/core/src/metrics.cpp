#include "homophily/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "homophily/error.hpp"
#include "json.hpp"

namespace homophily {

namespace {

void require_labeled(const SparseGraph& g, const NodeLabels& labels) {
  if (labels.size() != static_cast<std::size_t>(g.num_nodes()))
    throw Error("label count " + std::to_string(labels.size()) + " differs from node count " +
                std::to_string(g.num_nodes()));
  auto missing = labels.unlabeled_nodes();
  if (!missing.empty()) throw NodeSetError("unlabeled nodes", std::move(missing));
}

NodeId loop_free_degree(const SparseGraph& g, NodeId x) {
  return g.degree(x) - (g.has_arc(x, x) ? 1 : 0);
}

std::vector<NodeId> zero_degree_nodes(const SparseGraph& g) {
  std::vector<NodeId> out;
  for (NodeId x = 0; x < g.num_nodes(); ++x)
    if (loop_free_degree(g, x) == 0) out.push_back(x);
  return out;
}

}  // namespace

std::vector<std::int64_t> class_pair_counts(const SparseGraph& g, const NodeLabels& labels) {
  require_labeled(g, labels);
  const auto c = static_cast<std::size_t>(labels.num_classes());
  std::vector<std::int64_t> counts(c * c, 0);
  for (NodeId x = 0; x < g.num_nodes(); ++x) {
    const auto kx = static_cast<std::size_t>(labels[x]);
    for (NodeId v : g.neighbors(x)) {
      if (v == x) continue;
      ++counts[kx * c + static_cast<std::size_t>(labels[v])];
    }
  }
  return counts;
}

double edge_homophily(const SparseGraph& g, const NodeLabels& labels) {
  const auto counts = class_pair_counts(g, labels);
  const auto c = static_cast<std::size_t>(labels.num_classes());
  std::int64_t same = 0, total = 0;
  for (std::size_t k = 0; k < c; ++k) {
    same += counts[k * c + k];
    for (std::size_t l = 0; l < c; ++l) total += counts[k * c + l];
  }
  if (total == 0) throw UndefinedMetricError("edge homophily is undefined on a graph without edges");
  return static_cast<double>(same) / static_cast<double>(total);
}

double node_homophily(const SparseGraph& g, const NodeLabels& labels) {
  require_labeled(g, labels);
  if (auto isolated = zero_degree_nodes(g); !isolated.empty())
    throw NodeSetError("node homophily is undefined with isolated nodes", std::move(isolated));
  if (g.num_nodes() == 0) throw UndefinedMetricError("node homophily is undefined on an empty graph");
  std::vector<double> ratios(static_cast<std::size_t>(g.num_nodes()));
  for (NodeId x = 0; x < g.num_nodes(); ++x) {
    std::int64_t same = 0;
    for (NodeId v : g.neighbors(x))
      if (v != x && labels[v] == labels[x]) ++same;
    ratios[x] = static_cast<double>(same) / static_cast<double>(loop_free_degree(g, x));
  }
  return pairwise_sum(ratios) / static_cast<double>(ratios.size());
}

std::vector<double> class_homophily(const SparseGraph& g, const NodeLabels& labels,
                                    std::vector<int>* zero_degree_classes) {
  const auto counts = class_pair_counts(g, labels);
  const int c = labels.num_classes();
  std::vector<double> h(c, 0.0);
  for (int k = 0; k < c; ++k) {
    if (labels.class_sizes()[k] == 0)
      throw UndefinedMetricError("class-wise homophily is undefined for empty class " + std::to_string(k));
    std::int64_t row = 0;
    for (int l = 0; l < c; ++l) row += counts[k * c + l];
    if (row == 0) {
      if (zero_degree_classes) zero_degree_classes->push_back(k);
      continue;
    }
    h[k] = static_cast<double>(counts[k * c + k]) / static_cast<double>(row);
  }
  return h;
}

double improved_homophily(const SparseGraph& g, const NodeLabels& labels) {
  const int c = labels.num_classes();
  if (c < 2) throw UndefinedMetricError("improved homophily needs at least 2 classes");
  const auto h = class_homophily(g, labels);
  // All-pure classes give exactly 1; summing the rounded 1 - |C_k|/n terms
  // need not.
  if (std::all_of(h.begin(), h.end(), [](double v) { return v == 1.0; })) return 1.0;
  const auto n = static_cast<double>(labels.num_labeled());
  std::vector<double> excess(c);
  for (int k = 0; k < c; ++k)
    excess[k] = std::max(h[k] - static_cast<double>(labels.class_sizes()[k]) / n, 0.0);
  return pairwise_sum(excess) / static_cast<double>(c - 1);
}

Matrix compatibility_matrix(const SparseGraph& g, const NodeLabels& labels, std::vector<int>* empty_rows) {
  const auto counts = class_pair_counts(g, labels);
  const auto c = static_cast<std::size_t>(labels.num_classes());
  Matrix h(c, c);
  for (std::size_t k = 0; k < c; ++k) {
    std::int64_t row = 0;
    for (std::size_t l = 0; l < c; ++l) row += counts[k * c + l];
    if (row == 0) {
      if (empty_rows) empty_rows->push_back(static_cast<int>(k));
      continue;
    }
    for (std::size_t l = 0; l < c; ++l)
      h(k, l) = static_cast<double>(counts[k * c + l]) / static_cast<double>(row);
  }
  return h;
}

HomophilyReport analyze(const LabeledDataset& dataset) {
  dataset.validate();
  const auto& g = dataset.graph;
  const auto& labels = dataset.labels;
  require_labeled(g, labels);

  HomophilyReport r;
  r.dataset = dataset.name;
  r.num_nodes = g.num_nodes();
  r.num_edges = g.num_edges();
  r.num_classes = labels.num_classes();
  r.directed = g.directed();

  auto zero_out = zero_degree_nodes(g);
  if (!zero_out.empty()) {
    if (!g.directed()) throw NodeSetError("isolated nodes", std::move(zero_out));
    std::vector<bool> has_in(static_cast<std::size_t>(g.num_nodes()), false);
    for (NodeId x = 0; x < g.num_nodes(); ++x)
      for (NodeId v : g.neighbors(x))
        if (v != x) has_in[v] = true;
    std::vector<NodeId> isolated;
    for (NodeId x : zero_out)
      if (!has_in[x]) isolated.push_back(x);
    if (!isolated.empty()) throw NodeSetError("isolated nodes", std::move(isolated));
    r.sink_nodes = std::move(zero_out);
  } else {
    r.node_hom = node_homophily(g, labels);
  }

  r.edge_hom = edge_homophily(g, labels);
  r.class_hom = class_homophily(g, labels);
  r.improved_hom = improved_homophily(g, labels);
  r.compat = compatibility_matrix(g, labels, &r.empty_compat_rows);
  const auto n = static_cast<double>(labels.num_labeled());
  for (auto size : labels.class_sizes()) r.null_baselines.push_back(static_cast<double>(size) / n);
  return r;
}

std::string HomophilyReport::to_json() const {
  nlohmann::ordered_json j;
  j["dataset"] = dataset;
  j["num_nodes"] = num_nodes;
  j["num_edges"] = num_edges;
  j["num_classes"] = num_classes;
  j["directed"] = directed;
  j["edge_hom"] = edge_hom;
  j["node_hom"] = node_hom ? nlohmann::ordered_json(*node_hom) : nlohmann::ordered_json(nullptr);
  j["improved_hom"] = improved_hom;
  j["class_hom"] = class_hom;
  j["null_baselines"] = null_baselines;
  j["compat"] = {{"rows", compat.rows()}, {"cols", compat.cols()}, {"data", compat.data()}};
  j["flags"] = {{"empty_compat_rows", empty_compat_rows}, {"sink_nodes", sink_nodes.size()}};
  return j.dump(2) + "\n";
}

std::string HomophilyReport::compat_csv() const {
  std::ostringstream os;
  os << "class";
  for (std::size_t l = 0; l < compat.cols(); ++l) os << ',' << l;
  os << '\n';
  char buf[32];
  for (std::size_t k = 0; k < compat.rows(); ++k) {
    os << k;
    for (std::size_t l = 0; l < compat.cols(); ++l) {
      std::snprintf(buf, sizeof buf, "%.17g", compat(k, l));
      os << ',' << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace homophily
