#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "homophily/graph.hpp"

namespace homophily {

enum class LabelMode { classes, quantile };
enum class FeatureFormat { dense, sparse };

/// On-disk description of a dataset, stored as `key: value` lines (`#`
/// comments allowed). Recognized keys:
///   name, edges, labels, features, feature_format (dense|sparse),
///   feature_dim, directed (true|false), weighted (true|false),
///   task_metric (accuracy|roc_auc), num_nodes, num_classes,
///   label_mode (classes|quantile), quantile_classes,
/// plus free-form metadata keys generator, rng, seed, source.
/// Relative paths resolve against the manifest's directory.
struct DatasetManifest {
  std::string name;
  std::filesystem::path edges;
  std::filesystem::path labels;
  std::optional<std::filesystem::path> features;
  FeatureFormat feature_format = FeatureFormat::dense;
  std::optional<std::size_t> feature_dim;
  bool directed = false;
  bool weighted = false;
  TaskMetric task_metric = TaskMetric::accuracy;
  std::optional<NodeId> num_nodes;
  std::optional<int> num_classes;
  LabelMode label_mode = LabelMode::classes;
  int quantile_classes = 5;
  std::map<std::string, std::string> metadata;

  std::string to_text() const;
};

DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                               const std::string& source = "<manifest>");
DatasetManifest read_manifest(const std::filesystem::path& path);

/// Reads and validates every file the manifest names. Undirected datasets
/// are symmetrized; self-loops are dropped and duplicate edges collapsed.
LabeledDataset load_dataset(const DatasetManifest& manifest);

/// Writes edges.txt, labels.txt, features (features.csv dense or
/// features.txt sparse triples) and manifest.txt into `dir`; returns the
/// manifest path. Extra metadata is copied into the manifest.
std::filesystem::path write_dataset(const LabeledDataset& dataset, const std::filesystem::path& dir,
                                    const std::map<std::string, std::string>& metadata = {});

/// Buckets real values into `n_classes` right-closed quantile intervals.
/// Boundary k (1 <= k < n_classes) is the lower empirical k/n_classes
/// quantile, sorted[ceil(k*m/n_classes) - 1]; a value's class is the number
/// of boundaries strictly below it. Equal values always share a class.
/// NaN entries become missing labels.
NodeLabels quantile_relabel(std::span<const double> values, int n_classes);

}  // namespace homophily
