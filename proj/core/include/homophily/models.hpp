#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "homophily/graph.hpp"
#include "homophily/matrix.hpp"
#include "homophily/random.hpp"
#include "homophily/scoring.hpp"

namespace homophily {

struct DenseLayer {
  Matrix weight;              // in x out
  std::vector<double> bias;   // out
  // Batch normalization over all nodes; empty when disabled. Only hidden
  // layers carry it.
  std::vector<double> bn_gamma;
  std::vector<double> bn_beta;

  bool has_batch_norm() const { return !bn_gamma.empty(); }
  bool operator==(const DenseLayer&) const = default;
};

/// Feed-forward classifier over node features. A single layer is the
/// logistic-regression model used by LINK and SGC; two or more layers form
/// the MLP (linear -> [batch norm] -> ReLU -> dropout for every hidden
/// layer, plain linear output).
class Network {
 public:
  Network() = default;
  explicit Network(std::vector<DenseLayer> layers, double dropout = 0.0);

  // PyTorch-style uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) initialization.
  static Network linear(std::size_t in, std::size_t classes, Rng& rng);
  static Network mlp(std::size_t in, std::size_t hidden, std::size_t classes, int num_layers, double dropout,
                     bool batch_norm, Rng& rng);

  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }
  double dropout() const { return dropout_; }
  std::size_t input_dim() const { return layers_.front().weight.rows(); }
  std::size_t num_classes() const { return layers_.back().weight.cols(); }

  // Every trainable scalar, layer by layer: weight, bias, gamma, beta.
  std::vector<std::span<double>> parameters();
  std::vector<std::span<const double>> parameters() const;
  // Zero-filled network of identical shape.
  Network zeros_like() const;

  // Evaluation-mode logits (no dropout).
  Matrix logits(const FeatureMatrix& x) const;
  Matrix predict_proba(const FeatureMatrix& x) const;

  bool operator==(const Network&) const = default;

 private:
  std::vector<DenseLayer> layers_;
  double dropout_ = 0.0;
};

// Row-wise softmax.
Matrix softmax_rows(const Matrix& logits);

/// Mean softmax cross-entropy over `train_idx`, and its gradient written into
/// `grad` (same shape as `net`). Dropout is applied only when `dropout_rng` is
/// given.
double loss_and_gradient(const Network& net, const FeatureMatrix& x, const NodeLabels& labels,
                         std::span<const NodeId> train_idx, Network& grad, Rng* dropout_rng = nullptr);

struct TrainConfig {
  int epochs = 500;
  double lr = 0.01;
  double weight_decay = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t seed = 0;
  TaskMetric selection = TaskMetric::accuracy;

  void validate() const;
};

/// Decoupled-weight-decay Adam state over a network's parameters.
class AdamW {
 public:
  AdamW(const Network& shape, const TrainConfig& cfg);
  void step(Network& net, const Network& grad);

 private:
  TrainConfig cfg_;
  Network m_;
  Network v_;
  int t_ = 0;
};

struct ArchSpec {
  enum class Kind { linear, mlp } kind = Kind::linear;
  std::size_t hidden = 64;
  int num_layers = 2;
  double dropout = 0.5;
  bool batch_norm = true;
};

struct TrainResult {
  Network model;                   // parameters of the best validation epoch
  std::vector<double> val_trace;   // validation metric after each epoch
  int best_epoch = 0;              // 1-based
  double best_val = 0.0;
};

// Validation score of class-probability rows under `metric` (ROC-AUC uses
// the class-1 column).
double score_predictions(const Matrix& probs, const NodeLabels& labels, std::span<const NodeId> idx,
                         TaskMetric metric);

/// Full-batch AdamW on softmax cross-entropy. Returns the parameters of the
/// earliest epoch with the best validation metric. Throws DivergenceError on
/// a non-finite loss.
TrainResult train_classifier(const FeatureMatrix& inputs, const NodeLabels& labels, const SplitPlan& split,
                             const ArchSpec& arch, const TrainConfig& cfg);

/// Sparse indicator rows of each node's out-neighbors (n x n). With
/// `symmetrize`, in-neighbors are included as well.
FeatureMatrix link_features(const SparseGraph& g, bool symmetrize = false);

// Checkpoint layout (little-endian):
//   char[4] "HBM1", u32 version (1), u32 layer count, f64 dropout,
//   per layer: u64 rows, u64 cols, f64[rows*cols] weight (row-major),
//              f64[cols] bias, u32 batch-norm flag, [f64[cols] gamma,
//              f64[cols] beta when the flag is set].
void write_checkpoint(std::ostream& out, const Network& net);
void write_checkpoint(const std::filesystem::path& path, const Network& net);
Network read_checkpoint(std::istream& in);
Network read_checkpoint(const std::filesystem::path& path);

}  // namespace homophily
