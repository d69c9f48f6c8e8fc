#include "homophily/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "homophily/error.hpp"
#include "homophily/graph_io.hpp"

namespace homophily {

namespace {

constexpr double kBnEps = 1e-5;

DenseLayer init_layer(std::size_t in, std::size_t out, bool batch_norm, Rng& rng) {
  DenseLayer layer;
  layer.weight = Matrix(in, out);
  layer.bias.assign(out, 0.0);
  const double bound = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(in, 1)));
  for (double& w : layer.weight.data()) w = (2.0 * rng.uniform() - 1.0) * bound;
  for (double& b : layer.bias) b = (2.0 * rng.uniform() - 1.0) * bound;
  if (batch_norm) {
    layer.bn_gamma.assign(out, 1.0);
    layer.bn_beta.assign(out, 0.0);
  }
  return layer;
}

void add_bias(Matrix& z, const std::vector<double>& bias) {
  for (std::size_t r = 0; r < z.rows(); ++r) {
    auto row = z.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += bias[j];
  }
}

struct HiddenCache {
  Matrix input;     // layer input (empty for layer 0, which reads the features)
  Matrix xhat;      // normalized pre-activation (batch norm only)
  std::vector<double> inv_std;
  Matrix act_in;    // value fed into the ReLU
  Matrix mask;      // dropout multipliers (empty when dropout is off)
  Matrix output;    // post-dropout activation
};

struct ForwardPass {
  std::vector<HiddenCache> hidden;
  Matrix logits;
};

Matrix layer_input_product(const FeatureMatrix& x, const std::vector<HiddenCache>& hidden, std::size_t l,
                           const Matrix& w) {
  return l == 0 ? x.multiply(w) : matmul(hidden[l - 1].output, w);
}

ForwardPass forward(const Network& net, const FeatureMatrix& x, Rng* dropout_rng) {
  const auto& layers = net.layers();
  if (x.cols() != net.input_dim())
    throw Error("feature dimension " + std::to_string(x.cols()) + " does not match model input " +
                std::to_string(net.input_dim()));
  ForwardPass fp;
  fp.hidden.resize(layers.size() - 1);
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    const auto& layer = layers[l];
    auto& cache = fp.hidden[l];
    Matrix z = layer_input_product(x, fp.hidden, l, layer.weight);
    add_bias(z, layer.bias);
    const std::size_t n = z.rows(), h = z.cols();
    if (layer.has_batch_norm()) {
      std::vector<double> mu(h, 0.0), var(h, 0.0);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < h; ++j) mu[j] += z(r, j);
      for (double& m : mu) m /= static_cast<double>(n);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < h; ++j) var[j] += (z(r, j) - mu[j]) * (z(r, j) - mu[j]);
      cache.inv_std.resize(h);
      for (std::size_t j = 0; j < h; ++j) cache.inv_std[j] = 1.0 / std::sqrt(var[j] / static_cast<double>(n) + kBnEps);
      cache.xhat = Matrix(n, h);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < h; ++j) {
          const double xh = (z(r, j) - mu[j]) * cache.inv_std[j];
          cache.xhat(r, j) = xh;
          z(r, j) = layer.bn_gamma[j] * xh + layer.bn_beta[j];
        }
    }
    cache.act_in = z;
    for (double& v : z.data()) v = v > 0.0 ? v : 0.0;
    if (dropout_rng && net.dropout() > 0.0) {
      const double keep = 1.0 - net.dropout();
      cache.mask = Matrix(n, h);
      for (double& m : cache.mask.data()) m = dropout_rng->uniform() < keep ? 1.0 / keep : 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) z.data()[i] *= cache.mask.data()[i];
    }
    cache.output = std::move(z);
  }
  const auto& last = layers.back();
  fp.logits = layer_input_product(x, fp.hidden, layers.size() - 1, last.weight);
  add_bias(fp.logits, last.bias);
  return fp;
}

std::vector<double> column_sums(const Matrix& m) {
  std::vector<double> s(m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t j = 0; j < m.cols(); ++j) s[j] += m(r, j);
  return s;
}

}  // namespace

Network::Network(std::vector<DenseLayer> layers, double dropout) : layers_(std::move(layers)), dropout_(dropout) {
  if (layers_.empty()) throw Error("network needs at least one layer");
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    const auto& layer = layers_[l];
    if (layer.bias.size() != layer.weight.cols()) throw Error("layer bias size mismatch");
    if (l > 0 && layers_[l - 1].weight.cols() != layer.weight.rows()) throw Error("consecutive layer sizes differ");
    if (layer.has_batch_norm() &&
        (layer.bn_gamma.size() != layer.weight.cols() || layer.bn_beta.size() != layer.weight.cols()))
      throw Error("batch norm parameter size mismatch");
    if (layer.has_batch_norm() && l + 1 == layers_.size()) throw Error("output layer cannot carry batch norm");
    for (double w : layer.weight.data())
      if (!std::isfinite(w)) throw Error("non-finite weight");
  }
  if (!(dropout_ >= 0.0 && dropout_ < 1.0)) throw Error("dropout must lie in [0,1)");
}

Network Network::linear(std::size_t in, std::size_t classes, Rng& rng) {
  return Network({init_layer(in, classes, false, rng)}, 0.0);
}

Network Network::mlp(std::size_t in, std::size_t hidden, std::size_t classes, int num_layers, double dropout,
                     bool batch_norm, Rng& rng) {
  if (num_layers < 2) throw Error("an MLP needs at least 2 layers");
  std::vector<DenseLayer> layers;
  std::size_t width = in;
  for (int l = 0; l + 1 < num_layers; ++l) {
    layers.push_back(init_layer(width, hidden, batch_norm, rng));
    width = hidden;
  }
  layers.push_back(init_layer(width, classes, false, rng));
  return Network(std::move(layers), dropout);
}

std::vector<std::span<double>> Network::parameters() {
  std::vector<std::span<double>> out;
  for (auto& layer : layers_) {
    out.emplace_back(layer.weight.data());
    out.emplace_back(layer.bias);
    if (layer.has_batch_norm()) {
      out.emplace_back(layer.bn_gamma);
      out.emplace_back(layer.bn_beta);
    }
  }
  return out;
}

std::vector<std::span<const double>> Network::parameters() const {
  std::vector<std::span<const double>> out;
  for (const auto& layer : layers_) {
    out.emplace_back(layer.weight.data());
    out.emplace_back(layer.bias);
    if (layer.has_batch_norm()) {
      out.emplace_back(layer.bn_gamma);
      out.emplace_back(layer.bn_beta);
    }
  }
  return out;
}

Network Network::zeros_like() const {
  Network z = *this;
  for (auto p : z.parameters()) std::fill(p.begin(), p.end(), 0.0);
  return z;
}

Matrix Network::logits(const FeatureMatrix& x) const { return forward(*this, x, nullptr).logits; }

Matrix Network::predict_proba(const FeatureMatrix& x) const { return softmax_rows(logits(x)); }

Matrix softmax_rows(const Matrix& logits) {
  Matrix p = logits;
  for (std::size_t r = 0; r < p.rows(); ++r) {
    auto row = p.row(r);
    const double mx = *std::max_element(row.begin(), row.end());
    double s = 0.0;
    for (double& v : row) {
      v = std::exp(v - mx);
      s += v;
    }
    for (double& v : row) v /= s;
  }
  return p;
}

double loss_and_gradient(const Network& net, const FeatureMatrix& x, const NodeLabels& labels,
                         std::span<const NodeId> train_idx, Network& grad, Rng* dropout_rng) {
  if (train_idx.empty()) throw Error("training needs a nonempty train set");
  if (labels.size() != x.rows()) throw Error("label count differs from feature rows");
  ForwardPass fp = forward(net, x, dropout_rng);
  const auto& layers = net.layers();
  const std::size_t n = x.rows(), c = net.num_classes();
  const double inv_t = 1.0 / static_cast<double>(train_idx.size());

  Matrix dz(n, c);
  double loss = 0.0;
  for (NodeId node : train_idx) {
    const auto i = static_cast<std::size_t>(node);
    const int y = labels[i];
    if (y == NodeLabels::kMissing) throw NodeSetError("train set contains unlabeled nodes", {node});
    auto row = fp.logits.row(i);
    const double mx = *std::max_element(row.begin(), row.end());
    double s = 0.0;
    for (double v : row) s += std::exp(v - mx);
    const double lse = mx + std::log(s);
    loss -= row[y] - lse;
    for (std::size_t j = 0; j < c; ++j) dz(i, j) = std::exp(row[j] - lse) * inv_t;
    dz(i, static_cast<std::size_t>(y)) -= inv_t;
  }
  loss *= inv_t;

  auto& glayers = grad.layers();
  for (std::size_t l = layers.size(); l-- > 0;) {
    const auto& layer = layers[l];
    auto& g = glayers[l];
    g.weight = l == 0 ? x.multiply_transposed(dz) : matmul_tn(fp.hidden[l - 1].output, dz);
    g.bias = column_sums(dz);
    if (l == 0) break;

    const auto& cache = fp.hidden[l - 1];
    const auto& prev = layers[l - 1];
    auto& gprev = glayers[l - 1];
    Matrix da = matmul_nt(dz, layer.weight);
    if (!cache.mask.data().empty())
      for (std::size_t i = 0; i < da.size(); ++i) da.data()[i] *= cache.mask.data()[i];
    for (std::size_t i = 0; i < da.size(); ++i)
      if (cache.act_in.data()[i] <= 0.0) da.data()[i] = 0.0;

    if (prev.has_batch_norm()) {
      const std::size_t h = da.cols();
      const double nn = static_cast<double>(n);
      std::vector<double> sum_dxhat(h, 0.0), sum_dxhat_xhat(h, 0.0);
      gprev.bn_gamma.assign(h, 0.0);
      gprev.bn_beta.assign(h, 0.0);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < h; ++j) {
          const double d = da(r, j);
          gprev.bn_gamma[j] += d * cache.xhat(r, j);
          gprev.bn_beta[j] += d;
          const double dxhat = d * prev.bn_gamma[j];
          sum_dxhat[j] += dxhat;
          sum_dxhat_xhat[j] += dxhat * cache.xhat(r, j);
        }
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < h; ++j) {
          const double dxhat = da(r, j) * prev.bn_gamma[j];
          da(r, j) = cache.inv_std[j] / nn * (nn * dxhat - sum_dxhat[j] - cache.xhat(r, j) * sum_dxhat_xhat[j]);
        }
    }
    dz = std::move(da);
  }
  return loss;
}

void TrainConfig::validate() const {
  if (epochs < 1) throw Error("train config: epochs must be >= 1");
  if (!(lr > 0.0)) throw Error("train config: learning rate must be positive");
  if (!(weight_decay >= 0.0)) throw Error("train config: weight decay must be nonnegative");
}

AdamW::AdamW(const Network& shape, const TrainConfig& cfg)
    : cfg_(cfg), m_(shape.zeros_like()), v_(shape.zeros_like()) {}

void AdamW::step(Network& net, const Network& grad) {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, t_);
  const double bc2 = 1.0 - std::pow(cfg_.beta2, t_);
  auto params = net.parameters();
  auto grads = grad.parameters();
  auto ms = m_.parameters();
  auto vs = v_.parameters();
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto p = params[k];
    auto g = grads[k];
    auto m = ms[k];
    auto v = vs[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] *= 1.0 - cfg_.lr * cfg_.weight_decay;
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      p[i] -= cfg_.lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + cfg_.eps);
    }
  }
}

double score_predictions(const Matrix& probs, const NodeLabels& labels, std::span<const NodeId> idx,
                         TaskMetric metric) {
  const auto truth = mask_labels(labels, idx);
  if (metric == TaskMetric::accuracy) return accuracy(row_argmax(probs), truth, idx);
  if (probs.cols() != 2) throw Error("roc_auc scoring needs two class columns");
  std::vector<double> scores(probs.rows());
  for (std::size_t r = 0; r < probs.rows(); ++r) scores[r] = probs(r, 1);
  return roc_auc(scores, truth, idx);
}

TrainResult train_classifier(const FeatureMatrix& inputs, const NodeLabels& labels, const SplitPlan& split,
                             const ArchSpec& arch, const TrainConfig& cfg) {
  cfg.validate();
  if (inputs.rows() != labels.size()) throw Error("feature rows differ from label count");
  if (split.val_idx.empty()) throw Error("training needs a nonempty validation set");
  Rng init_rng(child_seed(cfg.seed, 0));
  Rng dropout_rng(child_seed(cfg.seed, 1));
  const auto classes = static_cast<std::size_t>(labels.num_classes());
  Network net = arch.kind == ArchSpec::Kind::linear
                    ? Network::linear(inputs.cols(), classes, init_rng)
                    : Network::mlp(inputs.cols(), arch.hidden, classes, arch.num_layers, arch.dropout,
                                   arch.batch_norm, init_rng);
  AdamW opt(net, cfg);
  Network grad = net.zeros_like();

  TrainResult result;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const double loss =
        loss_and_gradient(net, inputs, labels, split.train_idx, grad, net.dropout() > 0.0 ? &dropout_rng : nullptr);
    if (!std::isfinite(loss)) throw DivergenceError(epoch);
    opt.step(net, grad);
    const double val = score_predictions(net.predict_proba(inputs), labels, split.val_idx, cfg.selection);
    result.val_trace.push_back(val);
    if (epoch == 1 || val > result.best_val) {
      result.best_val = val;
      result.best_epoch = epoch;
      result.model = net;
    }
  }
  return result;
}

FeatureMatrix link_features(const SparseGraph& g, bool symmetrize) {
  const SparseGraph& src = symmetrize && g.directed() ? symmetrized(g) : g;
  SparseRows rows;
  rows.cols = static_cast<std::size_t>(src.num_nodes());
  rows.offsets.assign(1, 0);
  for (NodeId x = 0; x < src.num_nodes(); ++x) {
    for (NodeId v : src.neighbors(x)) {
      rows.indices.push_back(static_cast<std::size_t>(v));
      rows.values.push_back(1.0);
    }
    rows.offsets.push_back(rows.indices.size());
  }
  return FeatureMatrix(std::move(rows));
}

void write_checkpoint(std::ostream& out, const Network& net) {
  out.write("HBM1", 4);
  detail::write_u32(out, 1);
  detail::write_u32(out, static_cast<std::uint32_t>(net.layers().size()));
  detail::write_f64(out, net.dropout());
  for (const auto& layer : net.layers()) {
    detail::write_u64(out, layer.weight.rows());
    detail::write_u64(out, layer.weight.cols());
    for (double w : layer.weight.data()) detail::write_f64(out, w);
    for (double b : layer.bias) detail::write_f64(out, b);
    detail::write_u32(out, layer.has_batch_norm() ? 1 : 0);
    for (double g : layer.bn_gamma) detail::write_f64(out, g);
    for (double b : layer.bn_beta) detail::write_f64(out, b);
  }
  if (!out) throw Error("failed writing checkpoint");
}

void write_checkpoint(const std::filesystem::path& path, const Network& net) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  write_checkpoint(out, net);
}

Network read_checkpoint(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "HBM1", 4) != 0) throw Error("not a model checkpoint (bad magic)");
  if (auto version = detail::read_u32(in); version != 1)
    throw Error("unsupported checkpoint version " + std::to_string(version));
  const auto count = detail::read_u32(in);
  const double dropout = detail::read_f64(in);
  std::vector<DenseLayer> layers(count);
  for (auto& layer : layers) {
    const auto rows = detail::read_u64(in);
    const auto cols = detail::read_u64(in);
    layer.weight = Matrix(rows, cols);
    for (double& w : layer.weight.data()) w = detail::read_f64(in);
    layer.bias.resize(cols);
    for (double& b : layer.bias) b = detail::read_f64(in);
    if (detail::read_u32(in)) {
      layer.bn_gamma.resize(cols);
      layer.bn_beta.resize(cols);
      for (double& g : layer.bn_gamma) g = detail::read_f64(in);
      for (double& b : layer.bn_beta) b = detail::read_f64(in);
    }
  }
  return Network(std::move(layers), dropout);
}

Network read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_checkpoint(in);
}

}  // namespace homophily
