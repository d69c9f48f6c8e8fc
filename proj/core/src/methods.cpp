#include "homophily/methods.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

#include "homophily/error.hpp"
#include "homophily/parallel.hpp"
#include "homophily/propagation.hpp"
#include "json.hpp"

namespace homophily {

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names{"mlp", "lp1", "lp2", "link", "sgc1", "sgc2", "cs1", "cs2"};
  return names;
}

std::string to_string(MethodId m) { return method_names()[static_cast<std::size_t>(m)]; }

MethodId parse_method(const std::string& name) {
  const auto& names = method_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<MethodId>(i);
  std::string valid;
  for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
  throw Error("unknown method '" + name + "' (valid methods: " + valid + ")");
}

MethodGrids MethodGrids::from_json(const std::string& text) {
  MethodGrids g;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("grid config is not valid JSON: ") + e.what());
  }
  try {
    auto read = [](const nlohmann::json& obj, const char* key, auto& target) {
      if (obj.contains(key)) obj.at(key).get_to(target);
    };
    auto schemes = [](const nlohmann::json& arr) {
      std::vector<NormScheme> out;
      for (const auto& s : arr) out.push_back(parse_norm_scheme(s.get<std::string>()));
      return out;
    };
    if (j.contains("lp")) {
      const auto& o = j["lp"];
      read(o, "alpha", g.lp_alpha);
      read(o, "iterations", g.lp_iterations);
      if (o.contains("scheme")) g.lp_scheme = parse_norm_scheme(o["scheme"].get<std::string>());
    }
    if (j.contains("link")) {
      read(j["link"], "weight_decay", g.link_weight_decay);
      read(j["link"], "symmetrize", g.link_symmetrize);
    }
    if (j.contains("sgc")) read(j["sgc"], "weight_decay", g.sgc_weight_decay);
    if (j.contains("mlp")) {
      const auto& o = j["mlp"];
      read(o, "hidden", g.mlp_hidden);
      read(o, "layers", g.mlp_layers);
      read(o, "dropout", g.mlp_dropout);
      read(o, "batch_norm", g.mlp_batch_norm);
    }
    if (j.contains("cs")) {
      const auto& o = j["cs"];
      if (o.contains("schemes")) g.cs_schemes = schemes(o["schemes"]);
      read(o, "alpha1", g.cs_alpha1);
      read(o, "alpha2", g.cs_alpha2);
      read(o, "autoscale", g.cs_autoscale);
      read(o, "fdiff_scale", g.cs_fdiff_scale);
      read(o, "iterations", g.cs_iterations);
    }
    if (j.contains("train")) {
      const auto& o = j["train"];
      read(o, "epochs", g.train.epochs);
      read(o, "lr", g.train.lr);
      read(o, "weight_decay", g.train.weight_decay);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("grid config has a malformed field: ") + e.what());
  }
  g.train.validate();
  if (g.lp_alpha.empty() || g.link_weight_decay.empty() || g.sgc_weight_decay.empty() || g.mlp_hidden.empty() ||
      g.mlp_layers.empty() || g.cs_schemes.empty() || g.cs_alpha1.empty() || g.cs_alpha2.empty() ||
      (!g.cs_autoscale && g.cs_fdiff_scale.empty()))
    throw Error("grid config leaves a method with an empty grid");
  return g;
}

namespace {

struct Candidate {
  std::string config;
  double val = 0.0;
  Matrix scores;
};

// Evaluates `count` grid points (possibly in parallel) and returns the first
// one with the highest validation metric.
Candidate search(std::size_t count, unsigned threads, const std::function<Candidate(std::size_t)>& eval) {
  if (count == 0) throw Error("empty hyperparameter grid");
  std::vector<Candidate> out(count);
  parallel_for(count, threads, [&](std::size_t i) { out[i] = eval(i); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < count; ++i)
    if (out[i].val > out[best].val) best = i;
  return std::move(out[best]);
}

std::uint64_t method_seed(const SplitPlan& split, MethodId m) {
  return child_seed(split.seed, 1000 + static_cast<std::uint64_t>(m));
}

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

Candidate train_linear(const FeatureMatrix& x, const LabeledDataset& ds, const SplitPlan& split,
                       const MethodGrids& grids, double weight_decay, std::uint64_t seed) {
  TrainConfig cfg = grids.train;
  cfg.weight_decay = weight_decay;
  cfg.seed = seed;
  cfg.selection = ds.task_metric;
  ArchSpec arch;
  arch.kind = ArchSpec::Kind::linear;
  auto res = train_classifier(x, ds.labels, split, arch, cfg);
  return {fmt("weight_decay=%g", weight_decay), res.best_val, res.model.predict_proba(x)};
}

}  // namespace

BaseSelection select_mlp(const LabeledDataset& dataset, const SplitPlan& split, const MethodGrids& grids,
                         unsigned threads) {
  if (!dataset.features) throw Error("mlp needs node features; dataset '" + dataset.name + "' has none");
  const auto& x = *dataset.features;
  const std::size_t nh = grids.mlp_hidden.size();
  const auto seed = method_seed(split, MethodId::mlp);
  auto best = search(nh * grids.mlp_layers.size(), threads, [&](std::size_t i) {
    ArchSpec arch;
    arch.kind = ArchSpec::Kind::mlp;
    arch.hidden = grids.mlp_hidden[i % nh];
    arch.num_layers = grids.mlp_layers[i / nh];
    arch.dropout = grids.mlp_dropout;
    arch.batch_norm = grids.mlp_batch_norm;
    TrainConfig cfg = grids.train;
    cfg.seed = child_seed(seed, i);
    cfg.selection = dataset.task_metric;
    auto res = train_classifier(x, dataset.labels, split, arch, cfg);
    return Candidate{"hidden=" + std::to_string(arch.hidden) + " layers=" + std::to_string(arch.num_layers),
                     res.best_val, res.model.predict_proba(x)};
  });
  return {std::move(best.scores), best.val, best.config};
}

MethodOutcome run_method(MethodId method, const LabeledDataset& dataset, const SplitPlan& split,
                         const MethodGrids& grids, const BaseSelection* base, unsigned threads) {
  const auto& labels = dataset.labels;
  const auto metric = dataset.task_metric;
  auto val_score = [&](const Matrix& scores) { return score_predictions(scores, labels, split.val_idx, metric); };

  Candidate chosen;
  switch (method) {
    case MethodId::mlp: {
      BaseSelection own;
      if (!base) own = select_mlp(dataset, split, grids, threads);
      const BaseSelection& b = base ? *base : own;
      chosen = {b.config, b.val_metric, b.probs};
      break;
    }
    case MethodId::lp1:
    case MethodId::lp2: {
      const int hop = method == MethodId::lp1 ? 1 : 2;
      const SparseGraph g = propagation_graph(dataset.graph, hop);
      chosen = search(grids.lp_alpha.size(), threads, [&](std::size_t i) {
        LpConfig cfg{grids.lp_alpha[i], grids.lp_iterations, grids.lp_scheme, hop};
        Matrix scores = propagate_labels(g, labels, split.train_idx, cfg);
        const double val = val_score(scores);
        return Candidate{fmt("alpha=%g", cfg.alpha), val, std::move(scores)};
      });
      break;
    }
    case MethodId::link: {
      const FeatureMatrix x = link_features(dataset.graph, grids.link_symmetrize);
      const auto seed = method_seed(split, method);
      chosen = search(grids.link_weight_decay.size(), threads, [&](std::size_t i) {
        return train_linear(x, dataset, split, grids, grids.link_weight_decay[i], child_seed(seed, i));
      });
      break;
    }
    case MethodId::sgc1:
    case MethodId::sgc2: {
      const FeatureMatrix x = sgc_features(dataset, method == MethodId::sgc1 ? 1 : 2);
      const auto seed = method_seed(split, method);
      chosen = search(grids.sgc_weight_decay.size(), threads, [&](std::size_t i) {
        return train_linear(x, dataset, split, grids, grids.sgc_weight_decay[i], child_seed(seed, i));
      });
      break;
    }
    case MethodId::cs1:
    case MethodId::cs2: {
      BaseSelection own;
      if (!base) own = select_mlp(dataset, split, grids, threads);
      const Matrix& z = base ? base->probs : own.probs;
      const int hop = method == MethodId::cs1 ? 1 : 2;
      const SparseGraph g = propagation_graph(dataset.graph, hop);

      // Correction settings: (A1, alpha1, scaling); smoothing: (A2, alpha2).
      std::vector<CsConfig> corrections;
      for (NormScheme a1 : grids.cs_schemes)
        for (double alpha1 : grids.cs_alpha1) {
          CsConfig c;
          c.a1_scheme = a1;
          c.alpha1 = alpha1;
          c.hop = hop;
          c.iterations = grids.cs_iterations;
          if (grids.cs_autoscale) corrections.push_back(c);
          c.mode = CsScaling::fdiff;
          for (double s : grids.cs_fdiff_scale) {
            c.scale = s;
            corrections.push_back(c);
          }
        }
      const std::size_t n_smooth = grids.cs_schemes.size() * grids.cs_alpha2.size();
      std::vector<Candidate> per_correction(corrections.size());
      parallel_for(corrections.size(), threads, [&](std::size_t ci) {
        const Matrix corrected = cs_correct(g, labels, split.train_idx, z, corrections[ci]);
        per_correction[ci] = search(n_smooth, 1, [&](std::size_t si) {
          CsConfig c = corrections[ci];
          c.a2_scheme = grids.cs_schemes[si / grids.cs_alpha2.size()];
          c.alpha2 = grids.cs_alpha2[si % grids.cs_alpha2.size()];
          Matrix scores = cs_smooth(g, labels, split.train_idx, corrected, c);
          const double val = val_score(scores);
          return Candidate{c.describe(), val, std::move(scores)};
        });
      });
      std::size_t best = 0;
      for (std::size_t i = 1; i < per_correction.size(); ++i)
        if (per_correction[i].val > per_correction[best].val) best = i;
      chosen = std::move(per_correction.at(best));
      break;
    }
  }

  MethodOutcome out;
  out.method = method;
  out.best_config = chosen.config;
  out.val_metric = chosen.val;
  out.test_metric = score_predictions(chosen.scores, labels, split.test_idx, metric);
  out.scores = std::move(chosen.scores);
  return out;
}

}  // namespace homophily
