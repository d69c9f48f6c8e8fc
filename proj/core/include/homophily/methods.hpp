#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homophily/correct_smooth.hpp"
#include "homophily/graph.hpp"
#include "homophily/models.hpp"
#include "homophily/scoring.hpp"

namespace homophily {

enum class MethodId { mlp, lp1, lp2, link, sgc1, sgc2, cs1, cs2 };

const std::vector<std::string>& method_names();
std::string to_string(MethodId m);
// Throws Error listing the valid names.
MethodId parse_method(const std::string& name);

/// Hyperparameter grids searched by run_method. Defaults are the baseline
/// grids: LP alpha in {.01,.1,.25,.5,.75,.9,.99} with 50 iterations; LINK and
/// SGC weight decay in {.001,.01,.1}; MLP hidden {16,...,256} x layers {2,3};
/// C&S over all three normalizations, both scaling modes.
struct MethodGrids {
  std::vector<double> lp_alpha{0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99};
  int lp_iterations = 50;
  NormScheme lp_scheme = NormScheme::row;

  std::vector<double> link_weight_decay{0.001, 0.01, 0.1};
  bool link_symmetrize = false;

  std::vector<double> sgc_weight_decay{0.001, 0.01, 0.1};

  std::vector<std::size_t> mlp_hidden{16, 32, 64, 128, 256};
  std::vector<int> mlp_layers{2, 3};
  double mlp_dropout = 0.5;
  bool mlp_batch_norm = true;

  std::vector<NormScheme> cs_schemes{NormScheme::sym, NormScheme::row, NormScheme::col};
  std::vector<double> cs_alpha1{0.5, 0.8};
  std::vector<double> cs_alpha2{0.5, 0.8};
  bool cs_autoscale = true;
  std::vector<double> cs_fdiff_scale{0.5, 1.0, 2.0};
  int cs_iterations = 50;

  // Shared optimizer settings; method grids override weight decay.
  TrainConfig train;

  // Overrides any subset of the defaults from JSON text of the form
  // {"lp": {"alpha": [...], "iterations": 50, "scheme": "row"},
  //  "link": {"weight_decay": [...], "symmetrize": false},
  //  "sgc": {"weight_decay": [...]},
  //  "mlp": {"hidden": [...], "layers": [...], "dropout": .5, "batch_norm": true},
  //  "cs": {"schemes": [...], "alpha1": [...], "alpha2": [...], "autoscale": true,
  //         "fdiff_scale": [...], "iterations": 50},
  //  "train": {"epochs": 500, "lr": .01, "weight_decay": .001}}
  static MethodGrids from_json(const std::string& text);
};

struct MethodOutcome {
  MethodId method = MethodId::mlp;
  std::string best_config;
  double val_metric = 0.0;
  double test_metric = 0.0;
  Matrix scores;  // n x C scores of the selected configuration
};

/// Best MLP on the split (validation-selected); the base predictor for C&S.
struct BaseSelection {
  Matrix probs;
  double val_metric = 0.0;
  std::string config;
};

BaseSelection select_mlp(const LabeledDataset& dataset, const SplitPlan& split, const MethodGrids& grids,
                         unsigned threads = 1);

/// Grid-searches `method` on `split`, selects by validation metric (earliest
/// grid point wins ties) and reports the test metric. `base` supplies a
/// precomputed MLP selection for mlp/cs1/cs2; it is computed when null.
MethodOutcome run_method(MethodId method, const LabeledDataset& dataset, const SplitPlan& split,
                         const MethodGrids& grids, const BaseSelection* base = nullptr, unsigned threads = 1);

}  // namespace homophily
