#include "homophily/bench.hpp"

#include <cstdio>
#include <optional>
#include <sstream>

#include "homophily/error.hpp"
#include "homophily/parallel.hpp"
#include "homophily/stats.hpp"

namespace homophily {

namespace {

bool uses_base_mlp(MethodId m) { return m == MethodId::mlp || m == MethodId::cs1 || m == MethodId::cs2; }

}  // namespace

BenchTable benchmark(const LabeledDataset& dataset, const std::vector<MethodId>& methods,
                     const std::vector<SplitPlan>& splits, const MethodGrids& grids, unsigned threads) {
  dataset.validate();
  const std::size_t ns = splits.size();

  // The validation-selected MLP is shared by mlp, cs1 and cs2.
  std::vector<std::optional<BaseSelection>> bases(ns);
  std::vector<std::string> base_errors(ns);
  bool need_base = false;
  for (MethodId m : methods) need_base = need_base || uses_base_mlp(m);
  if (need_base) {
    parallel_for(ns, threads, [&](std::size_t s) {
      try {
        bases[s] = select_mlp(dataset, splits[s], grids);
      } catch (const std::exception& e) {
        base_errors[s] = e.what();
      }
    });
  }

  struct Slot {
    std::optional<MethodOutcome> outcome;
    std::string error;
  };
  std::vector<Slot> slots(methods.size() * ns);
  parallel_for(slots.size(), threads, [&](std::size_t t) {
    const MethodId m = methods[t / ns];
    const std::size_t s = t % ns;
    try {
      if (uses_base_mlp(m) && !bases[s]) throw Error("base MLP failed: " + base_errors[s]);
      slots[t].outcome = run_method(m, dataset, splits[s], grids, bases[s] ? &*bases[s] : nullptr);
    } catch (const std::exception& e) {
      slots[t].error = e.what();
    }
  });

  BenchTable table;
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    BenchResult r;
    r.method = to_string(methods[mi]);
    r.metric = to_string(dataset.task_metric);
    for (std::size_t s = 0; s < ns; ++s) {
      auto& slot = slots[mi * ns + s];
      if (slot.outcome) {
        r.splits.push_back(static_cast<int>(s));
        r.values.push_back(slot.outcome->test_metric);
        r.configs.push_back(slot.outcome->best_config);
      } else {
        table.errors.push_back({r.method, static_cast<int>(s), slot.error});
      }
    }
    r.mean = mean(r.values);
    r.std = sample_stddev(r.values);
    table.results.push_back(std::move(r));
  }
  return table;
}

std::string BenchTable::csv() const {
  std::ostringstream os;
  os << "method,split,metric,value\n";
  char buf[64];
  for (const auto& r : results)
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", r.values[i]);
      os << r.method << ',' << r.splits[i] << ',' << r.metric << ',' << buf << '\n';
    }
  return os.str();
}

std::string BenchTable::summary() const {
  std::ostringstream os;
  char buf[128];
  for (const auto& r : results) {
    if (r.values.empty()) {
      os << r.method << " ERROR\n";
      continue;
    }
    std::snprintf(buf, sizeof buf, "%s %.3f±%.3f", r.method.c_str(), r.mean, r.std);
    os << buf;
    std::size_t failed = 0;
    for (const auto& e : errors) failed += e.method == r.method ? 1 : 0;
    if (failed) os << " (" << failed << " split(s) failed)";
    os << '\n';
  }
  return os.str();
}

}  // namespace homophily
