#pragma once

#include <string>
#include <vector>

#include "homophily/methods.hpp"
#include "homophily/scoring.hpp"

namespace homophily {

struct BenchResult {
  std::string method;
  std::string metric;
  std::vector<int> splits;          // split ids that completed
  std::vector<double> values;       // test metric per completed split
  std::vector<std::string> configs; // selected configuration per split
  double mean = 0.0;
  double std = 0.0;                 // unbiased, 0 with fewer than 2 values
};

struct BenchError {
  std::string method;
  int split = 0;
  std::string message;
};

struct BenchTable {
  std::vector<BenchResult> results;  // ordered as the requested methods
  std::vector<BenchError> errors;

  // method,split,metric,value rows ordered by (method, split).
  std::string csv() const;
  // One `name mean±std` line per method, three decimals.
  std::string summary() const;
};

/// Runs every method on every split. Failures are collected per
/// (method, split) and the remaining results are still produced.
BenchTable benchmark(const LabeledDataset& dataset, const std::vector<MethodId>& methods,
                     const std::vector<SplitPlan>& splits, const MethodGrids& grids, unsigned threads = 1);

}  // namespace homophily
