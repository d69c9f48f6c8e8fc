#include <benchmark/benchmark.h>

#include <random>

#include "homophily/generators.hpp"
#include "homophily/metrics.hpp"
#include "homophily/propagation.hpp"
#include "homophily/scoring.hpp"

namespace {

using namespace homophily;

// Sparse ER graph with average degree around 10.
LabeledDataset er_graph(std::int64_t n) {
  ErConfig cfg;
  cfg.n = n;
  cfg.p = 10.0 / static_cast<double>(n);
  cfg.class_fractions = {0.4, 0.3, 0.2, 0.1};
  cfg.seed = 1;
  return generate_er_labeled(cfg);
}

void BM_EdgeHomophily(benchmark::State& state) {
  const auto ds = er_graph(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(edge_homophily(ds.graph, ds.labels));
  state.SetItemsProcessed(state.iterations() * ds.graph.num_arcs());
}
BENCHMARK(BM_EdgeHomophily)->Arg(1000)->Arg(10000);

void BM_ImprovedHomophily(benchmark::State& state) {
  const auto ds = er_graph(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(improved_homophily(ds.graph, ds.labels));
  state.SetItemsProcessed(state.iterations() * ds.graph.num_arcs());
}
BENCHMARK(BM_ImprovedHomophily)->Arg(1000)->Arg(10000);

void BM_TwoHopGraph(benchmark::State& state) {
  const auto ds = er_graph(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(two_hop_graph(ds.graph));
}
BENCHMARK(BM_TwoHopGraph)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SpMM(benchmark::State& state) {
  const auto ds = er_graph(state.range(0));
  const auto s = normalized_adjacency(ds.graph, NormScheme::sym, true);
  std::mt19937_64 gen(2);
  std::normal_distribution<double> nd;
  Matrix x(static_cast<std::size_t>(ds.graph.num_nodes()), static_cast<std::size_t>(state.range(1)));
  for (auto& v : x.data()) v = nd(gen);
  for (auto _ : state) benchmark::DoNotOptimize(s.apply(x));
  state.SetItemsProcessed(state.iterations() * ds.graph.num_arcs() * state.range(1));
}
BENCHMARK(BM_SpMM)->Args({10000, 4})->Args({10000, 64});

void BM_LabelPropagation(benchmark::State& state) {
  const auto ds = er_graph(state.range(0));
  const auto split = make_splits(ds.labels, 1).front();
  LpConfig cfg;
  cfg.hop = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(label_propagation(ds, split.train_idx, cfg));
}
BENCHMARK(BM_LabelPropagation)->Args({10000, 1})->Args({10000, 2})->Unit(benchmark::kMillisecond);

}  // namespace
