#include "homophily/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "homophily/error.hpp"
#include "homophily/metrics.hpp"
#include "homophily/parallel.hpp"
#include "homophily/random.hpp"
#include "homophily/stats.hpp"

namespace homophily {

void ErConfig::validate() const {
  if (n < 2) throw Error("ER config: n must be at least 2");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("ER config: p must lie in [0,1]");
  if (class_fractions.empty()) throw Error("ER config: no class fractions");
  double sum = 0.0;
  for (double f : class_fractions) {
    if (!(f >= 0.0)) throw Error("ER config: negative class fraction");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw Error("ER config: class fractions must sum to 1");
}

std::vector<std::int64_t> exact_class_counts(std::int64_t n, const std::vector<double>& fractions) {
  const std::size_t c = fractions.size();
  std::vector<std::int64_t> counts(c);
  std::vector<double> remainder(c);
  std::int64_t assigned = 0;
  for (std::size_t k = 0; k < c; ++k) {
    const double exact = fractions[k] * static_cast<double>(n);
    counts[k] = static_cast<std::int64_t>(std::floor(exact + 1e-9));
    remainder[k] = exact - static_cast<double>(counts[k]);
    assigned += counts[k];
  }
  std::vector<std::size_t> order(c);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < n; i = (i + 1) % c, ++assigned) ++counts[order[i]];
  for (std::size_t k = 0; k < c; ++k)
    if (fractions[k] > 0.0 && counts[k] == 0)
      throw Error("class " + std::to_string(k) + " has positive fraction but rounds to zero nodes at n=" +
                  std::to_string(n));
  return counts;
}

LabeledDataset generate_er_labeled(const ErConfig& cfg) {
  cfg.validate();
  const auto counts = exact_class_counts(cfg.n, cfg.class_fractions);
  Rng rng(cfg.seed);

  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(cfg.n));
  for (std::size_t k = 0; k < counts.size(); ++k) labels.insert(labels.end(), counts[k], static_cast<int>(k));
  rng.shuffle(std::span<int>(labels));

  std::vector<Edge> edges;
  for (NodeId i = 0; i < cfg.n; ++i)
    for (NodeId j = i + 1; j < cfg.n; ++j)
      if (rng.uniform() < cfg.p) edges.push_back({i, j, 1.0});

  BuildOptions opt;
  opt.symmetrize = true;
  LabeledDataset ds;
  ds.name = "er";
  ds.graph = build_graph(edges, cfg.n, opt);
  ds.labels = NodeLabels(std::move(labels), static_cast<int>(counts.size()));
  return ds;
}

std::string to_string(ArchetypeKind k) {
  switch (k) {
    case ArchetypeKind::pure_homophily: return "pure_homophily";
    case ArchetypeKind::pure_heterophily: return "pure_heterophily";
    case ArchetypeKind::one_per_class: return "one_per_class";
  }
  return "?";
}

ArchetypeKind parse_archetype_kind(const std::string& s) {
  if (s == "pure_homophily") return ArchetypeKind::pure_homophily;
  if (s == "pure_heterophily") return ArchetypeKind::pure_heterophily;
  if (s == "one_per_class") return ArchetypeKind::one_per_class;
  throw Error("unknown archetype '" + s + "' (expected pure_homophily, pure_heterophily or one_per_class)");
}

LabeledDataset generate_archetype(const ArchetypeParams& params) {
  std::vector<Edge> edges;
  std::vector<int> labels;
  int num_classes = 0;

  switch (params.kind) {
    case ArchetypeKind::pure_homophily: {
      if (params.groups < 1 || params.group_size < 2)
        throw Error("pure_homophily needs at least one clique of size >= 2");
      for (std::int64_t c = 0; c < params.groups; ++c) {
        const NodeId base = c * params.group_size;
        for (NodeId i = 0; i < params.group_size; ++i) {
          labels.push_back(static_cast<int>(c));
          for (NodeId j = i + 1; j < params.group_size; ++j) edges.push_back({base + i, base + j, 1.0});
        }
      }
      num_classes = static_cast<int>(params.groups);
      break;
    }
    case ArchetypeKind::pure_heterophily: {
      if (params.groups < 1 || params.group_size < 1) throw Error("pure_heterophily needs two nonempty sides");
      const NodeId a = params.groups;
      const NodeId b = params.group_size;
      labels.assign(static_cast<std::size_t>(a), 0);
      labels.insert(labels.end(), static_cast<std::size_t>(b), 1);
      for (NodeId i = 0; i < a; ++i)
        for (NodeId j = 0; j < b; ++j) edges.push_back({i, a + j, 1.0});
      num_classes = 2;
      break;
    }
    case ArchetypeKind::one_per_class: {
      const int c = params.num_classes;
      if (c < 2 || params.groups < 1) throw Error("one_per_class needs C >= 2 and at least one block");
      // Block layout: node (copy r, class k) -> base + r*C + k.
      for (std::int64_t blk = 0; blk < params.groups; ++blk) {
        const NodeId base = blk * 2 * c;
        for (int r = 0; r < 2; ++r)
          for (int k = 0; k < c; ++k) labels.push_back(k);
        for (int k = 0; k < c; ++k) {
          edges.push_back({base + k, base + c + k, 1.0});
          for (int r = 0; r < 2; ++r)
            for (int l = k + 1; l < c; ++l) edges.push_back({base + r * c + k, base + r * c + l, 1.0});
        }
      }
      num_classes = c;
      break;
    }
  }

  BuildOptions opt;
  opt.symmetrize = true;
  LabeledDataset ds;
  ds.name = to_string(params.kind);
  const auto n = static_cast<NodeId>(labels.size());
  ds.graph = build_graph(edges, n, opt);
  ds.labels = NodeLabels(std::move(labels), num_classes);
  return ds;
}


std::vector<SweepRow> imbalance_sweep(std::int64_t n, double p, const std::vector<double>& majority_fracs,
                                      int seeds_per_point, std::uint64_t base_seed, unsigned threads) {
  if (seeds_per_point < 1) throw Error("sweep needs at least one seed per point");
  for (double f : majority_fracs)
    if (!(f >= 0.5 && f < 1.0)) throw Error("majority fraction must lie in [0.5, 1)");

  std::vector<SweepRow> rows(majority_fracs.size());
  parallel_for(majority_fracs.size(), threads, [&](std::size_t i) {
    const std::uint64_t point_seed = child_seed(base_seed, i);
    std::vector<double> hs, hhats;
    for (int s = 0; s < seeds_per_point; ++s) {
      ErConfig cfg;
      cfg.n = n;
      cfg.p = p;
      cfg.class_fractions = {majority_fracs[i], 1.0 - majority_fracs[i]};
      cfg.seed = child_seed(point_seed, static_cast<std::uint64_t>(s));
      const auto ds = generate_er_labeled(cfg);
      hs.push_back(edge_homophily(ds.graph, ds.labels));
      hhats.push_back(improved_homophily(ds.graph, ds.labels));
    }
    rows[i] = {majority_fracs[i], mean(hs), sample_stddev(hs), mean(hhats), sample_stddev(hhats)};
  });
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "frac,h_mean,h_std,hhat_mean,hhat_std\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%.17g,%.17g,%.17g,%.17g\n", r.frac, r.h_mean, r.h_std, r.hhat_mean,
                  r.hhat_std);
    os << buf;
  }
  return os.str();
}

}  // namespace homophily
