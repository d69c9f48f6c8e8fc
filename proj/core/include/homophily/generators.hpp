#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "homophily/graph.hpp"

namespace homophily {

struct ErConfig {
  std::int64_t n = 100;
  double p = 0.25;
  std::vector<double> class_fractions{0.5, 0.5};
  std::uint64_t seed = 0;

  void validate() const;
};

// Exact per-class counts for `n` nodes by largest-remainder rounding. Throws
// if a class with positive fraction would end up empty.
std::vector<std::int64_t> exact_class_counts(std::int64_t n, const std::vector<double>& fractions);

/// Undirected G(n,p) with labels independent of edges: exact class counts,
/// shuffled with the seeded generator. Pairs (i<j) are visited in
/// lexicographic order, one uniform draw each.
LabeledDataset generate_er_labeled(const ErConfig& cfg);

enum class ArchetypeKind { pure_homophily, pure_heterophily, one_per_class };

struct ArchetypeParams {
  ArchetypeKind kind = ArchetypeKind::pure_homophily;
  // pure_homophily: number of cliques (one class each) and clique size.
  // pure_heterophily: side sizes of the complete bipartite graph.
  // one_per_class: class count and number of 2C-node blocks.
  int num_classes = 2;
  std::int64_t groups = 1;
  std::int64_t group_size = 2;
};

std::string to_string(ArchetypeKind k);
ArchetypeKind parse_archetype_kind(const std::string& s);

/// Label-topology archetypes:
///  - pure_homophily: `groups` disjoint cliques of `group_size`, clique i is
///    class i.
///  - pure_heterophily: complete bipartite K_{a,b} with a = `groups`,
///    b = `group_size`, each side one class.
///  - one_per_class: `groups` blocks of 2C nodes (two per class). Within a
///    block both copies of a class are joined and each copy forms a clique
///    with the other classes of the same copy, so every node has exactly one
///    neighbor of each class.
LabeledDataset generate_archetype(const ArchetypeParams& params);

struct SweepRow {
  double frac = 0.0;
  double h_mean = 0.0;
  double h_std = 0.0;
  double hhat_mean = 0.0;
  double hhat_std = 0.0;
};

/// Two-class ER graphs with majority fraction swept over `majority_fracs`.
/// Point i draws its replicates from child_seed(base_seed, i).
std::vector<SweepRow> imbalance_sweep(std::int64_t n, double p, const std::vector<double>& majority_fracs,
                                      int seeds_per_point, std::uint64_t base_seed, unsigned threads = 1);

// Columns frac,h_mean,h_std,hhat_mean,hhat_std.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace homophily
