#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace homophily {

// Identifier recorded in generated manifests so that other implementations
// know which stream produced a dataset.
inline constexpr const char* kRngAlgorithm = "mt19937_64/splitmix64-child/fisher-yates";

/// Seeded generator with distribution helpers that do not depend on the
/// standard library's (implementation-defined) distribution algorithms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound);
  // Standard normal via Box-Muller.
  double normal();

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

// Deterministic child seed for sub-task `index` of a run seeded with `base`.
std::uint64_t child_seed(std::uint64_t base, std::uint64_t index);

}  // namespace homophily
