#include "homophily/stats.hpp"

#include <cmath>
#include <vector>

#include "homophily/matrix.hpp"

namespace homophily {

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  return pairwise_sum(values) / static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - m) * (values[i] - m);
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(values.size() - 1));
}

}  // namespace homophily
