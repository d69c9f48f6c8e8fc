#pragma once

#include <span>

namespace homophily {

double mean(std::span<const double> values);
// Unbiased (n-1) sample standard deviation; 0 for fewer than two values.
double sample_stddev(std::span<const double> values);

}  // namespace homophily
