#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace homophily {

// Base of every domain error raised by the library. The CLI maps these to
// exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GraphError : public Error {
 public:
  using Error::Error;
};

// A metric whose definition does not apply to the input (empty edge set,
// single class, single-class AUC index set, ...).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

// Nodes that make an operation ill-defined: isolated nodes for homophily,
// zero-degree nodes under a dividing normalization, unlabeled nodes.
class NodeSetError : public Error {
 public:
  NodeSetError(std::string what, std::vector<std::int64_t> nodes);

  const std::vector<std::int64_t>& nodes() const noexcept { return nodes_; }

 private:
  std::vector<std::int64_t> nodes_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class DivergenceError : public Error {
 public:
  explicit DivergenceError(int epoch);

  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

// Formats up to `limit` ids as "3, 7, 9 (+12 more)".
std::string format_ids(const std::vector<std::int64_t>& ids, std::size_t limit = 20);

}  // namespace homophily
