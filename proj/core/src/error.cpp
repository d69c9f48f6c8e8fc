#include "homophily/error.hpp"

#include <sstream>

namespace homophily {

std::string format_ids(const std::vector<std::int64_t>& ids, std::size_t limit) {
  std::ostringstream os;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
    if (i) os << ", ";
    os << ids[i];
  }
  if (ids.size() > limit) os << " (+" << ids.size() - limit << " more)";
  return os.str();
}

NodeSetError::NodeSetError(std::string what, std::vector<std::int64_t> nodes)
    : Error(what + ": " + format_ids(nodes)), nodes_(std::move(nodes)) {}

ParseError::ParseError(const std::string& file, std::size_t line, const std::string& what)
    : Error(file + ":" + std::to_string(line) + ": " + what), line_(line) {}

DivergenceError::DivergenceError(int epoch)
    : Error("training diverged: non-finite loss at epoch " + std::to_string(epoch)),
      epoch_(epoch) {}

}  // namespace homophily
