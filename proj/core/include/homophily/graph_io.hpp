#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "homophily/graph.hpp"

namespace homophily {

// Text edge list: one `src dst [weight]` per line, `#` starts a comment.
// Throws ParseError with the 1-based line number on malformed lines.
std::vector<Edge> read_edge_list(std::istream& in, const std::string& source = "<stream>");
std::vector<Edge> read_edge_list(const std::filesystem::path& path);

// Writes each stored arc once (each undirected edge once, as u <= v).
void write_edge_list(std::ostream& out, const SparseGraph& g);
void write_edge_list(const std::filesystem::path& path, const SparseGraph& g);

// Binary cache layout (all little-endian):
//   char[4]  magic "HBG1"
//   u32      format version (1)
//   u32      flags: bit0 directed, bit1 weighted
//   u32      reserved (0)
//   u64      node count n
//   u64      arc count m
//   u64[n+1] row offsets
//   u64[m]   column indices
//   f64[m]   weights (only when weighted)
inline constexpr std::uint32_t kGraphCacheVersion = 1;

void write_graph_cache(std::ostream& out, const SparseGraph& g);
void write_graph_cache(const std::filesystem::path& path, const SparseGraph& g);
SparseGraph read_graph_cache(std::istream& in);
SparseGraph read_graph_cache(const std::filesystem::path& path);

namespace detail {
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f64(std::ostream& out, double v);
std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
double read_f64(std::istream& in);
}  // namespace detail

}  // namespace homophily
