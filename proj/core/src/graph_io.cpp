#include "homophily/graph_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "homophily/error.hpp"

namespace homophily {

namespace detail {

template <typename T>
static void write_le(std::ostream& out, T v) {
  std::array<unsigned char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
static T read_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw Error("binary stream truncated");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(bytes[i]) << (8 * i);
  return v;
}

void write_u32(std::ostream& out, std::uint32_t v) { write_le(out, v); }
void write_u64(std::ostream& out, std::uint64_t v) { write_le(out, v); }
void write_f64(std::ostream& out, double v) { write_le(out, std::bit_cast<std::uint64_t>(v)); }
std::uint32_t read_u32(std::istream& in) { return read_le<std::uint32_t>(in); }
std::uint64_t read_u64(std::istream& in) { return read_le<std::uint64_t>(in); }
double read_f64(std::istream& in) { return std::bit_cast<double>(read_le<std::uint64_t>(in)); }

}  // namespace detail

namespace {

bool parse_int(std::string_view tok, NodeId& out) {
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && p == tok.data() + tok.size();
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

std::vector<Edge> read_edge_list(std::istream& in, const std::string& source) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string a, b, w, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) throw ParseError(source, lineno, "expected 'src dst [weight]'");
    Edge e;
    if (!parse_int(a, e.src) || !parse_int(b, e.dst) || e.src < 0 || e.dst < 0)
      throw ParseError(source, lineno, "node ids must be non-negative integers");
    if (ls >> w) {
      try {
        std::size_t used = 0;
        e.weight = std::stod(w, &used);
        if (used != w.size()) throw std::invalid_argument(w);
      } catch (const std::exception&) {
        throw ParseError(source, lineno, "invalid weight '" + w + "'");
      }
      if (ls >> extra) throw ParseError(source, lineno, "too many fields");
    }
    edges.push_back(e);
  }
  return edges;
}

std::vector<Edge> read_edge_list(const std::filesystem::path& path) {
  auto in = open_in(path, false);
  return read_edge_list(in, path.string());
}

void write_edge_list(std::ostream& out, const SparseGraph& g) {
  out.precision(17);
  for (NodeId x = 0; x < g.num_nodes(); ++x) {
    auto nb = g.neighbors(x);
    auto w = g.weights(x);
    for (std::size_t i = 0; i < nb.size(); ++i) {
      if (!g.directed() && nb[i] < x) continue;
      out << x << ' ' << nb[i];
      if (!w.empty()) out << ' ' << w[i];
      out << '\n';
    }
  }
}

void write_edge_list(const std::filesystem::path& path, const SparseGraph& g) {
  auto out = open_out(path, false);
  write_edge_list(out, g);
}

void write_graph_cache(std::ostream& out, const SparseGraph& g) {
  out.write("HBG1", 4);
  detail::write_u32(out, kGraphCacheVersion);
  detail::write_u32(out, (g.directed() ? 1u : 0u) | (g.weighted() ? 2u : 0u));
  detail::write_u32(out, 0);
  detail::write_u64(out, static_cast<std::uint64_t>(g.num_nodes()));
  detail::write_u64(out, static_cast<std::uint64_t>(g.num_arcs()));
  for (NodeId o : g.offsets()) detail::write_u64(out, static_cast<std::uint64_t>(o));
  for (NodeId v : g.indices()) detail::write_u64(out, static_cast<std::uint64_t>(v));
  for (double w : g.weights()) detail::write_f64(out, w);
  if (!out) throw Error("failed writing graph cache");
}

void write_graph_cache(const std::filesystem::path& path, const SparseGraph& g) {
  auto out = open_out(path, true);
  write_graph_cache(out, g);
}

SparseGraph read_graph_cache(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "HBG1", 4) != 0) throw Error("not a graph cache (bad magic)");
  const auto version = detail::read_u32(in);
  if (version != kGraphCacheVersion) throw Error("unsupported graph cache version " + std::to_string(version));
  const auto flags = detail::read_u32(in);
  detail::read_u32(in);
  const auto n = detail::read_u64(in);
  const auto m = detail::read_u64(in);
  std::vector<NodeId> offsets(n + 1);
  for (auto& o : offsets) o = static_cast<NodeId>(detail::read_u64(in));
  std::vector<NodeId> indices(m);
  for (auto& v : indices) v = static_cast<NodeId>(detail::read_u64(in));
  std::vector<double> weights;
  if (flags & 2u) {
    weights.resize(m);
    for (auto& w : weights) w = detail::read_f64(in);
  }
  return SparseGraph(std::move(offsets), std::move(indices), std::move(weights), (flags & 1u) != 0);
}

SparseGraph read_graph_cache(const std::filesystem::path& path) {
  auto in = open_in(path, true);
  return read_graph_cache(in);
}

}  // namespace homophily
