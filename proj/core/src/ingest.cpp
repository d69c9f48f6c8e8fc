#include "homophily/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "homophily/error.hpp"
#include "homophily/graph_io.hpp"

namespace homophily {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool parse_bool(const std::string& v, const std::string& source, std::size_t line) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ParseError(source, line, "expected true or false, got '" + v + "'");
}

template <typename T>
T parse_number(const std::string& v, const std::string& source, std::size_t line) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw ParseError(source, line, "invalid number '" + v + "'");
  return out;
}

double parse_real(const std::string& v, const std::string& source, std::size_t line) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError(source, line, "invalid number '" + v + "'");
  }
}

bool is_missing_token(const std::string& v) { return v.empty() || v == "?" || v == "nan" || v == "NaN"; }

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                               const std::string& source) {
  static const std::set<std::string> metadata_keys{"generator", "rng", "seed", "source"};
  DatasetManifest m;
  bool have_edges = false, have_labels = false;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  auto resolve = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() ? p : base_dir / p;
  };
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(source, lineno, "expected 'key: value'");
    const std::string key = trim(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 1));
    if (key == "name") m.name = value;
    else if (key == "edges") m.edges = resolve(value), have_edges = true;
    else if (key == "labels") m.labels = resolve(value), have_labels = true;
    else if (key == "features") m.features = resolve(value);
    else if (key == "feature_format") {
      if (value == "dense") m.feature_format = FeatureFormat::dense;
      else if (value == "sparse") m.feature_format = FeatureFormat::sparse;
      else throw ParseError(source, lineno, "feature_format must be dense or sparse");
    } else if (key == "feature_dim") m.feature_dim = parse_number<std::size_t>(value, source, lineno);
    else if (key == "directed") m.directed = parse_bool(value, source, lineno);
    else if (key == "weighted") m.weighted = parse_bool(value, source, lineno);
    else if (key == "task_metric") {
      try {
        m.task_metric = parse_task_metric(value);
      } catch (const Error& e) {
        throw ParseError(source, lineno, e.what());
      }
    } else if (key == "num_nodes") m.num_nodes = parse_number<NodeId>(value, source, lineno);
    else if (key == "num_classes") m.num_classes = parse_number<int>(value, source, lineno);
    else if (key == "label_mode") {
      if (value == "classes") m.label_mode = LabelMode::classes;
      else if (value == "quantile") m.label_mode = LabelMode::quantile;
      else throw ParseError(source, lineno, "label_mode must be classes or quantile");
    } else if (key == "quantile_classes") m.quantile_classes = parse_number<int>(value, source, lineno);
    else if (metadata_keys.count(key)) m.metadata[key] = value;
    else throw ParseError(source, lineno, "unknown manifest key '" + key + "'");
  }
  if (!have_edges) throw Error(source + ": manifest has no 'edges' entry");
  if (!have_labels) throw Error(source + ": manifest has no 'labels' entry");
  if (m.name.empty()) m.name = base_dir.filename().string();
  return m;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_text(path), path.parent_path(), path.string());
}

std::string DatasetManifest::to_text() const {
  std::ostringstream os;
  os << "name: " << name << '\n';
  os << "edges: " << edges.string() << '\n';
  os << "labels: " << labels.string() << '\n';
  if (features) {
    os << "features: " << features->string() << '\n';
    os << "feature_format: " << (feature_format == FeatureFormat::dense ? "dense" : "sparse") << '\n';
  }
  if (feature_dim) os << "feature_dim: " << *feature_dim << '\n';
  os << "directed: " << (directed ? "true" : "false") << '\n';
  if (weighted) os << "weighted: true\n";
  os << "task_metric: " << to_string(task_metric) << '\n';
  if (num_nodes) os << "num_nodes: " << *num_nodes << '\n';
  if (num_classes) os << "num_classes: " << *num_classes << '\n';
  if (label_mode == LabelMode::quantile) os << "label_mode: quantile\nquantile_classes: " << quantile_classes << '\n';
  for (const auto& [k, v] : metadata) os << k << ": " << v << '\n';
  return os.str();
}

NodeLabels quantile_relabel(std::span<const double> values, int n_classes) {
  if (n_classes < 2) throw Error("quantile relabeling needs at least 2 classes");
  std::vector<double> sorted;
  for (double v : values)
    if (!std::isnan(v)) sorted.push_back(v);
  if (sorted.empty()) throw Error("quantile relabeling: no values");
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back()) throw Error("quantile relabeling: all values are identical");
  const std::size_t m = sorted.size();
  std::vector<double> bounds;
  for (int k = 1; k < n_classes; ++k) {
    const std::size_t pos = (static_cast<std::size_t>(k) * m + n_classes - 1) / n_classes;  // ceil(k*m/C)
    bounds.push_back(sorted[std::max<std::size_t>(pos, 1) - 1]);
  }
  std::vector<int> labels(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) {
      labels[i] = NodeLabels::kMissing;
      continue;
    }
    labels[i] = static_cast<int>(std::lower_bound(bounds.begin(), bounds.end(), values[i]) - bounds.begin());
  }
  return NodeLabels(std::move(labels), n_classes);
}

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(trim(line));
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

FeatureMatrix read_dense_features(const std::filesystem::path& path, NodeId n) {
  const auto lines = read_lines(path);
  const std::string src = path.string();
  if (static_cast<NodeId>(lines.size()) != n)
    throw Error(src + ": " + std::to_string(lines.size()) + " feature rows for " + std::to_string(n) + " nodes");
  std::vector<double> data;
  std::size_t cols = 0;
  for (std::size_t r = 0; r < lines.size(); ++r) {
    std::size_t count = 0;
    std::stringstream ss(lines[r]);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      data.push_back(parse_real(trim(tok), src, r + 1));
      ++count;
    }
    if (r == 0) cols = count;
    else if (count != cols)
      throw ParseError(src, r + 1, "expected " + std::to_string(cols) + " columns, got " + std::to_string(count));
  }
  return FeatureMatrix(Matrix(lines.size(), cols, std::move(data)));
}

FeatureMatrix read_sparse_features(const std::filesystem::path& path, NodeId n, std::optional<std::size_t> dim) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  const std::string src = path.string();
  struct Triple {
    std::size_t row, col;
    double value;
  };
  std::vector<Triple> triples;
  std::string line;
  std::size_t lineno = 0, max_col = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string a, b, c, extra;
    if (!(ls >> a)) continue;
    if (!(ls >> b >> c) || (ls >> extra)) throw ParseError(src, lineno, "expected 'row col value'");
    Triple t{parse_number<std::size_t>(a, src, lineno), parse_number<std::size_t>(b, src, lineno),
             parse_real(c, src, lineno)};
    if (t.row >= static_cast<std::size_t>(n))
      throw ParseError(src, lineno, "row " + std::to_string(t.row) + " outside [0," + std::to_string(n) + ")");
    if (dim && t.col >= *dim)
      throw ParseError(src, lineno, "column " + std::to_string(t.col) + " outside feature_dim");
    max_col = std::max(max_col, t.col + 1);
    triples.push_back(t);
  }
  std::stable_sort(triples.begin(), triples.end(),
                   [](const Triple& x, const Triple& y) { return x.row != y.row ? x.row < y.row : x.col < y.col; });
  SparseRows rows;
  rows.cols = dim ? *dim : max_col;
  rows.offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& t = triples[i];
    if (i > 0 && triples[i - 1].row == t.row && triples[i - 1].col == t.col) {
      rows.values.back() += t.value;
      continue;
    }
    rows.indices.push_back(t.col);
    rows.values.push_back(t.value);
    ++rows.offsets[t.row + 1];
  }
  for (std::size_t r = 0; r < static_cast<std::size_t>(n); ++r) rows.offsets[r + 1] += rows.offsets[r];
  return FeatureMatrix(std::move(rows));
}

}  // namespace

LabeledDataset load_dataset(const DatasetManifest& manifest) {
  const auto label_lines = read_lines(manifest.labels);
  const std::string lsrc = manifest.labels.string();
  const NodeId n = manifest.num_nodes ? *manifest.num_nodes : static_cast<NodeId>(label_lines.size());
  if (static_cast<NodeId>(label_lines.size()) != n)
    throw Error(lsrc + ": " + std::to_string(label_lines.size()) + " labels but num_nodes is " + std::to_string(n));

  LabeledDataset ds;
  ds.name = manifest.name;
  ds.task_metric = manifest.task_metric;

  if (manifest.label_mode == LabelMode::quantile) {
    std::vector<double> values(label_lines.size());
    for (std::size_t i = 0; i < label_lines.size(); ++i)
      values[i] = is_missing_token(label_lines[i]) ? std::nan("") : parse_real(label_lines[i], lsrc, i + 1);
    ds.labels = quantile_relabel(values, manifest.quantile_classes);
  } else {
    std::vector<int> labels(label_lines.size());
    int max_label = -1;
    for (std::size_t i = 0; i < label_lines.size(); ++i) {
      const auto& tok = label_lines[i];
      if (is_missing_token(tok)) {
        labels[i] = NodeLabels::kMissing;
        continue;
      }
      const int k = parse_number<int>(tok, lsrc, i + 1);
      if (k < -1) throw ParseError(lsrc, i + 1, "negative label " + tok);
      if (manifest.num_classes && k >= *manifest.num_classes)
        throw ParseError(lsrc, i + 1,
                         "label " + tok + " out of range [0," + std::to_string(*manifest.num_classes) + ")");
      labels[i] = k;
      max_label = std::max(max_label, k);
    }
    const int classes = manifest.num_classes ? *manifest.num_classes : max_label + 1;
    if (classes < 1) throw Error(lsrc + ": no labeled nodes");
    ds.labels = NodeLabels(std::move(labels), classes);
  }

  const auto edges = read_edge_list(manifest.edges);
  BuildOptions opt;
  opt.symmetrize = !manifest.directed;
  opt.weighted = manifest.weighted;
  try {
    ds.graph = build_graph(edges, n, opt);
  } catch (const GraphError& e) {
    throw Error(manifest.edges.string() + ": " + e.what());
  }

  if (manifest.features) {
    ds.features = manifest.feature_format == FeatureFormat::dense
                      ? read_dense_features(*manifest.features, n)
                      : read_sparse_features(*manifest.features, n, manifest.feature_dim);
  }
  ds.validate();
  return ds;
}

std::filesystem::path write_dataset(const LabeledDataset& dataset, const std::filesystem::path& dir,
                                    const std::map<std::string, std::string>& metadata) {
  dataset.validate();
  std::filesystem::create_directories(dir);
  DatasetManifest m;
  m.name = dataset.name;
  m.edges = "edges.txt";
  m.labels = "labels.txt";
  m.directed = dataset.graph.directed();
  m.weighted = dataset.graph.weighted();
  m.task_metric = dataset.task_metric;
  m.num_nodes = dataset.graph.num_nodes();
  m.num_classes = dataset.labels.num_classes();
  m.metadata = metadata;

  write_edge_list(dir / m.edges, dataset.graph);
  {
    std::ofstream out(dir / m.labels);
    if (!out) throw Error("cannot write labels into '" + dir.string() + "'");
    for (int k : dataset.labels.values()) out << k << '\n';
  }
  if (dataset.features) {
    const auto& f = *dataset.features;
    m.feature_dim = f.cols();
    if (f.is_sparse()) {
      m.features = "features.txt";
      m.feature_format = FeatureFormat::sparse;
      std::ofstream out(dir / *m.features);
      const auto& s = f.sparse();
      for (std::size_t r = 0; r < s.rows(); ++r)
        for (std::size_t k = s.offsets[r]; k < s.offsets[r + 1]; ++k)
          out << r << ' ' << s.indices[k] << ' ' << fmt17(s.values[k]) << '\n';
    } else {
      m.features = "features.csv";
      std::ofstream out(dir / *m.features);
      const auto& d = f.dense();
      for (std::size_t r = 0; r < d.rows(); ++r) {
        for (std::size_t c = 0; c < d.cols(); ++c) out << (c ? "," : "") << fmt17(d(r, c));
        out << '\n';
      }
    }
  }
  const auto path = dir / "manifest.txt";
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << m.to_text();
  return path;
}

}  // namespace homophily
