#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "homophily/bench.hpp"
#include "homophily/error.hpp"
#include "homophily/generators.hpp"
#include "homophily/ingest.hpp"
#include "homophily/metrics.hpp"
#include "homophily/random.hpp"
#include "homophily/stats.hpp"

namespace homophily::cli {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct AnalyzeArgs {
  std::string manifest;
  std::string out;
};

int cmd_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const auto ds = load_dataset(read_manifest(a.manifest));
  const auto report = analyze(ds);
  if (!a.out.empty()) {
    write_file(fs::path(a.out) / "report.json", report.to_json());
    write_file(fs::path(a.out) / "compat.csv", report.compat_csv());
  }
  out << "edge_hom=" << fmt3(report.edge_hom) << " hhat=" << fmt3(report.improved_hom) << '\n';
  return 0;
}

struct GenerateArgs {
  std::string kind = "er";
  std::int64_t n = 100;
  double p = 0.25;
  std::vector<double> fractions{0.5, 0.5};
  std::uint64_t seed = 0;
  int classes = 2;
  std::int64_t groups = 1;
  std::int64_t group_size = 2;
  std::string out;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  LabeledDataset ds;
  std::map<std::string, std::string> meta;
  std::ostringstream gen;
  if (a.kind == "er") {
    ErConfig cfg;
    cfg.n = a.n;
    cfg.p = a.p;
    cfg.class_fractions = a.fractions;
    cfg.seed = a.seed;
    ds = generate_er_labeled(cfg);
    gen << "er n=" << a.n << " p=" << a.p << " fractions=";
    for (std::size_t i = 0; i < a.fractions.size(); ++i) gen << (i ? "," : "") << a.fractions[i];
    meta["rng"] = kRngAlgorithm;
    meta["seed"] = std::to_string(a.seed);
  } else {
    ArchetypeParams params;
    params.kind = parse_archetype_kind(a.kind);
    params.num_classes = a.classes;
    params.groups = a.groups;
    params.group_size = a.group_size;
    ds = generate_archetype(params);
    gen << a.kind << " classes=" << a.classes << " groups=" << a.groups << " group_size=" << a.group_size;
  }
  meta["generator"] = gen.str();
  const auto manifest = write_dataset(ds, a.out, meta);
  out << "wrote " << manifest.string() << " (n=" << ds.graph.num_nodes() << ", edges=" << ds.graph.num_edges()
      << ", classes=" << ds.labels.num_classes() << ")\n";
  return 0;
}

struct SweepArgs {
  std::int64_t n = 100;
  double p = 0.25;
  std::vector<double> fracs{0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95};
  int seeds = 100;
  std::uint64_t base_seed = 0;
  unsigned threads = 1;
  std::string out;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const auto rows = imbalance_sweep(a.n, a.p, a.fracs, a.seeds, a.base_seed, a.threads);
  const auto csv = sweep_csv(rows);
  if (a.out.empty()) out << csv;
  else {
    write_file(fs::path(a.out) / "sweep.csv", csv);
    out << "wrote " << (fs::path(a.out) / "sweep.csv").string() << '\n';
  }
  return 0;
}

struct SplitArgs {
  std::string manifest;
  int splits = 5;
  std::uint64_t base_seed = 0;
  bool stratify = false;
  std::string out;
};

int cmd_split(const SplitArgs& a, std::ostream& out) {
  const auto ds = load_dataset(read_manifest(a.manifest));
  const auto plans = make_splits(ds.labels, a.splits, {0.5, 0.25, 0.25}, a.base_seed, a.stratify);
  std::ostringstream csv;
  csv << "split,node,role\n";
  for (std::size_t s = 0; s < plans.size(); ++s) {
    for (NodeId x : plans[s].train_idx) csv << s << ',' << x << ",train\n";
    for (NodeId x : plans[s].val_idx) csv << s << ',' << x << ",val\n";
    for (NodeId x : plans[s].test_idx) csv << s << ',' << x << ",test\n";
  }
  if (a.out.empty()) out << csv.str();
  else {
    write_file(fs::path(a.out) / "splits.csv", csv.str());
    out << "wrote " << plans.size() << " splits to " << (fs::path(a.out) / "splits.csv").string() << '\n';
  }
  return 0;
}

struct BenchArgs {
  std::string manifest;
  std::vector<std::string> methods;
  int splits = 5;
  std::uint64_t base_seed = 0;
  unsigned threads = 1;
  bool stratify = false;
  std::string grid;
  std::string out;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<MethodId> methods;
  if (a.methods.empty())
    for (const auto& name : method_names()) methods.push_back(parse_method(name));
  for (const auto& name : a.methods) methods.push_back(parse_method(name));
  const MethodGrids grids = a.grid.empty() ? MethodGrids{} : MethodGrids::from_json(read_file(a.grid));

  const auto ds = load_dataset(read_manifest(a.manifest));
  const auto plans = make_splits(ds.labels, a.splits, {0.5, 0.25, 0.25}, a.base_seed, a.stratify);
  const auto table = benchmark(ds, methods, plans, grids, a.threads);

  if (!a.out.empty()) {
    write_file(fs::path(a.out) / "results.csv", table.csv());
    write_file(fs::path(a.out) / "summary.txt", table.summary());
  }
  out << table.summary();
  for (const auto& e : table.errors) err << "error: " << e.method << " split " << e.split << ": " << e.message << '\n';
  return table.errors.empty() ? 0 : 1;
}

struct ReportArgs {
  std::string results;
};

int cmd_report(const ReportArgs& a, std::ostream& out) {
  std::istringstream in(read_file(a.results));
  std::string line;
  std::size_t lineno = 0;
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> values;
  std::map<std::string, std::string> metric;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (fields.size() != 4) throw ParseError(a.results, lineno, "expected method,split,metric,value");
    if (!values.count(fields[0])) order.push_back(fields[0]);
    try {
      values[fields[0]].push_back(std::stod(fields[3]));
    } catch (const std::exception&) {
      throw ParseError(a.results, lineno, "invalid value '" + fields[3] + "'");
    }
    metric[fields[0]] = fields[2];
  }
  for (const auto& m : order) {
    const auto& v = values[m];
    out << m << ' ' << fmt3(mean(v)) << "±" << fmt3(sample_stddev(v)) << "  (" << metric[m] << ", " << v.size()
        << " splits)\n";
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Graph homophily measures and simple-baseline benchmarking"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  AnalyzeArgs analyze_args;
  auto* analyze_cmd = app.add_subcommand("analyze", "Homophily statistics and compatibility matrix of a dataset");
  analyze_cmd->add_option("--manifest", analyze_args.manifest, "Dataset manifest")->required();
  analyze_cmd->add_option("--out", analyze_args.out, "Directory for report.json and compat.csv");

  GenerateArgs gen_args;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic labeled graph");
  gen_cmd->add_option("--kind", gen_args.kind, "er, pure_homophily, pure_heterophily or one_per_class")
      ->capture_default_str();
  gen_cmd->add_option("--n", gen_args.n, "ER node count")->capture_default_str();
  gen_cmd->add_option("--p", gen_args.p, "ER edge probability")->capture_default_str();
  gen_cmd->add_option("--fractions", gen_args.fractions, "ER class fractions")->delimiter(',');
  gen_cmd->add_option("--seed", gen_args.seed, "ER seed")->capture_default_str();
  gen_cmd->add_option("--classes", gen_args.classes, "one_per_class class count")->capture_default_str();
  gen_cmd->add_option("--groups", gen_args.groups, "Cliques, left side, or blocks")->capture_default_str();
  gen_cmd->add_option("--group-size", gen_args.group_size, "Clique size or right side")->capture_default_str();
  gen_cmd->add_option("--out", gen_args.out, "Output directory")->required();

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Class-imbalance sweep on label-independent ER graphs");
  sweep_cmd->add_option("--n", sweep_args.n)->capture_default_str();
  sweep_cmd->add_option("--p", sweep_args.p)->capture_default_str();
  sweep_cmd->add_option("--fracs", sweep_args.fracs, "Majority fractions")->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep_args.seeds, "Graphs per point")->capture_default_str();
  sweep_cmd->add_option("--seed", sweep_args.base_seed, "Base seed")->capture_default_str();
  sweep_cmd->add_option("--threads", sweep_args.threads)->capture_default_str();
  sweep_cmd->add_option("--out", sweep_args.out, "Directory for sweep.csv (stdout if omitted)");

  SplitArgs split_args;
  auto* split_cmd = app.add_subcommand("split", "Random 50/25/25 train/val/test splits");
  split_cmd->add_option("--manifest", split_args.manifest)->required();
  split_cmd->add_option("--splits", split_args.splits)->capture_default_str();
  split_cmd->add_option("--seeds", split_args.base_seed, "Base seed")->capture_default_str();
  split_cmd->add_flag("--stratify", split_args.stratify, "Split each class separately");
  split_cmd->add_option("--out", split_args.out, "Directory for splits.csv (stdout if omitted)");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Run baseline methods over random splits");
  bench_cmd->add_option("--manifest", bench_args.manifest)->required();
  bench_cmd->add_option("--methods", bench_args.methods, "Comma-separated methods (default: all)")->delimiter(',');
  bench_cmd->add_option("--splits", bench_args.splits)->capture_default_str();
  bench_cmd->add_option("--seeds", bench_args.base_seed, "Base seed for splits and training")->capture_default_str();
  bench_cmd->add_option("--threads", bench_args.threads)->capture_default_str();
  bench_cmd->add_flag("--stratify", bench_args.stratify);
  bench_cmd->add_option("--grid", bench_args.grid, "JSON hyperparameter grid overrides");
  bench_cmd->add_option("--out", bench_args.out, "Directory for results.csv and summary.txt");

  ReportArgs report_args;
  auto* report_cmd = app.add_subcommand("report", "Summarize a results.csv as mean±std per method");
  report_cmd->add_option("--results", report_args.results)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(analyze_args, out);
    if (*gen_cmd) return cmd_generate(gen_args, out);
    if (*sweep_cmd) return cmd_sweep(sweep_args, out);
    if (*split_cmd) return cmd_split(split_args, out);
    if (*bench_cmd) return cmd_bench(bench_args, out, err);
    if (*report_cmd) return cmd_report(report_args, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace homophily::cli
