// grec: command-line frontend for grouped recall evaluation.
//
// Exit codes: 0 success, 1 user/input error, 2 internal invariant violation.
// Reports go to stdout (or --out); warnings and errors go to stderr.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grec/io.hpp"
#include "grec/metrics.hpp"
#include "grec/scaling.hpp"
#include "grec/synth.hpp"

namespace {

struct OutputFlags {
  std::string out;          // empty = stdout
  std::string format = "json";
};

struct EvalFlags {
  std::string data;
  std::string labels;
  std::int64_t k = 1;
  std::int64_t group_size = 0;  // 0 = plain recall over one group of all labels
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::string backend = "vptree";
  std::string distance = "l2";
  std::int64_t repeats = 1;
};

struct SynthFlags {
  std::int64_t per_class = 8;
  std::int64_t dim = 16;
  double cluster_std = grec::kDefaultClusterStd;
  double center_scale = 1.0;
  std::uint64_t seed = 0;
};

grec::Backend parse_backend(const std::string& name) {
  if (name == "brute") return grec::Backend::brute_force;
  if (name == "vptree") return grec::Backend::vp_tree;
  throw grec::Error(grec::ErrorKind::invalid_argument, "--backend must be 'brute' or 'vptree'");
}

grec::Distance parse_distance(const std::string& name) {
  if (name == "l2") return grec::Distance::squared_euclidean;
  if (name == "cosine") return grec::Distance::cosine;
  throw grec::Error(grec::ErrorKind::invalid_argument, "--distance must be 'l2' or 'cosine'");
}

grec::ReportFormat parse_format(const std::string& name) {
  if (name == "json") return grec::ReportFormat::json;
  if (name == "csv") return grec::ReportFormat::csv;
  throw grec::Error(grec::ErrorKind::invalid_argument, "--format must be 'json' or 'csv'");
}

grec::EvalConfig make_config(const EvalFlags& flags) {
  if (flags.k < 1) throw grec::Error(grec::ErrorKind::invalid_argument, "--k must be >= 1");
  if (flags.group_size < 0) {
    throw grec::Error(grec::ErrorKind::invalid_argument, "--group-size must be >= 1");
  }
  if (!(flags.alpha > 0.0 && flags.alpha < 1.0)) {
    throw grec::Error(grec::ErrorKind::invalid_argument, "--alpha must lie in (0, 1)");
  }
  if (flags.repeats < 1) {
    throw grec::Error(grec::ErrorKind::invalid_argument, "--repeats must be >= 1");
  }
  grec::EvalConfig config;
  config.k = static_cast<std::uint32_t>(flags.k);
  if (flags.group_size > 0) config.group_size = static_cast<std::uint32_t>(flags.group_size);
  config.seed = flags.seed;
  config.alpha = flags.alpha;
  config.backend = parse_backend(flags.backend);
  config.distance = parse_distance(flags.distance);
  config.repeats = static_cast<std::uint32_t>(flags.repeats);
  return config;
}

grec::SyntheticSpec make_spec(const SynthFlags& flags, std::int64_t classes) {
  if (classes < 1) throw grec::Error(grec::ErrorKind::invalid_argument, "--classes must be >= 1");
  if (flags.per_class < 2) {
    throw grec::Error(grec::ErrorKind::invalid_argument, "--per-class must be >= 2");
  }
  if (flags.dim < 1) throw grec::Error(grec::ErrorKind::invalid_argument, "--dim must be >= 1");
  if (flags.cluster_std < 0.0) {
    throw grec::Error(grec::ErrorKind::invalid_argument, "--std must be >= 0");
  }
  if (!(flags.center_scale > 0.0)) {
    throw grec::Error(grec::ErrorKind::invalid_argument, "--center-scale must be > 0");
  }
  grec::SyntheticSpec spec;
  spec.num_classes = static_cast<std::uint32_t>(classes);
  spec.samples_per_class = static_cast<std::uint32_t>(flags.per_class);
  spec.dim = static_cast<std::uint32_t>(flags.dim);
  spec.cluster_std = flags.cluster_std;
  spec.center_scale = flags.center_scale;
  spec.seed = flags.seed;
  return spec;
}

grec::EmbeddingSet load_for_eval(const std::string& data_path, const std::string& label_path) {
  grec::DatasetFileRef ref;
  ref.path = data_path;
  if (!label_path.empty()) ref.label_path = label_path;
  return grec::load_dataset(ref);
}

void print_warnings(const grec::MetricReport& report) {
  for (const std::string& warning : report.warnings) std::cerr << "warning: " << warning << "\n";
}

void emit(const std::string& text, const OutputFlags& output) {
  if (output.out.empty()) {
    std::cout << text;
  } else {
    grec::write_text_file(output.out, text);
  }
}

// Dataset file or a previously emitted report (by .json extension).
grec::MetricReport report_from_path(const std::string& path, const EvalFlags& flags) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return grec::parse_metric_report_json(grec::read_text_file(path));
  }
  const grec::EmbeddingSet dataset = load_for_eval(path, /*label_path=*/"");
  const grec::MetricReport report = grec::evaluate(dataset, make_config(flags));
  print_warnings(report);
  return report;
}

std::string strip_trailing_newline(std::string text) {
  while (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

void run_eval(const EvalFlags& flags, const OutputFlags& output) {
  const grec::ReportFormat format = parse_format(output.format);
  const grec::EvalConfig config = make_config(flags);
  const grec::EmbeddingSet dataset = load_for_eval(flags.data, flags.labels);

  std::vector<grec::MetricReport> reports;
  if (config.group_size) {
    reports = grec::grouped_recall_repeated(dataset, config);
  } else {
    reports.push_back(grec::recall_at_k(dataset, config));
  }
  for (const grec::MetricReport& report : reports) print_warnings(report);

  if (reports.size() == 1) {
    emit(format == grec::ReportFormat::json ? grec::metric_report_json(reports[0])
                                            : grec::metric_report_csv(reports[0]),
         output);
    return;
  }
  if (format == grec::ReportFormat::json) {
    std::string text = "[\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
      if (i > 0) text += ",\n";
      text += strip_trailing_newline(grec::metric_report_json(reports[i]));
    }
    text += "\n]\n";
    emit(text, output);
  } else {
    // One table across repeats, keyed by a leading repeat column.
    std::string text;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const std::string csv = grec::metric_report_csv(reports[i]);
      const std::size_t header_end = csv.find('\n');
      if (i == 0) text += "repeat," + csv.substr(0, header_end + 1);
      std::size_t pos = header_end + 1;
      while (pos < csv.size()) {
        const std::size_t line_end = csv.find('\n', pos);
        text += std::to_string(i) + "," + csv.substr(pos, line_end - pos + 1);
        pos = line_end + 1;
      }
    }
    emit(text, output);
  }
}

void run_compare(const std::string& path_a, const std::string& path_b, const EvalFlags& flags,
                 const OutputFlags& output) {
  const grec::ReportFormat format = parse_format(output.format);
  const grec::MetricReport a = report_from_path(path_a, flags);
  const grec::MetricReport b = report_from_path(path_b, flags);
  const grec::SplitComparison comparison = grec::compare_splits(a, b, flags.alpha);
  emit(format == grec::ReportFormat::json ? grec::split_comparison_json(comparison)
                                          : grec::split_comparison_csv(comparison),
       output);
}

void run_gap(const std::string& train_path, const std::string& test_path, const EvalFlags& flags,
             const OutputFlags& output) {
  const grec::ReportFormat format = parse_format(output.format);
  const grec::MetricReport train = report_from_path(train_path, flags);
  const grec::MetricReport test = report_from_path(test_path, flags);
  const grec::GapReport gap = grec::generalization_gap(train, test);
  emit(format == grec::ReportFormat::json ? grec::gap_report_json(gap)
                                          : grec::gap_report_csv(gap),
       output);
}

void run_gen(const SynthFlags& flags, std::int64_t classes, const std::string& out_path) {
  const grec::SyntheticSpec spec = make_spec(flags, classes);
  const grec::EmbeddingSet dataset = grec::generate(spec);
  grec::DatasetFileRef ref;
  ref.path = out_path;
  grec::save_dataset(dataset, ref);
}

void run_sweep(const SynthFlags& flags, const std::vector<std::int64_t>& classes,
               std::int64_t group_size, std::int64_t k, std::int64_t trials,
               const OutputFlags& output) {
  const grec::ReportFormat format = parse_format(output.format);
  if (group_size < 1) {
    throw grec::Error(grec::ErrorKind::invalid_argument, "--group-size must be >= 1");
  }
  if (k < 1) throw grec::Error(grec::ErrorKind::invalid_argument, "--k must be >= 1");
  if (trials < 1) throw grec::Error(grec::ErrorKind::invalid_argument, "--trials must be >= 1");
  if (classes.empty()) {
    throw grec::Error(grec::ErrorKind::invalid_argument, "--classes needs at least one value");
  }
  std::vector<std::uint32_t> counts;
  for (const std::int64_t c : classes) {
    if (c < 1) throw grec::Error(grec::ErrorKind::invalid_argument, "--classes must be >= 1");
    counts.push_back(static_cast<std::uint32_t>(c));
  }
  const grec::SyntheticSpec base = make_spec(flags, classes.front());
  const grec::SweepReport report = grec::sweep_class_count(
      base, counts, static_cast<std::uint32_t>(group_size), static_cast<std::uint32_t>(k),
      static_cast<std::uint32_t>(trials));
  emit(format == grec::ReportFormat::json ? grec::sweep_report_json(report)
                                          : grec::sweep_report_csv(report),
       output);
}

void run_coverage(const SynthFlags& flags, std::int64_t classes, std::int64_t group_size,
                  std::int64_t k, double alpha, std::int64_t trials, const OutputFlags& output) {
  const grec::ReportFormat format = parse_format(output.format);
  if (group_size < 1) {
    throw grec::Error(grec::ErrorKind::invalid_argument, "--group-size must be >= 1");
  }
  if (k < 1) throw grec::Error(grec::ErrorKind::invalid_argument, "--k must be >= 1");
  if (trials < 1) throw grec::Error(grec::ErrorKind::invalid_argument, "--trials must be >= 1");
  const grec::SyntheticSpec spec = make_spec(flags, classes);
  const grec::CoverageReport report = grec::coverage_experiment(
      spec, static_cast<std::uint32_t>(group_size), static_cast<std::uint32_t>(k), alpha,
      static_cast<std::uint32_t>(trials));
  emit(format == grec::ReportFormat::json ? grec::coverage_report_json(report)
                                          : grec::coverage_report_csv(report),
       output);
}

void run_bench(const SynthFlags& flags, const std::vector<std::int64_t>& sizes,
               std::int64_t group_size, std::int64_t k, const std::string& backend,
               const std::string& distance, std::int64_t trials, const OutputFlags& output) {
  const grec::ReportFormat format = parse_format(output.format);
  if (group_size < 1) {
    throw grec::Error(grec::ErrorKind::invalid_argument, "--group-size must be >= 1");
  }
  if (k < 1) throw grec::Error(grec::ErrorKind::invalid_argument, "--k must be >= 1");
  if (trials < 1) throw grec::Error(grec::ErrorKind::invalid_argument, "--trials must be >= 1");
  grec::ScalingBenchSpec spec;
  for (const std::int64_t s : sizes) {
    if (s < 1) throw grec::Error(grec::ErrorKind::invalid_argument, "--sizes must be >= 1");
    spec.sizes.push_back(static_cast<std::uint32_t>(s));
  }
  spec.group_size = static_cast<std::uint32_t>(group_size);
  spec.k = static_cast<std::uint32_t>(k);
  if (flags.per_class < 2) {
    throw grec::Error(grec::ErrorKind::invalid_argument, "--per-class must be >= 2");
  }
  spec.per_class = static_cast<std::uint32_t>(flags.per_class);
  if (flags.dim < 1) throw grec::Error(grec::ErrorKind::invalid_argument, "--dim must be >= 1");
  spec.dim = static_cast<std::uint32_t>(flags.dim);
  spec.cluster_std = flags.cluster_std;
  spec.center_scale = flags.center_scale;
  spec.seed = flags.seed;
  spec.trials = static_cast<std::uint32_t>(trials);
  spec.backend = parse_backend(backend);
  spec.distance = parse_distance(distance);
  const grec::ScalingReport report = grec::run_scaling_bench(spec);
  emit(format == grec::ReportFormat::json ? grec::scaling_report_json(report)
                                          : grec::scaling_report_csv(report),
       output);
}

void add_output_flags(CLI::App* cmd, OutputFlags& output) {
  cmd->add_option("--out", output.out, "Write the report here instead of stdout");
  cmd->add_option("--format", output.format, "Report format: json or csv")
      ->default_str("json");
}

void add_synth_flags(CLI::App* cmd, SynthFlags& synth) {
  cmd->add_option("--per-class", synth.per_class, "Samples per class")->default_str("8");
  cmd->add_option("--dim", synth.dim, "Embedding dimension")->default_str("16");
  cmd->add_option("--std", synth.cluster_std, "Cluster noise standard deviation");
  cmd->add_option("--center-scale", synth.center_scale,
                  "Half-width of the hypercube class centers are drawn from")
      ->default_str("1.0");
  cmd->add_option("--seed", synth.seed, "RNG seed")->default_str("0");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grec: grouped recall evaluation for embedding retrieval"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "grec 0.1.0");

  // eval
  EvalFlags eval_flags;
  OutputFlags eval_output;
  CLI::App* eval = app.add_subcommand("eval", "Recall@K / grouped recall over a dataset file");
  eval->add_option("--data", eval_flags.data, "Dataset file (csv or GREC binary)")->required();
  eval->add_option("--labels", eval_flags.labels, "Sidecar label file (csv datasets only)");
  eval->add_option("--k", eval_flags.k, "Recall depth")->default_str("1");
  eval->add_option("--group-size", eval_flags.group_size,
                   "Labels per group; omit for plain recall");
  eval->add_option("--seed", eval_flags.seed, "Partition seed")->default_str("0");
  eval->add_option("--alpha", eval_flags.alpha, "CI significance")->default_str("0.05");
  eval->add_option("--backend", eval_flags.backend, "brute or vptree")->default_str("vptree");
  eval->add_option("--distance", eval_flags.distance, "l2 or cosine")->default_str("l2");
  eval->add_option("--repeats", eval_flags.repeats, "Repartition count")->default_str("1");
  add_output_flags(eval, eval_output);
  eval->callback([&] { run_eval(eval_flags, eval_output); });

  // compare
  EvalFlags compare_flags;
  OutputFlags compare_output;
  std::string compare_a, compare_b;
  CLI::App* compare =
      app.add_subcommand("compare", "Two-sample bound on the difference between two splits");
  compare->add_option("--data-a", compare_a, "First dataset or report (.json)")->required();
  compare->add_option("--data-b", compare_b, "Second dataset or report (.json)")->required();
  compare->add_option("--k", compare_flags.k, "Recall depth")->default_str("1");
  compare->add_option("--group-size", compare_flags.group_size, "Labels per group");
  compare->add_option("--seed", compare_flags.seed, "Partition seed")->default_str("0");
  compare->add_option("--alpha", compare_flags.alpha, "Bound significance")->default_str("0.05");
  compare->add_option("--backend", compare_flags.backend, "brute or vptree")
      ->default_str("vptree");
  compare->add_option("--distance", compare_flags.distance, "l2 or cosine")->default_str("l2");
  add_output_flags(compare, compare_output);
  compare->callback([&] { run_compare(compare_a, compare_b, compare_flags, compare_output); });

  // gap
  EvalFlags gap_flags;
  OutputFlags gap_output;
  std::string gap_train, gap_test;
  CLI::App* gap = app.add_subcommand("gap", "Generalization gap between two splits");
  gap->add_option("--train", gap_train, "Train dataset or report (.json)")->required();
  gap->add_option("--test", gap_test, "Test dataset or report (.json)")->required();
  gap->add_option("--k", gap_flags.k, "Recall depth")->default_str("1");
  gap->add_option("--group-size", gap_flags.group_size, "Labels per group");
  gap->add_option("--seed", gap_flags.seed, "Partition seed")->default_str("0");
  gap->add_option("--alpha", gap_flags.alpha, "CI significance")->default_str("0.05");
  gap->add_option("--backend", gap_flags.backend, "brute or vptree")->default_str("vptree");
  gap->add_option("--distance", gap_flags.distance, "l2 or cosine")->default_str("l2");
  add_output_flags(gap, gap_output);
  gap->callback([&] { run_gap(gap_train, gap_test, gap_flags, gap_output); });

  // gen
  SynthFlags gen_synth;
  std::int64_t gen_classes = 64;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic Gaussian-cluster dataset");
  gen->add_option("--classes", gen_classes, "Number of classes")->default_str("64");
  add_synth_flags(gen, gen_synth);
  gen->add_option("--out", gen_out, "Output dataset path (.csv for csv, else GREC binary)")
      ->required();
  gen->callback([&] { run_gen(gen_synth, gen_classes, gen_out); });

  // sweep
  SynthFlags sweep_synth;
  OutputFlags sweep_output;
  std::vector<std::int64_t> sweep_classes = {32, 64, 128, 256};
  std::int64_t sweep_group_size = 8;
  std::int64_t sweep_k = 1;
  std::int64_t sweep_trials = 20;
  CLI::App* sweep =
      app.add_subcommand("sweep", "Plain vs grouped recall across growing class counts");
  sweep->add_option("--classes", sweep_classes, "Class counts to sweep")
      ->delimiter(',')
      ->default_str("32,64,128,256");
  sweep->add_option("--group-size", sweep_group_size, "Labels per group")->default_str("8");
  sweep->add_option("--k", sweep_k, "Recall depth")->default_str("1");
  sweep->add_option("--trials", sweep_trials, "Datasets per class count")->default_str("20");
  add_synth_flags(sweep, sweep_synth);
  add_output_flags(sweep, sweep_output);
  sweep->callback([&] {
    run_sweep(sweep_synth, sweep_classes, sweep_group_size, sweep_k, sweep_trials, sweep_output);
  });

  // coverage
  SynthFlags coverage_synth;
  OutputFlags coverage_output;
  std::int64_t coverage_classes = 512;
  std::int64_t coverage_group_size = 4;
  std::int64_t coverage_k = 1;
  std::int64_t coverage_trials = 500;
  double coverage_alpha = 0.05;
  CLI::App* coverage = app.add_subcommand(
      "coverage", "Monte Carlo check that split differences stay inside the bound");
  coverage->add_option("--classes", coverage_classes, "Classes per trial dataset (even)")
      ->default_str("512");
  coverage->add_option("--group-size", coverage_group_size, "Labels per group")->default_str("4");
  coverage->add_option("--k", coverage_k, "Recall depth")->default_str("1");
  coverage->add_option("--alpha", coverage_alpha, "Bound significance")->default_str("0.05");
  coverage->add_option("--trials", coverage_trials, "Monte Carlo trials (>= 100)")
      ->default_str("500");
  add_synth_flags(coverage, coverage_synth);
  add_output_flags(coverage, coverage_output);
  coverage->callback([&] {
    run_coverage(coverage_synth, coverage_classes, coverage_group_size, coverage_k,
                 coverage_alpha, coverage_trials, coverage_output);
  });

  // bench
  SynthFlags bench_synth;
  OutputFlags bench_output;
  std::vector<std::int64_t> bench_sizes = {5000, 10000, 20000};
  std::int64_t bench_group_size = 4;
  std::int64_t bench_k = 1;
  std::int64_t bench_trials = 3;
  std::string bench_backend = "brute";
  std::string bench_distance = "l2";
  CLI::App* bench =
      app.add_subcommand("bench", "Wall-clock scaling of full vs grouped evaluation");
  bench->add_option("--sizes", bench_sizes, "Dataset sizes (strictly increasing)")
      ->delimiter(',')
      ->default_str("5000,10000,20000");
  bench->add_option("--group-size", bench_group_size, "Labels per group")->default_str("4");
  bench->add_option("--k", bench_k, "Recall depth")->default_str("1");
  bench->add_option("--backend", bench_backend, "brute or vptree")->default_str("brute");
  bench->add_option("--distance", bench_distance, "l2 or cosine")->default_str("l2");
  bench->add_option("--trials", bench_trials, "Timed runs per size (median)")->default_str("3");
  add_synth_flags(bench, bench_synth);
  add_output_flags(bench, bench_output);
  bench->callback([&] {
    run_bench(bench_synth, bench_sizes, bench_group_size, bench_k, bench_backend, bench_distance,
              bench_trials, bench_output);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const grec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == grec::ErrorKind::internal ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
