#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "evkmeans/bench.hpp"
#include "evkmeans/cluster.hpp"
#include "evkmeans/data.hpp"
#include "evkmeans/errors.hpp"
#include "evkmeans/metrics.hpp"

namespace {

using namespace evkmeans;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string output;
  std::string summary;
  std::string algorithm = "gpd";
  std::string init = "kmeanspp";
  std::string format = "csv";
  std::string delimiter = ",";
  int k = 3;
  int block_size = 16;
  double alpha = 0.2;
  double tol = 1e-6;
  int max_iter = 100;
  std::uint64_t seed = 0;
  int repeats = 10;
  bool standardize = false;
  bool no_labels = false;

  int n = 1000;
  int d = 2;
  double sigma = 0.2;

  std::string param = "alpha";
  std::vector<double> values;
  std::vector<int> extra_dims;
  std::vector<std::string> algorithms = {"kmeans", "gev", "gpd"};
  int cluster_index = 0;
};

char parse_delimiter(const std::string& spec) {
  if (spec == "\\t" || spec == "tab") return '\t';
  if (spec.size() == 1) return spec[0];
  throw UsageError("--delimiter must be a single character or '\\t'");
}

RunConfig run_config(const Options& opt) {
  RunConfig cfg;
  cfg.k = opt.k;
  cfg.init = opt.init == "random" ? InitMethod::Random : InitMethod::KMeansPP;
  cfg.tol = opt.tol;
  cfg.max_iter = opt.max_iter;
  cfg.seed = opt.seed;
  cfg.bmm.block_size = opt.block_size;
  cfg.pot.alpha = opt.alpha;
  return cfg;
}

Dataset load_input(const Options& opt) {
  if (opt.input.empty()) throw UsageError("--input is required");
  const char delim = parse_delimiter(opt.delimiter);
  Dataset ds = opt.format == "libsvm" ? load_libsvm(opt.input)
                                      : load_csv(opt.input, !opt.no_labels, delim);
  if (opt.standardize) ds = standardize(ds);
  return ds;
}

void require_output(const Options& opt) {
  if (opt.output.empty()) throw UsageError("--output is required");
}

json metrics_json(const BenchResult& row) {
  return json{{"acc", row.metrics.acc},
              {"nmi", row.metrics.nmi},
              {"ari", row.metrics.ari},
              {"silhouette", row.metrics.silhouette},
              {"iterations", row.iterations}};
}

void write_summary(const std::string& path, const json& body) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << body.dump(2) << '\n';
}

int cmd_synth(const Options& opt) {
  require_output(opt);
  SynthConfig cfg;
  cfg.n = opt.n;
  cfg.k = opt.k;
  cfg.d = opt.d;
  cfg.sigma = opt.sigma;
  cfg.seed = opt.seed;
  const Dataset ds = gen_synthetic(cfg);
  if (opt.format == "libsvm") {
    save_libsvm(ds, opt.output);
  } else {
    save_csv(ds, opt.output, parse_delimiter(opt.delimiter));
  }
  std::printf("wrote %lld samples (%s) to %s\n",
              static_cast<long long>(ds.n()), ds.name.c_str(), opt.output.c_str());
  return kExitOk;
}

int cmd_cluster(const Options& opt) {
  require_output(opt);
  const Dataset ds = load_input(opt);
  const RunConfig cfg = run_config(opt);
  const char delim = parse_delimiter(opt.delimiter);
  const auto rows = bench_repeats(opt.algorithm, ds, cfg, opt.repeats);
  write_bench_csv(opt.output, rows, true, delim);
  const BenchResult mean = mean_result(rows);
  write_summary(opt.summary, json{{"command", "cluster"},
                                  {"algorithm", opt.algorithm},
                                  {"dataset", ds.name},
                                  {"repeats", opt.repeats},
                                  {"mean", metrics_json(mean)}});
  std::printf("%s on %s: mean ari %.4f acc %.4f over %d repeats\n",
              opt.algorithm.c_str(), ds.name.c_str(), mean.metrics.ari,
              mean.metrics.acc, opt.repeats);
  return kExitOk;
}

int cmd_sweep(const Options& opt) {
  require_output(opt);
  if (opt.values.empty()) throw UsageError("--values is required");
  const bool sweep_block = opt.param == "block-size" || opt.param == "block_size";
  if (!sweep_block && opt.param != "alpha") {
    throw UsageError("--param must be block-size or alpha");
  }
  std::vector<double> values = opt.values;
  std::sort(values.begin(), values.end());
  for (const double v : values) {
    if (sweep_block && (v < 1.0 || v != std::floor(v))) {
      throw UsageError("block-size values must be positive integers");
    }
    if (!sweep_block && !(v > 0.0 && v < 1.0)) {
      throw UsageError("alpha values must lie in (0, 1)");
    }
  }

  const Dataset ds = load_input(opt);
  const char delim = parse_delimiter(opt.delimiter);
  std::ofstream out(opt.output);
  if (!out) throw IoError("cannot write '" + opt.output + "'");
  out << "param" << delim << "value" << delim << bench_header(delim) << '\n';

  json summary_rows = json::array();
  for (const double v : values) {
    Options cur = opt;
    if (sweep_block) {
      cur.block_size = static_cast<int>(v);
    } else {
      cur.alpha = v;
    }
    const auto rows = bench_repeats(opt.algorithm, ds, run_config(cur), opt.repeats);
    const BenchResult mean = mean_result(rows);
    char value_buf[32];
    if (sweep_block) {
      std::snprintf(value_buf, sizeof(value_buf), "%d", static_cast<int>(v));
    } else {
      std::snprintf(value_buf, sizeof(value_buf), "%g", v);
    }
    out << (sweep_block ? "block_size" : "alpha") << delim << value_buf << delim
        << format_row(mean, true, delim) << '\n';
    summary_rows.push_back(json{{"value", v}, {"mean", metrics_json(mean)}});
  }
  if (!out) throw IoError("failed while writing '" + opt.output + "'");
  write_summary(opt.summary, json{{"command", "sweep"},
                                  {"algorithm", opt.algorithm},
                                  {"param", sweep_block ? "block_size" : "alpha"},
                                  {"rows", summary_rows}});
  std::printf("swept %zu %s values on %s\n", values.size(),
              sweep_block ? "block-size" : "alpha", ds.name.c_str());
  return kExitOk;
}

int cmd_robust(const Options& opt) {
  require_output(opt);
  if (opt.extra_dims.empty()) throw UsageError("--extra-dims is required");
  for (const int e : opt.extra_dims) {
    if (e < 0) throw UsageError("--extra-dims entries must be >= 0");
  }
  const std::set<std::string> known = {"kmeans", "gev", "gpd"};
  for (const auto& a : opt.algorithms) {
    if (!known.count(a)) throw UsageError("unknown algorithm '" + a + "'");
  }

  SynthConfig scfg;
  scfg.n = opt.n;
  scfg.k = opt.k;
  scfg.d = opt.d;
  scfg.sigma = opt.sigma;
  scfg.seed = opt.seed;
  const Dataset base = gen_synthetic(scfg);

  std::vector<int> extras = opt.extra_dims;
  std::sort(extras.begin(), extras.end());
  const char delim = parse_delimiter(opt.delimiter);
  std::ofstream out(opt.output);
  if (!out) throw IoError("cannot write '" + opt.output + "'");
  out << "extra_dims" << delim << bench_header(delim) << '\n';

  json summary_rows = json::array();
  for (const int extra : extras) {
    // Reseeded per count so each row is reproducible in isolation.
    Rng noise(scfg.seed + 1 + static_cast<std::uint64_t>(extra));
    const Dataset ds = extra == 0 ? base : add_uninformative(base, extra, noise);
    for (const auto& algorithm : opt.algorithms) {
      const auto rows = bench_repeats(algorithm, ds, run_config(opt), opt.repeats);
      const BenchResult mean = mean_result(rows);
      out << extra << delim << format_row(mean, true, delim) << '\n';
      summary_rows.push_back(json{{"extra_dims", extra},
                                  {"algorithm", algorithm},
                                  {"mean", metrics_json(mean)}});
    }
  }
  if (!out) throw IoError("failed while writing '" + opt.output + "'");
  write_summary(opt.summary, json{{"command", "robust"},
                                  {"dataset", base.name},
                                  {"rows", summary_rows}});
  std::printf("robustness table for %s: %zu extra-dim counts x %zu algorithms\n",
              base.name.c_str(), extras.size(), opt.algorithms.size());
  return kExitOk;
}

int cmd_fitdiag(const Options& opt) {
  require_output(opt);
  if (opt.algorithm != "gev" && opt.algorithm != "gpd") {
    throw UsageError("fitdiag requires --algorithm gev or gpd");
  }
  const Dataset ds = load_input(opt);
  const RunConfig cfg = run_config(opt);
  const ClusterOutcome run = run_algorithm(opt.algorithm, ds.x, cfg);
  if (opt.cluster_index < 0 || opt.cluster_index >= run.model.k()) {
    throw UsageError("--cluster-index must lie in [0, k)");
  }
  const TailFit& tail = run.model.tails[static_cast<std::size_t>(opt.cluster_index)];
  if (tail.family == TailFamily::Distance) {
    throw NumericalError("cluster " + std::to_string(opt.cluster_index) +
                         " has no fitted tail (distance fallback)");
  }
  const QqDiagnostic qq = qq_diagnostic(tail.sample, tail);

  const char delim = parse_delimiter(opt.delimiter);
  std::ofstream out(opt.output);
  if (!out) throw IoError("cannot write '" + opt.output + "'");
  out << "empirical" << delim << "theoretical" << '\n';
  char buf[64];
  for (const auto& [emp, theo] : qq.points) {
    std::snprintf(buf, sizeof(buf), "%.17g", emp);
    out << buf << delim;
    std::snprintf(buf, sizeof(buf), "%.17g", theo);
    out << buf << '\n';
  }
  if (!out) throw IoError("failed while writing '" + opt.output + "'");
  write_summary(opt.summary,
                json{{"command", "fitdiag"},
                     {"algorithm", opt.algorithm},
                     {"dataset", ds.name},
                     {"cluster_index", opt.cluster_index},
                     {"points", qq.points.size()},
                     {"correlation", qq.correlation}});
  std::printf("qq correlation: %.6f\n", qq.correlation);
  return kExitOk;
}

void add_run_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--algorithm", opt.algorithm, "Clustering algorithm")
      ->check(CLI::IsMember({"kmeans", "gev", "gpd"}));
  cmd->add_option("--init", opt.init, "Centroid initialization")
      ->check(CLI::IsMember({"random", "kmeanspp"}));
  cmd->add_option("--k", opt.k, "Number of clusters");
  cmd->add_option("--block-size", opt.block_size, "Block maxima block size s");
  cmd->add_option("--alpha", opt.alpha, "POT tail fraction");
  cmd->add_option("--tol", opt.tol, "Centroid movement tolerance");
  cmd->add_option("--max-iter", opt.max_iter, "Iteration cap");
  cmd->add_option("--seed", opt.seed, "Base random seed");
  cmd->add_option("--repeats", opt.repeats, "Seeded repetitions");
  cmd->add_flag("--standardize", opt.standardize, "Scale columns to unit variance");
}

void add_io_flags(CLI::App* cmd, Options& opt, bool with_input) {
  if (with_input) {
    cmd->add_option("--input", opt.input, "Input dataset path");
    cmd->add_flag("--no-labels", opt.no_labels,
                  "Input csv has no trailing label column");
  }
  cmd->add_option("--output", opt.output, "Output table path");
  cmd->add_option("--summary", opt.summary, "Optional structured summary (json)");
  cmd->add_option("--delimiter", opt.delimiter, "Field delimiter (single char or \\t)");
  cmd->add_option("--format", opt.format, "Dataset file format")
      ->check(CLI::IsMember({"csv", "libsvm"}));
}

void add_synth_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--n", opt.n, "Sample count");
  cmd->add_option("--d", opt.d, "Informative dimensions");
  cmd->add_option("--sigma", opt.sigma, "Blob noise scale");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extreme-value k-means clustering toolkit"};
  app.set_version_flag("--version", "0.1.0");
  app.set_config("--config");
  app.require_subcommand(1);

  Options opt;

  CLI::App* synth = app.add_subcommand("synth", "Generate a labeled gaussian-blob dataset");
  add_io_flags(synth, opt, false);
  add_synth_flags(synth, opt);
  synth->add_option("--k", opt.k, "Number of clusters");
  synth->add_option("--seed", opt.seed, "Generator seed");

  CLI::App* cluster = app.add_subcommand("cluster", "Run one algorithm over seeded repeats");
  add_io_flags(cluster, opt, true);
  add_run_flags(cluster, opt);

  CLI::App* sweep = app.add_subcommand("sweep", "Sweep block-size or alpha over a value list");
  add_io_flags(sweep, opt, true);
  add_run_flags(sweep, opt);
  sweep->add_option("--param", opt.param, "Hyperparameter to sweep")
      ->check(CLI::IsMember({"block-size", "block_size", "alpha"}));
  sweep->add_option("--values", opt.values, "Values to sweep over")
      ->delimiter(',');

  CLI::App* robust = app.add_subcommand(
      "robust", "Uninformative-feature robustness table on synthetic data");
  add_io_flags(robust, opt, false);
  add_run_flags(robust, opt);
  add_synth_flags(robust, opt);
  robust->add_option("--extra-dims", opt.extra_dims, "Uninformative column counts")
      ->delimiter(',');
  robust->add_option("--algorithms", opt.algorithms, "Algorithms to compare")
      ->delimiter(',');

  CLI::App* fitdiag = app.add_subcommand("fitdiag", "Q-Q diagnostic of one cluster's tail fit");
  add_io_flags(fitdiag, opt, true);
  add_run_flags(fitdiag, opt);
  fitdiag->add_option("--cluster-index", opt.cluster_index, "Cluster to diagnose");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed()) return cmd_synth(opt);
    if (cluster->parsed()) return cmd_cluster(opt);
    if (sweep->parsed()) return cmd_sweep(opt);
    if (robust->parsed()) return cmd_robust(opt);
    return cmd_fitdiag(opt);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DataFormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}
