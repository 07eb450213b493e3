#include "evkmeans/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "evkmeans/errors.hpp"

namespace evkmeans {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string format_number(double v) {
  char tmp[32];
  std::snprintf(tmp, sizeof(tmp), "%.6f", v);
  return tmp;
}

}  // namespace

ClusterOutcome run_algorithm(const std::string& algorithm, const Matrix& x,
                             const RunConfig& cfg) {
  if (algorithm == "kmeans") return lloyd_kmeans(x, cfg);
  if (algorithm == "gev") return gev_kmeans(x, cfg);
  if (algorithm == "gpd") return gpd_kmeans(x, cfg);
  throw std::invalid_argument("unknown algorithm '" + algorithm +
                              "' (expected kmeans, gev, or gpd)");
}

BenchResult bench_single(const std::string& algorithm, const Dataset& ds,
                         const RunConfig& cfg) {
  const ClusterOutcome outcome = run_algorithm(algorithm, ds.x, cfg);

  BenchResult row;
  row.algorithm = algorithm;
  row.dataset = ds.name;
  row.seed = cfg.seed;
  row.iterations = outcome.iterations;
  if (ds.y) {
    row.metrics.acc = acc(*ds.y, outcome.labels);
    row.metrics.nmi = nmi(*ds.y, outcome.labels);
    row.metrics.ari = ari(*ds.y, outcome.labels);
  } else {
    row.metrics.acc = kNan;
    row.metrics.nmi = kNan;
    row.metrics.ari = kNan;
  }
  row.metrics.silhouette = silhouette(ds.x, outcome.labels);

  const double iters = static_cast<double>(std::max(outcome.iterations, 1));
  row.timings.total = outcome.timings.total_seconds;
  row.timings.mle_total = outcome.timings.mle_total_seconds;
  row.timings.mle_avg = row.timings.mle_total / iters;
  row.timings.cluster_total = outcome.timings.cluster_total_seconds();
  row.timings.cluster_avg = row.timings.cluster_total / iters;
  return row;
}

std::vector<BenchResult> bench_repeats(const std::string& algorithm,
                                       const Dataset& ds, const RunConfig& cfg,
                                       int repeats) {
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  std::vector<BenchResult> rows;
  rows.reserve(static_cast<std::size_t>(repeats));
  for (int r = 0; r < repeats; ++r) {
    RunConfig run = cfg;
    run.seed = cfg.seed + static_cast<std::uint64_t>(r);
    rows.push_back(bench_single(algorithm, ds, run));
  }
  return rows;
}

BenchResult mean_result(const std::vector<BenchResult>& rows) {
  if (rows.empty()) throw std::invalid_argument("mean_result requires at least one row");
  BenchResult mean;
  mean.algorithm = rows.front().algorithm;
  mean.dataset = rows.front().dataset;
  double iters = 0.0;
  for (const BenchResult& r : rows) {
    mean.metrics.acc += r.metrics.acc;
    mean.metrics.nmi += r.metrics.nmi;
    mean.metrics.ari += r.metrics.ari;
    mean.metrics.silhouette += r.metrics.silhouette;
    mean.timings.total += r.timings.total;
    mean.timings.mle_total += r.timings.mle_total;
    mean.timings.mle_avg += r.timings.mle_avg;
    mean.timings.cluster_total += r.timings.cluster_total;
    mean.timings.cluster_avg += r.timings.cluster_avg;
    iters += static_cast<double>(r.iterations);
  }
  const double n = static_cast<double>(rows.size());
  mean.metrics.acc /= n;
  mean.metrics.nmi /= n;
  mean.metrics.ari /= n;
  mean.metrics.silhouette /= n;
  mean.timings.total /= n;
  mean.timings.mle_total /= n;
  mean.timings.mle_avg /= n;
  mean.timings.cluster_total /= n;
  mean.timings.cluster_avg /= n;
  mean.iterations = static_cast<int>(std::lround(iters / n));
  return mean;
}

std::string bench_header(char delimiter) {
  const char* cols[] = {"algorithm", "dataset",    "seed",       "iterations",
                        "acc",       "nmi",        "ari",        "silhouette",
                        "total_s",   "mle_total_s", "mle_avg_s", "cluster_total_s",
                        "cluster_avg_s"};
  std::string out;
  for (const char* c : cols) {
    if (!out.empty()) out += delimiter;
    out += c;
  }
  return out;
}

std::string format_row(const BenchResult& row, bool is_mean, char delimiter) {
  std::string out = row.algorithm;
  out += delimiter;
  out += row.dataset;
  out += delimiter;
  out += is_mean ? "mean" : std::to_string(row.seed);
  out += delimiter;
  out += std::to_string(row.iterations);
  for (const double v : {row.metrics.acc, row.metrics.nmi, row.metrics.ari,
                         row.metrics.silhouette, row.timings.total,
                         row.timings.mle_total, row.timings.mle_avg,
                         row.timings.cluster_total, row.timings.cluster_avg}) {
    out += delimiter;
    out += format_number(v);
  }
  return out;
}

void write_bench_csv(const std::string& path, const std::vector<BenchResult>& rows,
                     bool append_mean, char delimiter) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << bench_header(delimiter) << '\n';
  for (const BenchResult& r : rows) {
    out << format_row(r, false, delimiter) << '\n';
  }
  if (append_mean && !rows.empty()) {
    out << format_row(mean_result(rows), true, delimiter) << '\n';
  }
  if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace evkmeans
