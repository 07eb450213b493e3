#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evkmeans/cluster.hpp"
#include "evkmeans/data.hpp"
#include "evkmeans/metrics.hpp"

namespace evkmeans {

struct BenchTimings {
  double total = 0.0;
  double mle_total = 0.0;
  double mle_avg = 0.0;       // per iteration
  double cluster_total = 0.0;
  double cluster_avg = 0.0;   // per iteration
};

struct BenchResult {
  std::string algorithm;
  std::string dataset;
  std::uint64_t seed = 0;
  MetricReport metrics;
  BenchTimings timings;
  int iterations = 0;
};

// Dispatch on "kmeans", "gev", or "gpd"; anything else is std::invalid_argument.
ClusterOutcome run_algorithm(const std::string& algorithm, const Matrix& x,
                             const RunConfig& cfg);

// One clustering run plus its metric report. acc/nmi/ari are NaN when the
// dataset carries no ground-truth labels; silhouette always computes.
BenchResult bench_single(const std::string& algorithm, const Dataset& ds,
                         const RunConfig& cfg);

// `repeats` runs with seeds base, base+1, ...; deterministic given the base.
std::vector<BenchResult> bench_repeats(const std::string& algorithm,
                                       const Dataset& ds, const RunConfig& cfg,
                                       int repeats);

// Column-wise arithmetic mean of rows; seed is meaningless there and the
// writer prints "mean" instead.
BenchResult mean_result(const std::vector<BenchResult>& rows);

// Fixed column schema:
// algorithm,dataset,seed,iterations,acc,nmi,ari,silhouette,
// total_s,mle_total_s,mle_avg_s,cluster_total_s,cluster_avg_s
std::string bench_header(char delimiter = ',');
std::string format_row(const BenchResult& row, bool is_mean, char delimiter = ',');
void write_bench_csv(const std::string& path, const std::vector<BenchResult>& rows,
                     bool append_mean, char delimiter = ',');

}  // namespace evkmeans
