#pragma once

#include <span>
#include <utility>
#include <vector>

#include "evkmeans/cluster.hpp"
#include "evkmeans/types.hpp"

namespace evkmeans {

struct MetricReport {
  double acc = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double silhouette = 0.0;
};

struct QqDiagnostic {
  // (empirical quantile, theoretical quantile) pairs, ascending.
  std::vector<std::pair<double, double>> points;
  double correlation = 0.0;
};

// Minimum-cost assignment on a square finite cost matrix; returns the column
// matched to each row.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost);

// Clustering accuracy: best one-to-one matching of predicted clusters to
// truth classes (contingency table padded square, counts maximized).
double acc(std::span<const int> truth, std::span<const int> pred);

// Adjusted Rand index (pair-counting, adjusted for chance).
double ari(std::span<const int> truth, std::span<const int> pred);

// Normalized mutual information with arithmetic-mean normalization.
double nmi(std::span<const int> truth, std::span<const int> pred);

// Mean silhouette coefficient over all samples; singletons score 0, and a
// labeling with fewer than two non-empty clusters scores 0.
double silhouette(const Matrix& data, std::span<const int> labels);

// Q-Q diagnostic of a tail sample against its fitted distribution, using
// plotting positions (i - 0.5) / n and Pearson correlation of the points.
QqDiagnostic qq_diagnostic(std::span<const double> samples, const TailFit& tail);

}  // namespace evkmeans
