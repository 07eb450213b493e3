#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "evkmeans/distributions.hpp"
#include "evkmeans/mle.hpp"
#include "evkmeans/tail.hpp"
#include "evkmeans/types.hpp"

namespace evkmeans {

enum class AlgorithmKind { Plain, Gev, Gpd };
enum class InitMethod { Random, KMeansPP };

// Family of a per-cluster tail model. Distance marks the empty-tail fallback:
// no distribution could be fitted, and the covering probability degrades to
// exp(-distance), a rank-preserving transform of the negated distance that
// reproduces nearest-centroid assignment.
enum class TailFamily { Gev, Gpd, Distance };

struct FitDiagnostics {
  double neg_log_lik = 0.0;
  bool converged = false;
  int evals = 0;
  bool fallback_used = false;
};

struct TailFit {
  TailFamily family = TailFamily::Distance;
  std::variant<std::monostate, GevParams, GpdParams> params{};
  double threshold = 0.0;  // POT threshold u on the negated-distance scale
  FitDiagnostics fit{};
  std::vector<double> sample{};  // the values the parameters were fitted on
};

struct ClusterModel {
  Matrix centroids;            // k x d
  std::vector<TailFit> tails;  // empty for Plain
  AlgorithmKind kind = AlgorithmKind::Plain;
  int k() const { return static_cast<int>(centroids.rows()); }
};

struct RunConfig {
  int k = 2;
  InitMethod init = InitMethod::KMeansPP;
  double tol = 1e-6;   // max centroid movement that counts as converged
  int max_iter = 100;
  std::uint64_t seed = 0;
  BmmConfig bmm{};
  PotConfig pot{};
  FitOptions fit{};
};

struct IterationTiming {
  double mle_seconds = 0.0;
  double cluster_seconds = 0.0;
};

struct RunTimings {
  double total_seconds = 0.0;
  double mle_total_seconds = 0.0;
  std::vector<IterationTiming> per_iteration;
  double cluster_total_seconds() const { return total_seconds - mle_total_seconds; }
};

struct ClusterOutcome {
  ClusterModel model;
  std::vector<int> labels;
  std::vector<double> objective_trace;  // one entry per iteration
  int iterations = 0;
  RunTimings timings;
};

// k distinct sample rows, chosen uniformly without replacement.
Matrix init_random(const Matrix& data, int k, Rng& rng);

// D^2 seeding: first centroid uniform, each next one drawn with probability
// proportional to the squared distance to the nearest centroid chosen so far.
Matrix init_kmeanspp(const Matrix& data, int k, Rng& rng);

// Probability that cluster j covers point x: the fitted tail CDF evaluated at
// the negated Euclidean distance. GPD tails are evaluated at threshold + mu,
// reconciling the excess scale of the fit with the distance scale. Throws
// std::logic_error for Plain models.
double covering_probability(const ClusterModel& model, int j, const RowVec& x);

// Argmax of the covering probability per sample. Exact ties (including fully
// saturated rows of all-0 or all-1 probabilities) break to the nearest
// centroid, then the lowest index. Plain models assign by nearest centroid.
std::vector<int> assign_labels(const ClusterModel& model, const Matrix& data);

// Per-cluster means. A cluster left empty is reseeded at the sample farthest
// from its own centroid (lowest index on ties); that sample is relabeled, so
// labels is taken by reference.
Matrix update_centroids(const Matrix& data, std::vector<int>& labels, int k);

// Sum of squared distances to assigned centroids.
double kmeans_objective(const Matrix& data, std::span<const int> labels,
                        const Matrix& centroids);

// Negated sum of covering probabilities of every sample under its assigned
// cluster; lies in [-n, 0].
double objective_j_prime(const ClusterModel& model, const Matrix& data,
                         std::span<const int> labels);

// Lloyd's k-means. The objective trace records the squared-distance objective
// after each update step and never increases.
ClusterOutcome lloyd_kmeans(const Matrix& data, const RunConfig& cfg);

// Extreme-value k-means. Each iteration groups samples by nearest centroid,
// refits one tail per cluster on negated out-of-group distances (block maxima
// + GEV, or POT excesses + GPD), reassigns by covering probability, and moves
// centroids to cluster means. The objective trace records objective_j_prime
// after each assignment.
ClusterOutcome gev_kmeans(const Matrix& data, const RunConfig& cfg);
ClusterOutcome gpd_kmeans(const Matrix& data, const RunConfig& cfg);

}  // namespace evkmeans
