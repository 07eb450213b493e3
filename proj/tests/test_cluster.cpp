#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "evkmeans/cluster.hpp"
#include "evkmeans/data.hpp"
#include "evkmeans/errors.hpp"
#include "evkmeans/metrics.hpp"

using namespace evkmeans;

namespace {

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Matrix make_matrix(const std::vector<std::vector<double>>& rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()),
           static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

bool is_data_row(const Matrix& data, const RowVec& row) {
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    if (data.row(i) == row) return true;
  }
  return false;
}

TailFit distance_tail() { return TailFit{}; }

}  // namespace

TEST_CASE("init_random draws k distinct data rows deterministically") {
  const Dataset ds = gen_synthetic({});
  Rng r1(3), r2(3);
  const Matrix a = init_random(ds.x, 5, r1);
  const Matrix b = init_random(ds.x, 5, r2);
  CHECK(a == b);
  std::set<std::vector<double>> seen;
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    CHECK(is_data_row(ds.x, a.row(j)));
    std::vector<double> key(a.row(j).begin(), a.row(j).end());
    CHECK(seen.insert(key).second);
  }
}

TEST_CASE("init_kmeanspp picks data rows and spreads them out") {
  const Matrix data = make_matrix(
      {{0.0, 0.0}, {0.1, 0.0}, {10.0, 10.0}, {10.1, 10.0}, {-10.0, 5.0}});
  Rng rng(1);
  const Matrix c = init_kmeanspp(data, 3, rng);
  std::set<std::vector<double>> seen;
  for (Eigen::Index j = 0; j < c.rows(); ++j) {
    CHECK(is_data_row(data, c.row(j)));
    std::vector<double> key(c.row(j).begin(), c.row(j).end());
    CHECK(seen.insert(key).second);
  }
  Rng r2(1);
  CHECK(init_kmeanspp(data, 3, r2) == c);
}

TEST_CASE("init_kmeanspp survives fully duplicated data") {
  const Matrix data = make_matrix({{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}});
  Rng rng(0);
  const Matrix c = init_kmeanspp(data, 2, rng);
  CHECK(c.row(0) == data.row(0));
  CHECK(c.row(1) == data.row(0));
}

TEST_CASE("init validates k against the data") {
  const Matrix data = make_matrix({{0.0}, {1.0}});
  Rng rng(0);
  CHECK_THROWS_AS(init_random(data, 3, rng), std::invalid_argument);
  CHECK_THROWS_AS(init_random(data, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(init_kmeanspp(data, 3, rng), std::invalid_argument);
}

TEST_CASE("covering_probability evaluates the tail cdf at the negated distance") {
  ClusterModel model;
  model.kind = AlgorithmKind::Gpd;
  model.centroids = make_matrix({{0.0, 0.0}});
  TailFit tail;
  tail.family = TailFamily::Gpd;
  tail.params = GpdParams{0.0, 1.0, 0.0};
  tail.threshold = -2.0;
  model.tails = {tail};

  RowVec x(2);
  x << 1.0, 0.0;  // distance 1, inside the shifted support
  CHECK(close(covering_probability(model, 0, x), 1.0 - std::exp(-1.0), 1e-15));
  x << 3.0, 0.0;  // distance 3, below the shifted location
  CHECK(covering_probability(model, 0, x) == 0.0);
  x << 2.0, 0.0;  // exactly at the location
  CHECK(covering_probability(model, 0, x) == 0.0);
}

TEST_CASE("covering_probability handles gev and distance tails") {
  ClusterModel model;
  model.kind = AlgorithmKind::Gev;
  model.centroids = make_matrix({{0.0, 0.0}, {5.0, 0.0}});
  TailFit gev_tail;
  gev_tail.family = TailFamily::Gev;
  gev_tail.params = GevParams{-1.0, 1.0, 0.0};
  model.tails = {gev_tail, distance_tail()};

  RowVec x(2);
  x << 1.0, 0.0;
  // Gumbel cdf at -1 with mu = -1: exp(-exp(0)) = e^-1.
  CHECK(close(covering_probability(model, 0, x), std::exp(-1.0), 1e-15));
  // Distance fallback: exp(-d) with d = 4.
  CHECK(close(covering_probability(model, 1, x), std::exp(-4.0), 1e-15));
}

TEST_CASE("covering_probability rejects plain models and bad indices") {
  ClusterModel plain;
  plain.kind = AlgorithmKind::Plain;
  plain.centroids = make_matrix({{0.0}});
  RowVec x(1);
  x << 0.0;
  CHECK_THROWS_AS(covering_probability(plain, 0, x), std::logic_error);

  ClusterModel model;
  model.kind = AlgorithmKind::Gpd;
  model.centroids = make_matrix({{0.0}});
  model.tails = {distance_tail()};
  CHECK_THROWS_AS(covering_probability(model, 1, x), std::invalid_argument);
  CHECK_THROWS_AS(covering_probability(model, -1, x), std::invalid_argument);
}

TEST_CASE("assign_labels picks the highest covering probability") {
  ClusterModel model;
  model.kind = AlgorithmKind::Gpd;
  model.centroids = make_matrix({{0.0, 0.0}, {10.0, 0.0}});
  // Cluster 0 covers generously, cluster 1 barely at all.
  TailFit wide;
  wide.family = TailFamily::Gpd;
  wide.params = GpdParams{0.0, 8.0, 0.0};
  wide.threshold = -12.0;
  TailFit narrow;
  narrow.family = TailFamily::Gpd;
  narrow.params = GpdParams{0.0, 0.1, 0.0};
  narrow.threshold = -0.5;
  model.tails = {wide, narrow};

  const Matrix data = make_matrix({{6.0, 0.0}, {9.9, 0.0}});
  const auto labels = assign_labels(model, data);
  // The first point sits 6 from cluster 0 and 4 from cluster 1, yet cluster 0
  // still covers it with higher probability.
  CHECK(labels[0] == 0);
  // The second point lies within the narrow tail's short reach.
  CHECK(labels[1] == 1);
}

TEST_CASE("assign_labels breaks saturated ties toward the nearest centroid") {
  ClusterModel model;
  model.kind = AlgorithmKind::Gpd;
  model.centroids = make_matrix({{0.0, 0.0}, {3.0, 0.0}});
  // Both tails saturate to zero everywhere relevant: negative shape with a
  // tiny reach below the threshold.
  TailFit dead;
  dead.family = TailFamily::Gpd;
  dead.params = GpdParams{0.0, 0.01, -0.5};
  dead.threshold = -0.001;
  model.tails = {dead, dead};

  const Matrix data = make_matrix({{1.0, 0.0}, {2.0, 0.0}, {1.5, 0.0}});
  const auto labels = assign_labels(model, data);
  CHECK(labels[0] == 0);
  CHECK(labels[1] == 1);
  CHECK(labels[2] == 0);  // exact tie, lowest index
}

TEST_CASE("assign_labels with distance tails reproduces nearest-centroid groups") {
  const Dataset ds = gen_synthetic({});
  Rng rng(4);
  const Matrix cents = init_random(ds.x, 4, rng);
  ClusterModel model;
  model.kind = AlgorithmKind::Gev;
  model.centroids = cents;
  model.tails = {distance_tail(), distance_tail(), distance_tail(), distance_tail()};
  CHECK(assign_labels(model, ds.x) == assign_groups(ds.x, cents));
}

TEST_CASE("assign_labels for plain models is nearest-centroid") {
  ClusterModel model;
  model.kind = AlgorithmKind::Plain;
  model.centroids = make_matrix({{0.0}, {10.0}});
  const Matrix data = make_matrix({{1.0}, {9.0}, {4.9}});
  CHECK(assign_labels(model, data) == std::vector<int>{0, 1, 0});
}

TEST_CASE("update_centroids averages each cluster") {
  const Matrix data = make_matrix({{0.0, 0.0}, {2.0, 0.0}, {10.0, 4.0}, {10.0, 6.0}});
  std::vector<int> labels = {0, 0, 1, 1};
  const Matrix c = update_centroids(data, labels, 2);
  CHECK(c(0, 0) == 1.0);
  CHECK(c(0, 1) == 0.0);
  CHECK(c(1, 0) == 10.0);
  CHECK(c(1, 1) == 5.0);
  CHECK(labels == std::vector<int>{0, 0, 1, 1});
}

TEST_CASE("update_centroids reseeds an empty cluster at the farthest sample") {
  const Matrix data = make_matrix({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {9.0, 0.0}});
  std::vector<int> labels = {0, 0, 0, 0};
  const Matrix c = update_centroids(data, labels, 2);
  // Mean of cluster 0 is (3, 0); the farthest member (9, 0) becomes cluster 1.
  CHECK(labels == std::vector<int>{0, 0, 0, 1});
  CHECK(c(1, 0) == 9.0);
  CHECK(c(0, 0) == 1.0);  // mean of the three remaining samples
}

TEST_CASE("update_centroids fails loudly when reseeding is impossible") {
  const Matrix data = make_matrix({{1.0, 1.0}});
  std::vector<int> labels = {0};
  CHECK_THROWS_AS(update_centroids(data, labels, 2), NumericalError);
}

TEST_CASE("update_centroids validates labels") {
  const Matrix data = make_matrix({{0.0}, {1.0}});
  std::vector<int> labels = {0, 5};
  CHECK_THROWS_AS(update_centroids(data, labels, 2), std::invalid_argument);
  std::vector<int> wrong_size = {0};
  CHECK_THROWS_AS(update_centroids(data, wrong_size, 2), std::invalid_argument);
}

TEST_CASE("kmeans_objective sums squared distances") {
  const Matrix data = make_matrix({{0.0, 0.0}, {3.0, 4.0}});
  const Matrix cents = make_matrix({{0.0, 0.0}, {0.0, 0.0}});
  const std::vector<int> labels = {0, 1};
  CHECK(kmeans_objective(data, labels, cents) == 25.0);
}

TEST_CASE("objective_j_prime is the negated sum of covering probabilities") {
  ClusterModel model;
  model.kind = AlgorithmKind::Gpd;
  model.centroids = make_matrix({{0.0}});
  model.tails = {distance_tail()};
  const Matrix data = make_matrix({{1.0}, {2.0}});
  const std::vector<int> labels = {0, 0};
  const double expect = -(std::exp(-1.0) + std::exp(-2.0));
  CHECK(close(objective_j_prime(model, data, labels), expect, 1e-15));
  CHECK(objective_j_prime(model, data, labels) >= -2.0);
  CHECK(objective_j_prime(model, data, labels) <= 0.0);
}

TEST_CASE("lloyd_kmeans separates well-spaced blobs and never raises its objective") {
  SynthConfig scfg;
  scfg.n = 300;
  scfg.k = 3;
  scfg.sigma = 0.05;
  scfg.seed = 21;
  const Dataset ds = gen_synthetic(scfg);
  for (const std::uint64_t seed : {0ULL, 1ULL, 2ULL, 3ULL, 4ULL}) {
    RunConfig cfg;
    cfg.k = 3;
    cfg.seed = seed;
    const ClusterOutcome out = lloyd_kmeans(ds.x, cfg);
    CHECK(out.iterations >= 1);
    CHECK(out.iterations <= cfg.max_iter);
    for (std::size_t i = 1; i < out.objective_trace.size(); ++i) {
      CHECK(out.objective_trace[i] <= out.objective_trace[i - 1] * (1.0 + 1e-12) + 1e-12);
    }
    CHECK(ari(*ds.y, out.labels) >= 0.95);
    CHECK(out.model.kind == AlgorithmKind::Plain);
    CHECK(out.model.tails.empty());
  }
}

TEST_CASE("lloyd_kmeans is deterministic per seed") {
  const Dataset ds = gen_synthetic({});
  RunConfig cfg;
  cfg.k = 3;
  cfg.seed = 9;
  const ClusterOutcome a = lloyd_kmeans(ds.x, cfg);
  const ClusterOutcome b = lloyd_kmeans(ds.x, cfg);
  CHECK(a.labels == b.labels);
  CHECK(a.model.centroids == b.model.centroids);
  CHECK(a.objective_trace == b.objective_trace);
}

// Blob layouts are uniform draws, so some seeds produce overlapping truth
// clusters; these tests pin seeds whose centroids are at least 1.0 apart.
TEST_CASE("gev_kmeans recovers well-separated blobs") {
  SynthConfig scfg;
  scfg.n = 300;
  scfg.k = 3;
  scfg.sigma = 0.1;
  scfg.seed = 5;
  const Dataset ds = gen_synthetic(scfg);
  RunConfig cfg;
  cfg.k = 3;
  cfg.seed = 2;
  const ClusterOutcome out = gev_kmeans(ds.x, cfg);
  CHECK(ari(*ds.y, out.labels) >= 0.9);
  CHECK(out.model.kind == AlgorithmKind::Gev);
  REQUIRE(out.model.tails.size() == 3);
  const double n = static_cast<double>(ds.n());
  for (const double j : out.objective_trace) {
    CHECK(j <= 0.0);
    CHECK(j >= -n);
  }
  for (const auto& tail : out.model.tails) {
    CHECK(tail.family == TailFamily::Gev);
    CHECK_FALSE(tail.sample.empty());
    CHECK(tail.fit.evals > 0);
  }
}

TEST_CASE("gpd_kmeans recovers well-separated blobs and records thresholds") {
  SynthConfig scfg;
  scfg.n = 300;
  scfg.k = 3;
  scfg.sigma = 0.1;
  scfg.seed = 7;
  const Dataset ds = gen_synthetic(scfg);
  RunConfig cfg;
  cfg.k = 3;
  cfg.seed = 5;
  const ClusterOutcome out = gpd_kmeans(ds.x, cfg);
  CHECK(ari(*ds.y, out.labels) >= 0.9);
  REQUIRE(out.model.tails.size() == 3);
  for (const auto& tail : out.model.tails) {
    CHECK(tail.family == TailFamily::Gpd);
    // Negated distances are non-positive, so the POT threshold must be too.
    CHECK(tail.threshold < 0.0);
    CHECK_FALSE(tail.sample.empty());
    for (const double v : tail.sample) CHECK(v > 0.0);
  }
  CHECK(out.timings.total_seconds > 0.0);
  CHECK(out.timings.mle_total_seconds > 0.0);
  CHECK(out.timings.mle_total_seconds <= out.timings.total_seconds);
  CHECK(out.timings.per_iteration.size() == static_cast<std::size_t>(out.iterations));
}

TEST_CASE("evt runs are deterministic per seed") {
  SynthConfig scfg;
  scfg.n = 200;
  scfg.k = 2;
  scfg.seed = 8;
  const Dataset ds = gen_synthetic(scfg);
  RunConfig cfg;
  cfg.k = 2;
  cfg.seed = 17;
  const ClusterOutcome a = gpd_kmeans(ds.x, cfg);
  const ClusterOutcome b = gpd_kmeans(ds.x, cfg);
  CHECK(a.labels == b.labels);
  CHECK(a.model.centroids == b.model.centroids);
  CHECK(a.objective_trace == b.objective_trace);
  const ClusterOutcome c = gev_kmeans(ds.x, cfg);
  const ClusterOutcome d = gev_kmeans(ds.x, cfg);
  CHECK(c.labels == d.labels);
  CHECK(c.model.centroids == d.model.centroids);
}

TEST_CASE("k=1 degrades to the distance fallback instead of failing") {
  SynthConfig scfg;
  scfg.n = 50;
  scfg.k = 1;
  scfg.seed = 2;
  const Dataset ds = gen_synthetic(scfg);
  RunConfig cfg;
  cfg.k = 1;
  const ClusterOutcome out = gpd_kmeans(ds.x, cfg);
  CHECK(out.model.tails.size() == 1);
  CHECK(out.model.tails[0].family == TailFamily::Distance);
  for (const int l : out.labels) CHECK(l == 0);
}

TEST_CASE("max_iter and tol are honored") {
  const Dataset ds = gen_synthetic({});
  RunConfig cfg;
  cfg.k = 3;
  cfg.max_iter = 1;
  const ClusterOutcome one = gpd_kmeans(ds.x, cfg);
  CHECK(one.iterations == 1);
  CHECK(one.objective_trace.size() == 1);

  cfg.max_iter = 100;
  cfg.tol = 1e9;  // any movement counts as converged
  const ClusterOutcome quick = lloyd_kmeans(ds.x, cfg);
  CHECK(quick.iterations == 1);
}

TEST_CASE("run inputs are validated") {
  RunConfig cfg;
  cfg.k = 5;
  const Matrix tiny = make_matrix({{0.0}, {1.0}});
  CHECK_THROWS_AS(lloyd_kmeans(tiny, cfg), std::invalid_argument);
  CHECK_THROWS_AS(gev_kmeans(tiny, cfg), std::invalid_argument);
  CHECK_THROWS_AS(gpd_kmeans(tiny, cfg), std::invalid_argument);
}
