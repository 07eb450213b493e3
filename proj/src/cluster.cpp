#include "evkmeans/cluster.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "evkmeans/errors.hpp"

namespace evkmeans {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_run_inputs(const Matrix& data, int k) {
  if (data.rows() < 1 || data.cols() < 1) {
    throw std::invalid_argument("clustering requires a non-empty data matrix");
  }
  if (k < 1 || k > data.rows()) {
    throw std::invalid_argument("clustering requires 1 <= k <= n");
  }
}

double max_centroid_movement(const Matrix& before, const Matrix& after) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < before.rows(); ++j) {
    worst = std::max(worst, (after.row(j) - before.row(j)).norm());
  }
  return worst;
}

}  // namespace

Matrix init_random(const Matrix& data, int k, Rng& rng) {
  check_run_inputs(data, k);
  const std::size_t n = static_cast<std::size_t>(data.rows());
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  // Partial Fisher-Yates: the first k entries are a uniform draw without
  // replacement.
  for (std::size_t i = 0; i < static_cast<std::size_t>(k); ++i) {
    const std::size_t j = i + rng.uniform_index(n - i);
    std::swap(idx[i], idx[j]);
  }
  Matrix centroids(k, data.cols());
  for (int j = 0; j < k; ++j) {
    centroids.row(j) = data.row(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
  }
  return centroids;
}

Matrix init_kmeanspp(const Matrix& data, int k, Rng& rng) {
  check_run_inputs(data, k);
  const Eigen::Index n = data.rows();
  Matrix centroids(k, data.cols());
  centroids.row(0) = data.row(static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::size_t>(n))));

  std::vector<double> d2(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    d2[static_cast<std::size_t>(i)] = (data.row(i) - centroids.row(0)).squaredNorm();
  }
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (const double v : d2) total += v;
    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double r = rng.uniform() * total;
      double cum = 0.0;
      Eigen::Index last_positive = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double w = d2[static_cast<std::size_t>(i)];
        if (w <= 0.0) continue;
        cum += w;
        last_positive = i;
        if (cum > r) {
          pick = i;
          break;
        }
      }
      if (pick < 0) pick = last_positive;  // r landed on the fp boundary
    } else {
      // Every point coincides with a chosen centroid; fall back to uniform.
      pick = static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::size_t>(n)));
    }
    centroids.row(c) = data.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double nd = (data.row(i) - centroids.row(c)).squaredNorm();
      double& cur = d2[static_cast<std::size_t>(i)];
      if (nd < cur) cur = nd;
    }
  }
  return centroids;
}

namespace {

double covering_probability_at(const TailFit& tail, double dist) {
  switch (tail.family) {
    case TailFamily::Gev:
      return gev_cdf(std::get<GevParams>(tail.params), -dist);
    case TailFamily::Gpd: {
      // The GPD was fitted to excesses above threshold u, so its natural
      // location on the negated-distance axis is u + fitted mu.
      GpdParams p = std::get<GpdParams>(tail.params);
      p.mu += tail.threshold;
      return gpd_cdf(p, -dist);
    }
    case TailFamily::Distance:
      return std::exp(-dist);
  }
  throw std::logic_error("unknown tail family");
}

}  // namespace

double covering_probability(const ClusterModel& model, int j, const RowVec& x) {
  if (model.kind == AlgorithmKind::Plain) {
    throw std::logic_error("covering_probability is undefined for plain k-means models");
  }
  if (j < 0 || j >= model.k()) {
    throw std::invalid_argument("covering_probability: cluster index out of range");
  }
  if (static_cast<std::size_t>(model.k()) != model.tails.size()) {
    throw std::invalid_argument("covering_probability: model has no fitted tails");
  }
  const double dist = (x - model.centroids.row(j)).norm();
  return covering_probability_at(model.tails[static_cast<std::size_t>(j)], dist);
}

std::vector<int> assign_labels(const ClusterModel& model, const Matrix& data) {
  if (model.kind == AlgorithmKind::Plain) {
    return assign_groups(data, model.centroids);
  }
  if (static_cast<std::size_t>(model.k()) != model.tails.size()) {
    throw std::invalid_argument("assign_labels: model has no fitted tails");
  }
  const Eigen::Index n = data.rows();
  const int k = model.k();
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    int arg = 0;
    double best_p = -1.0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int j = 0; j < k; ++j) {
      const double d = (data.row(i) - model.centroids.row(j)).norm();
      const double p = covering_probability_at(model.tails[static_cast<std::size_t>(j)], d);
      // Ties on probability (saturated rows included) break to the nearest
      // centroid, then to the lowest index.
      if (p > best_p || (p == best_p && d < best_d)) {
        best_p = p;
        best_d = d;
        arg = j;
      }
    }
    labels[static_cast<std::size_t>(i)] = arg;
  }
  return labels;
}

Matrix update_centroids(const Matrix& data, std::vector<int>& labels, int k) {
  const Eigen::Index n = data.rows();
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw std::invalid_argument("update_centroids: labels size mismatch");
  }
  if (k < 1) throw std::invalid_argument("update_centroids requires k >= 1");
  for (const int l : labels) {
    if (l < 0 || l >= k) {
      throw std::invalid_argument("update_centroids: label out of range");
    }
  }

  Matrix sums = Matrix::Zero(k, data.cols());
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    sums.row(labels[static_cast<std::size_t>(i)]) += data.row(i);
    ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
  }
  Matrix centroids(k, data.cols());
  for (int j = 0; j < k; ++j) {
    if (counts[static_cast<std::size_t>(j)] > 0) {
      centroids.row(j) = sums.row(j) / static_cast<double>(counts[static_cast<std::size_t>(j)]);
    }
  }

  for (int j = 0; j < k; ++j) {
    if (counts[static_cast<std::size_t>(j)] > 0) continue;
    // Reseed at the sample farthest from its own centroid, among clusters
    // that can spare a member.
    Eigen::Index far = -1;
    double far_d = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int owner = labels[static_cast<std::size_t>(i)];
      if (counts[static_cast<std::size_t>(owner)] < 2) continue;
      const double d = (data.row(i) - centroids.row(owner)).norm();
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far < 0) {
      throw NumericalError("cannot reseed empty cluster " + std::to_string(j));
    }
    const int donor = labels[static_cast<std::size_t>(far)];
    sums.row(donor) -= data.row(far);
    --counts[static_cast<std::size_t>(donor)];
    centroids.row(donor) = sums.row(donor) / static_cast<double>(counts[static_cast<std::size_t>(donor)]);
    labels[static_cast<std::size_t>(far)] = j;
    sums.row(j) = data.row(far);
    counts[static_cast<std::size_t>(j)] = 1;
    centroids.row(j) = data.row(far);
  }
  return centroids;
}

double kmeans_objective(const Matrix& data, std::span<const int> labels,
                        const Matrix& centroids) {
  if (static_cast<Eigen::Index>(labels.size()) != data.rows()) {
    throw std::invalid_argument("kmeans_objective: labels size mismatch");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    total += (data.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return total;
}

double objective_j_prime(const ClusterModel& model, const Matrix& data,
                         std::span<const int> labels) {
  if (model.kind == AlgorithmKind::Plain) {
    throw std::logic_error("objective_j_prime is undefined for plain k-means models");
  }
  if (static_cast<Eigen::Index>(labels.size()) != data.rows()) {
    throw std::invalid_argument("objective_j_prime: labels size mismatch");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const int j = labels[static_cast<std::size_t>(i)];
    const double d = (data.row(i) - model.centroids.row(j)).norm();
    total -= covering_probability_at(model.tails[static_cast<std::size_t>(j)], d);
  }
  return total;
}

namespace {

Matrix initial_centroids(const Matrix& data, const RunConfig& cfg, Rng& rng) {
  return cfg.init == InitMethod::Random ? init_random(data, cfg.k, rng)
                                        : init_kmeanspp(data, cfg.k, rng);
}

}  // namespace

ClusterOutcome lloyd_kmeans(const Matrix& data, const RunConfig& cfg) {
  check_run_inputs(data, cfg.k);
  const auto t0 = Clock::now();
  Rng rng(cfg.seed);

  ClusterOutcome out;
  Matrix centroids = initial_centroids(data, cfg, rng);
  std::vector<int> labels;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const auto it0 = Clock::now();
    labels = assign_groups(data, centroids);
    const Matrix before = centroids;
    centroids = update_centroids(data, labels, cfg.k);
    out.objective_trace.push_back(kmeans_objective(data, labels, centroids));
    out.iterations = it;
    out.timings.per_iteration.push_back({0.0, seconds_since(it0)});
    if (max_centroid_movement(before, centroids) <= cfg.tol) break;
  }

  out.model = {std::move(centroids), {}, AlgorithmKind::Plain};
  out.labels = std::move(labels);
  out.timings.total_seconds = seconds_since(t0);
  return out;
}

namespace {

ClusterOutcome run_evt_kmeans(const Matrix& data, const RunConfig& cfg,
                              AlgorithmKind kind) {
  check_run_inputs(data, cfg.k);
  const auto t0 = Clock::now();
  Rng rng(cfg.seed);

  ClusterOutcome out;
  Matrix centroids = initial_centroids(data, cfg, rng);
  std::vector<TailFit> tails;
  std::vector<int> labels;

  for (int it = 1; it <= cfg.max_iter; ++it) {
    const auto it0 = Clock::now();
    double mle_seconds = 0.0;

    const std::vector<int> groups = assign_groups(data, centroids);
    tails.assign(static_cast<std::size_t>(cfg.k), TailFit{});
    for (int j = 0; j < cfg.k; ++j) {
      TailFit& tail = tails[static_cast<std::size_t>(j)];
      try {
        std::vector<double> values =
            neg_out_of_group_distances(data, centroids.row(j), groups, j);
        if (kind == AlgorithmKind::Gev) {
          TailSample ts = block_maxima(std::move(values), cfg.bmm, rng);
          const auto f0 = Clock::now();
          const FitReport<GevParams> rep = fit_gev(ts.values, cfg.fit);
          mle_seconds += seconds_since(f0);
          tail.family = TailFamily::Gev;
          tail.params = rep.params;
          tail.fit = {rep.neg_log_lik, rep.converged, rep.evals, rep.fallback_used};
          tail.sample = std::move(ts.values);
        } else {
          TailSample ts = pot_excesses(values, cfg.pot);
          const auto f0 = Clock::now();
          const FitReport<GpdParams> rep = fit_gpd(ts.values, cfg.fit);
          mle_seconds += seconds_since(f0);
          tail.family = TailFamily::Gpd;
          tail.params = rep.params;
          tail.threshold = ts.threshold;
          tail.fit = {rep.neg_log_lik, rep.converged, rep.evals, rep.fallback_used};
          tail.sample = std::move(ts.values);
        }
      } catch (const EmptyTailError&) {
        tail = TailFit{};  // Distance fallback for this iteration
      }
    }

    ClusterModel model{std::move(centroids), std::move(tails), kind};
    labels = assign_labels(model, data);
    out.objective_trace.push_back(objective_j_prime(model, data, labels));
    centroids = std::move(model.centroids);
    tails = std::move(model.tails);

    const Matrix before = centroids;
    centroids = update_centroids(data, labels, cfg.k);
    out.iterations = it;
    const double iter_seconds = seconds_since(it0);
    out.timings.per_iteration.push_back({mle_seconds, iter_seconds - mle_seconds});
    out.timings.mle_total_seconds += mle_seconds;
    if (max_centroid_movement(before, centroids) <= cfg.tol) break;
  }

  out.model = {std::move(centroids), std::move(tails), kind};
  out.labels = std::move(labels);
  out.timings.total_seconds = seconds_since(t0);
  return out;
}

}  // namespace

ClusterOutcome gev_kmeans(const Matrix& data, const RunConfig& cfg) {
  return run_evt_kmeans(data, cfg, AlgorithmKind::Gev);
}

ClusterOutcome gpd_kmeans(const Matrix& data, const RunConfig& cfg) {
  return run_evt_kmeans(data, cfg, AlgorithmKind::Gpd);
}

}  // namespace evkmeans
