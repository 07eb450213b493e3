#include "evkmeans/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace evkmeans {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Remap arbitrary integer labels to 0..k-1 in encounter order.
std::vector<int> compact(std::span<const int> labels, int& k_out) {
  std::map<int, int> ids;
  std::vector<int> out;
  out.reserve(labels.size());
  for (const int l : labels) {
    const auto it = ids.emplace(l, static_cast<int>(ids.size())).first;
    out.push_back(it->second);
  }
  k_out = static_cast<int>(ids.size());
  return out;
}

void check_pair(std::span<const int> truth, std::span<const int> pred) {
  if (truth.empty() || truth.size() != pred.size()) {
    throw std::invalid_argument("label vectors must be non-empty and equally sized");
  }
}

std::vector<std::vector<double>> contingency(std::span<const int> t,
                                             std::span<const int> p, int kt,
                                             int kp) {
  std::vector<std::vector<double>> c(static_cast<std::size_t>(kt),
                                     std::vector<double>(static_cast<std::size_t>(kp), 0.0));
  for (std::size_t i = 0; i < t.size(); ++i) {
    c[static_cast<std::size_t>(t[i])][static_cast<std::size_t>(p[i])] += 1.0;
  }
  return c;
}

double comb2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) throw std::invalid_argument("hungarian requires a non-empty matrix");
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("hungarian requires a square matrix");
    }
    for (const double v : row) {
      if (!std::isfinite(v)) {
        throw std::invalid_argument("hungarian requires finite costs");
      }
    }
  }

  // Shortest-augmenting-path formulation with row/column potentials, 1-based.
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, kInf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> match(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j) {
    if (p[static_cast<std::size_t>(j)] > 0) {
      match[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
    }
  }
  return match;
}

double acc(std::span<const int> truth, std::span<const int> pred) {
  check_pair(truth, pred);
  int kt = 0, kp = 0;
  const std::vector<int> t = compact(truth, kt);
  const std::vector<int> p = compact(pred, kp);
  const int k = std::max(kt, kp);
  const auto counts = contingency(t, p, kt, kp);

  std::vector<std::vector<double>> cost(static_cast<std::size_t>(k),
                                        std::vector<double>(static_cast<std::size_t>(k), 0.0));
  for (int a = 0; a < kt; ++a) {
    for (int b = 0; b < kp; ++b) {
      cost[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          -counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
  }
  const std::vector<int> match = hungarian(cost);
  double hit = 0.0;
  for (int a = 0; a < kt; ++a) {
    const int b = match[static_cast<std::size_t>(a)];
    if (b < kp) hit += counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  }
  return hit / static_cast<double>(truth.size());
}

double ari(std::span<const int> truth, std::span<const int> pred) {
  check_pair(truth, pred);
  int kt = 0, kp = 0;
  const std::vector<int> t = compact(truth, kt);
  const std::vector<int> p = compact(pred, kp);
  const auto counts = contingency(t, p, kt, kp);

  double index = 0.0;
  for (const auto& row : counts) {
    for (const double nij : row) index += comb2(nij);
  }
  double sum_rows = 0.0;
  for (const auto& row : counts) {
    double a = 0.0;
    for (const double nij : row) a += nij;
    sum_rows += comb2(a);
  }
  double sum_cols = 0.0;
  for (int b = 0; b < kp; ++b) {
    double col = 0.0;
    for (int a = 0; a < kt; ++a) col += counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    sum_cols += comb2(col);
  }
  const double total = comb2(static_cast<double>(truth.size()));
  const double expected = sum_rows * sum_cols / total;
  const double maximum = 0.5 * (sum_rows + sum_cols);
  const double denom = maximum - expected;
  // Zero denominator only happens when both partitions are trivial (all one
  // cluster, or all singletons), in which case they are identical.
  if (denom == 0.0) return 1.0;
  return (index - expected) / denom;
}

double nmi(std::span<const int> truth, std::span<const int> pred) {
  check_pair(truth, pred);
  int kt = 0, kp = 0;
  const std::vector<int> t = compact(truth, kt);
  const std::vector<int> p = compact(pred, kp);
  const auto counts = contingency(t, p, kt, kp);
  const double n = static_cast<double>(truth.size());

  std::vector<double> row_sum(static_cast<std::size_t>(kt), 0.0);
  std::vector<double> col_sum(static_cast<std::size_t>(kp), 0.0);
  for (int a = 0; a < kt; ++a) {
    for (int b = 0; b < kp; ++b) {
      row_sum[static_cast<std::size_t>(a)] += counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      col_sum[static_cast<std::size_t>(b)] += counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
  }
  double ht = 0.0;
  for (const double r : row_sum) {
    if (r > 0.0) ht -= (r / n) * std::log(r / n);
  }
  double hp = 0.0;
  for (const double c : col_sum) {
    if (c > 0.0) hp -= (c / n) * std::log(c / n);
  }
  double mi = 0.0;
  for (int a = 0; a < kt; ++a) {
    for (int b = 0; b < kp; ++b) {
      const double nij = counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (nij <= 0.0) continue;
      mi += (nij / n) * std::log(nij * n / (row_sum[static_cast<std::size_t>(a)] *
                                            col_sum[static_cast<std::size_t>(b)]));
    }
  }
  const double denom = 0.5 * (ht + hp);
  if (denom <= 0.0) return 0.0;
  return std::clamp(mi / denom, 0.0, 1.0);
}

double silhouette(const Matrix& data, std::span<const int> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != data.rows() || labels.empty()) {
    throw std::invalid_argument("silhouette: labels must match the data rows");
  }
  int k = 0;
  const std::vector<int> l = compact(labels, k);
  if (k < 2) return 0.0;

  const Eigen::Index n = data.rows();
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);
  for (const int c : l) ++counts[static_cast<std::size_t>(c)];

  double total = 0.0;
  std::vector<double> cluster_sum(static_cast<std::size_t>(k), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::fill(cluster_sum.begin(), cluster_sum.end(), 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      cluster_sum[static_cast<std::size_t>(l[static_cast<std::size_t>(j)])] +=
          (data.row(i) - data.row(j)).norm();
    }
    const int own = l[static_cast<std::size_t>(i)];
    const Eigen::Index own_count = counts[static_cast<std::size_t>(own)];
    if (own_count < 2) continue;  // singleton scores 0
    const double a = cluster_sum[static_cast<std::size_t>(own)] / static_cast<double>(own_count - 1);
    double b = kInf;
    for (int c = 0; c < k; ++c) {
      if (c == own || counts[static_cast<std::size_t>(c)] == 0) continue;
      b = std::min(b, cluster_sum[static_cast<std::size_t>(c)] /
                          static_cast<double>(counts[static_cast<std::size_t>(c)]));
    }
    const double m = std::max(a, b);
    if (m > 0.0) total += (b - a) / m;
  }
  return total / static_cast<double>(n);
}

QqDiagnostic qq_diagnostic(std::span<const double> samples, const TailFit& tail) {
  if (samples.size() < 3) {
    throw std::invalid_argument("qq_diagnostic requires at least 3 samples");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  QqDiagnostic out;
  out.points.reserve(sorted.size());
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double q = (static_cast<double>(i) + 0.5) / n;
    double theo = 0.0;
    switch (tail.family) {
      case TailFamily::Gev:
        theo = gev_quantile(std::get<GevParams>(tail.params), q);
        break;
      case TailFamily::Gpd:
        theo = gpd_quantile(std::get<GpdParams>(tail.params), q);
        break;
      case TailFamily::Distance:
        throw std::invalid_argument("qq_diagnostic requires a fitted gev or gpd tail");
    }
    out.points.emplace_back(sorted[i], theo);
  }

  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : out.points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& [x, y] : out.points) {
    sxx += (x - mx) * (x - mx);
    syy += (y - my) * (y - my);
    sxy += (x - mx) * (y - my);
  }
  out.correlation = (sxx > 0.0 && syy > 0.0) ? sxy / std::sqrt(sxx * syy) : 0.0;
  return out;
}

}  // namespace evkmeans
