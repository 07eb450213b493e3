#include "evkmeans/tail.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "evkmeans/errors.hpp"

namespace evkmeans {

std::vector<int> assign_groups(const Matrix& data, const Matrix& centroids) {
  if (centroids.rows() < 1) {
    throw std::invalid_argument("assign_groups requires at least one centroid");
  }
  if (data.cols() != centroids.cols()) {
    throw std::invalid_argument("assign_groups: dimension mismatch between data and centroids");
  }
  const Eigen::Index n = data.rows();
  const Eigen::Index k = centroids.rows();
  std::vector<int> groups(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = (data.row(i) - centroids.row(0)).squaredNorm();
    int arg = 0;
    for (Eigen::Index j = 1; j < k; ++j) {
      const double d2 = (data.row(i) - centroids.row(j)).squaredNorm();
      if (d2 < best) {
        best = d2;
        arg = static_cast<int>(j);
      }
    }
    groups[static_cast<std::size_t>(i)] = arg;
  }
  return groups;
}

std::vector<double> neg_out_of_group_distances(const Matrix& data,
                                               const RowVec& centroid,
                                               const std::vector<int>& groups,
                                               int j) {
  if (static_cast<Eigen::Index>(groups.size()) != data.rows()) {
    throw std::invalid_argument("neg_out_of_group_distances: groups size mismatch");
  }
  if (data.cols() != centroid.cols()) {
    throw std::invalid_argument("neg_out_of_group_distances: dimension mismatch");
  }
  std::vector<double> out;
  out.reserve(groups.size());
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    if (groups[static_cast<std::size_t>(i)] == j) continue;
    out.push_back(-(data.row(i) - centroid).norm());
  }
  if (out.empty()) {
    throw EmptyTailError("every sample belongs to group " + std::to_string(j));
  }
  return out;
}

TailSample block_maxima(std::vector<double> values, const BmmConfig& cfg, Rng& rng) {
  rng.shuffle(values);
  return block_maxima_ordered(values, cfg.block_size);
}

TailSample block_maxima_ordered(std::span<const double> values, int block_size) {
  if (values.empty()) {
    throw std::invalid_argument("block_maxima requires a non-empty sample");
  }
  if (block_size < 1) {
    throw std::invalid_argument("block_maxima requires block_size >= 1");
  }
  const std::size_t s = static_cast<std::size_t>(block_size);
  TailSample out;
  out.values.reserve((values.size() + s - 1) / s);
  for (std::size_t start = 0; start < values.size(); start += s) {
    const std::size_t stop = std::min(start + s, values.size());
    out.values.push_back(*std::max_element(values.begin() + static_cast<std::ptrdiff_t>(start),
                                           values.begin() + static_cast<std::ptrdiff_t>(stop)));
  }
  return out;
}

TailSample pot_excesses(std::span<const double> values, const PotConfig& cfg) {
  if (values.empty()) {
    throw std::invalid_argument("pot_excesses requires a non-empty sample");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
    throw std::invalid_argument("pot_excesses requires alpha in (0, 1)");
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  // Rank of the threshold, 1-based from the top. The tiny epsilon absorbs
  // floating-point noise in alpha * len when the product is a whole number.
  const double raw = cfg.alpha * static_cast<double>(values.size());
  std::size_t rank = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  const double u = sorted[rank - 1];

  TailSample out;
  out.threshold = u;
  for (const double v : values) {
    if (v > u) out.values.push_back(v - u);
  }
  if (out.values.empty()) {
    throw EmptyTailError("no value exceeds the POT threshold");
  }
  return out;
}

}  // namespace evkmeans
