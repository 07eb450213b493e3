#pragma once

#include <span>
#include <vector>

#include "evkmeans/rng.hpp"
#include "evkmeans/types.hpp"

namespace evkmeans {

struct BmmConfig {
  int block_size = 16;
};

struct PotConfig {
  double alpha = 0.2;  // fraction of values kept above the threshold
};

struct TailSample {
  std::vector<double> values;
  double threshold = 0.0;  // POT threshold u; 0 for block maxima
  std::size_t count() const { return values.size(); }
};

// Nearest-centroid group of every sample; ties go to the lowest index.
std::vector<int> assign_groups(const Matrix& data, const Matrix& centroids);

// Negated distances from centroid j to every sample outside group j, in
// sample order. Throws EmptyTailError when every sample belongs to group j.
std::vector<double> neg_out_of_group_distances(const Matrix& data,
                                               const RowVec& centroid,
                                               const std::vector<int>& groups,
                                               int j);

// Shuffles the values, splits them into ceil(len / block_size) consecutive
// blocks (last block may be short), and returns the per-block maxima.
TailSample block_maxima(std::vector<double> values, const BmmConfig& cfg, Rng& rng);

// Blocking step alone, without the shuffle.
TailSample block_maxima_ordered(std::span<const double> values, int block_size);

// Peaks-over-threshold: u is the ceil(alpha * len)-th largest value; returns
// the strictly positive excesses v - u of all v > u, in input order. Throws
// EmptyTailError when nothing exceeds u (e.g. all values equal).
TailSample pot_excesses(std::span<const double> values, const PotConfig& cfg);

}  // namespace evkmeans
