#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evkmeans/rng.hpp"
#include "evkmeans/types.hpp"

namespace evkmeans {

struct Dataset {
  Matrix x;                            // n x d, all finite
  std::optional<std::vector<int>> y;   // class labels in 0..k-1, if known
  std::string name;
  Eigen::Index n() const { return x.rows(); }
  Eigen::Index d() const { return x.cols(); }
};

struct SynthConfig {
  int n = 1000;
  int k = 3;
  int d = 2;
  double sigma = 0.2;
  std::uint64_t seed = 0;
};

// Gaussian blobs: k centroids drawn uniformly from [-1, 1]^d, floor(n/k)
// samples per cluster with the remainder spread over the first n mod k
// clusters, isotropic N(0, sigma^2) noise. Labels are the generating cluster.
Dataset gen_synthetic(const SynthConfig& cfg);

// Appends extra_d uninformative N(0, 1) columns.
Dataset add_uninformative(const Dataset& ds, int extra_d, Rng& rng);

// LIBSVM sparse text: "label idx:val ...", 1-based indices. Unsorted indices
// are accepted; labels are remapped to 0..k-1 in encounter order. Malformed
// lines raise DataFormatError with the line number; an empty file is IoError.
Dataset load_libsvm(const std::string& path);
void save_libsvm(const Dataset& ds, const std::string& path);

// Delimited numeric text without a header; when has_labels is set the last
// column holds the class label (remapped in encounter order). Ragged rows and
// non-numeric or non-finite cells raise DataFormatError with the row number.
Dataset load_csv(const std::string& path, bool has_labels, char delimiter = ',');

// Full-precision writer; appends the label column when labels are present.
void save_csv(const Dataset& ds, const std::string& path, char delimiter = ',');

// Divides each column by its sample standard deviation (zero-variance columns
// stay untouched); does not subtract the mean unless center is set.
Dataset standardize(const Dataset& ds, bool center = false);

}  // namespace evkmeans
