#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evkmeans/rng.hpp"

namespace evkmeans {

// Below this magnitude the shape parameter is treated as zero and the
// Gumbel / exponential limit forms are used.
inline constexpr double kXiEps = 1e-8;

// Smallest scale a fit is allowed to report for degenerate inputs.
inline constexpr double kSigmaFloor = 1e-8;

struct GevParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;
};

struct GpdParams {
  double mu = 0.0;
  double sigma = 1.0;
  double xi = 0.0;
};

// Closed interval of x values with non-trivial distribution mass; endpoints
// may be +-infinity.
struct Support {
  double lower = 0.0;
  double upper = 0.0;
};

// All functions throw std::invalid_argument on non-finite parameters or
// sigma <= 0. CDFs saturate to 0/1 outside the support instead of throwing;
// likelihoods return +infinity on support violations so optimizers can treat
// them as penalties.

Support gev_support(const GevParams& p);
Support gpd_support(const GpdParams& p);

double gev_cdf(const GevParams& p, double x);
double gpd_cdf(const GpdParams& p, double x);

// Natural log of the density; -infinity outside the support.
double gev_log_density(const GevParams& p, double x);
double gpd_log_density(const GpdParams& p, double x);

// Negative log-likelihood of a sample; +infinity if any point violates the
// support. Throws on an empty sample.
double gev_neg_log_likelihood(const GevParams& p, std::span<const double> m);
double gpd_neg_log_likelihood(const GpdParams& p, std::span<const double> y);

// Inverse CDF; q must lie strictly inside (0, 1).
double gev_quantile(const GevParams& p, double q);
double gpd_quantile(const GpdParams& p, double q);

// Inverse-transform sampling, deterministic given the rng state.
std::vector<double> sample_gev(const GevParams& p, std::size_t n, Rng& rng);
std::vector<double> sample_gpd(const GpdParams& p, std::size_t n, Rng& rng);

}  // namespace evkmeans
