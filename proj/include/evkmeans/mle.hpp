#pragma once

#include <functional>
#include <span>
#include <vector>

#include "evkmeans/distributions.hpp"

namespace evkmeans {

struct FitOptions {
  int max_evals = 2000;       // function-evaluation budget per start
  double ftol = 1e-9;         // relative spread of simplex function values
  double xtol = 1e-8;         // relative spread of simplex vertices
  int restarts = 3;           // additional perturbed starts beyond the first
  int min_samples = 5;        // below this, fits fall back to closed forms
  bool fix_gpd_location = true;  // pin GPD mu at 0 (excesses are shifted)
};

struct MinimizeResult {
  std::vector<double> x;
  double fx = 0.0;
  int evals = 0;
  bool converged = false;
};

// Nelder-Mead simplex minimization. The objective may return +infinity as an
// out-of-domain penalty; the start point itself must be finite, otherwise
// std::invalid_argument is thrown. Deterministic: no randomness anywhere.
MinimizeResult minimize(const std::function<double(const std::vector<double>&)>& f,
                        const std::vector<double>& x0, const FitOptions& opts);

template <class ParamsT>
struct FitReport {
  ParamsT params{};
  double neg_log_lik = 0.0;
  bool converged = false;
  int evals = 0;           // total across all starts
  bool fallback_used = false;
};

// Maximum-likelihood fit of a GPD to POT excesses (non-negative values).
// Fewer than min_samples values, or a failed optimization, falls back to an
// exponential fit sigma = mean(y); an all-zero sample gets sigma = kSigmaFloor.
FitReport<GpdParams> fit_gpd(std::span<const double> y, const FitOptions& opts = {});

// Maximum-likelihood fit of a GEV to block maxima. Fewer than min_samples
// values falls back to a Gumbel fit with moment-matched mu and sigma; a
// zero-variance sample gets sigma = kSigmaFloor.
FitReport<GevParams> fit_gev(std::span<const double> m, const FitOptions& opts = {});

}  // namespace evkmeans
