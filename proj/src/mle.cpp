#include "evkmeans/mle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace evkmeans {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEulerGamma = 0.57721566490153286;
constexpr double kPi = 3.14159265358979323846;

double sample_mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_sd(std::span<const double> v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

MinimizeResult minimize(const std::function<double(const std::vector<double>&)>& f,
                        const std::vector<double>& x0, const FitOptions& opts) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("minimize requires a non-empty start point");

  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? kInf : v;
  };

  std::vector<std::vector<double>> vx(n + 1, x0);
  std::vector<double> fv(n + 1);
  fv[0] = eval(x0);
  if (!std::isfinite(fv[0])) {
    throw std::invalid_argument("minimize requires a finite objective at the start point");
  }
  for (std::size_t i = 0; i < n; ++i) {
    vx[i + 1][i] += (x0[i] != 0.0) ? 0.05 * x0[i] : 0.00025;
    fv[i + 1] = eval(vx[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto resort = [&] {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
  };

  // Standard coefficients: reflection, expansion, contraction, shrink.
  constexpr double ka = 1.0, kg = 2.0, kr = 0.5, ks = 0.5;

  bool converged = false;
  const int budget = std::max(opts.max_evals, static_cast<int>(n) + 2);
  while (true) {
    resort();
    const std::size_t best = order[0];
    const std::size_t worst = order[n];
    const std::size_t second = order[n - 1];

    double fspread = fv[worst] - fv[best];
    double xspread = 0.0;
    double xscale = 1.0;
    for (std::size_t d = 0; d < n; ++d) {
      xscale = std::max(xscale, std::abs(vx[best][d]));
      for (std::size_t i = 1; i <= n; ++i) {
        xspread = std::max(xspread, std::abs(vx[order[i]][d] - vx[best][d]));
      }
    }
    if (std::isfinite(fspread) &&
        fspread <= opts.ftol * (1.0 + std::abs(fv[best])) &&
        xspread <= opts.xtol * xscale) {
      converged = true;
      break;
    }
    // A full iteration needs at most n + 2 evaluations (reflect + contract +
    // shrink); stop early rather than overshoot the budget.
    if (evals + static_cast<int>(n) + 2 > budget) break;

    std::vector<double> cen(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < n; ++d) cen[d] += vx[i][d];
    }
    for (double& c : cen) c /= static_cast<double>(n);

    auto along = [&](double t) {
      // Point cen + t * (cen - worst vertex).
      std::vector<double> p(n);
      for (std::size_t d = 0; d < n; ++d) p[d] = cen[d] + t * (cen[d] - vx[worst][d]);
      return p;
    };

    const std::vector<double> xr = along(ka);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      const std::vector<double> xe = along(ka * kg);
      const double fe = eval(xe);
      if (fe < fr) {
        vx[worst] = xe;
        fv[worst] = fe;
      } else {
        vx[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second]) {
      vx[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    bool shrink = false;
    if (fr < fv[worst]) {
      const std::vector<double> xc = along(ka * kr);
      const double fc = eval(xc);
      if (fc <= fr) {
        vx[worst] = xc;
        fv[worst] = fc;
      } else {
        shrink = true;
      }
    } else {
      const std::vector<double> xc = along(-kr);
      const double fc = eval(xc);
      if (fc < fv[worst]) {
        vx[worst] = xc;
        fv[worst] = fc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t idx = order[i];
        for (std::size_t d = 0; d < n; ++d) {
          vx[idx][d] = vx[best][d] + ks * (vx[idx][d] - vx[best][d]);
        }
        fv[idx] = eval(vx[idx]);
      }
    }
  }

  resort();
  return {vx[order[0]], fv[order[0]], evals, converged};
}

namespace {

struct StartPoint {
  double sigma_scale;
  double xi;
};

// Start 0 keeps the moment scale; later entries perturb scale and shape
// deterministically. xi = 0 is always a feasible repair since the
// Gumbel/exponential limits have unbounded upper support.
constexpr StartPoint kStartTable[] = {
    {1.0, 0.1},  {0.5, -0.1}, {2.0, 0.3},  {1.0, 0.0},
    {0.25, 0.05}, {4.0, 0.2}, {0.5, -0.25}, {8.0, 0.5},
};
constexpr int kStartTableSize = static_cast<int>(std::size(kStartTable));

}  // namespace

FitReport<GpdParams> fit_gpd(std::span<const double> y, const FitOptions& opts) {
  if (y.empty()) throw std::invalid_argument("fit_gpd requires a non-empty sample");
  const double mean = sample_mean(y);
  const double maxv = *std::max_element(y.begin(), y.end());

  auto fallback = [&](double sigma) {
    FitReport<GpdParams> rep;
    rep.params = {0.0, std::max(sigma, kSigmaFloor), 0.0};
    rep.neg_log_lik = gpd_neg_log_likelihood(rep.params, y);
    rep.fallback_used = true;
    return rep;
  };

  if (maxv <= 0.0) return fallback(kSigmaFloor);
  if (static_cast<int>(y.size()) < opts.min_samples) return fallback(mean);

  const double sigma0 = std::max(mean, kSigmaFloor);
  const bool free_mu = !opts.fix_gpd_location;
  const double mu0 = free_mu ? std::min(0.0, *std::min_element(y.begin(), y.end())) : 0.0;

  auto objective = [&](const std::vector<double>& v) {
    const double mu = free_mu ? v[0] : 0.0;
    const double sigma = v[free_mu ? 1 : 0];
    const double xi = v[free_mu ? 2 : 1];
    if (!(sigma > 0.0) || !std::isfinite(sigma) || !std::isfinite(xi) || !std::isfinite(mu)) {
      return kInf;
    }
    return gpd_neg_log_likelihood({mu, sigma, xi}, y);
  };

  const int starts = std::min(1 + std::max(opts.restarts, 0), kStartTableSize);
  int total_evals = 0;
  MinimizeResult best;
  best.fx = kInf;
  for (int s = 0; s < starts; ++s) {
    std::vector<double> x0;
    if (free_mu) x0.push_back(mu0);
    x0.push_back(sigma0 * kStartTable[s].sigma_scale);
    x0.push_back(kStartTable[s].xi);
    ++total_evals;
    if (!std::isfinite(objective(x0))) {
      x0.back() = 0.0;  // Gumbel-limit repair: always finite for sigma > 0
      ++total_evals;
      if (!std::isfinite(objective(x0))) continue;
    }
    const MinimizeResult r = minimize(objective, x0, opts);
    total_evals += r.evals;
    if (r.fx < best.fx || (r.fx == best.fx && !best.converged && r.converged)) {
      best = r;
    }
  }
  if (!std::isfinite(best.fx)) {
    auto rep = fallback(mean);
    rep.evals = total_evals;
    return rep;
  }

  FitReport<GpdParams> rep;
  rep.params = free_mu ? GpdParams{best.x[0], best.x[1], best.x[2]}
                       : GpdParams{0.0, best.x[0], best.x[1]};
  rep.neg_log_lik = best.fx;
  rep.converged = best.converged;
  rep.evals = total_evals;
  return rep;
}

FitReport<GevParams> fit_gev(std::span<const double> m, const FitOptions& opts) {
  if (m.empty()) throw std::invalid_argument("fit_gev requires a non-empty sample");
  const double mean = sample_mean(m);
  const double sd = sample_sd(m, mean);

  if (sd == 0.0) {
    FitReport<GevParams> rep;
    rep.params = {mean, kSigmaFloor, 0.0};
    rep.neg_log_lik = gev_neg_log_likelihood(rep.params, m);
    rep.fallback_used = true;
    return rep;
  }

  // Moment matching against the Gumbel limit: mean = mu + gamma * sigma,
  // var = pi^2 sigma^2 / 6.
  const double sigma0 = std::sqrt(6.0) * sd / kPi;
  const double mu0 = mean - kEulerGamma * sigma0;

  if (static_cast<int>(m.size()) < opts.min_samples) {
    FitReport<GevParams> rep;
    rep.params = {mu0, sigma0, 0.0};
    rep.neg_log_lik = gev_neg_log_likelihood(rep.params, m);
    rep.fallback_used = true;
    return rep;
  }

  auto objective = [&](const std::vector<double>& v) {
    if (!(v[1] > 0.0) || !std::isfinite(v[0]) || !std::isfinite(v[1]) ||
        !std::isfinite(v[2])) {
      return kInf;
    }
    return gev_neg_log_likelihood({v[0], v[1], v[2]}, m);
  };

  const int starts = std::min(1 + std::max(opts.restarts, 0), kStartTableSize);
  int total_evals = 0;
  MinimizeResult best;
  best.fx = kInf;
  for (int s = 0; s < starts; ++s) {
    std::vector<double> x0 = {mu0, sigma0 * kStartTable[s].sigma_scale,
                              kStartTable[s].xi};
    ++total_evals;
    if (!std::isfinite(objective(x0))) {
      x0[2] = 0.0;
      ++total_evals;
      if (!std::isfinite(objective(x0))) continue;
    }
    const MinimizeResult r = minimize(objective, x0, opts);
    total_evals += r.evals;
    if (r.fx < best.fx || (r.fx == best.fx && !best.converged && r.converged)) {
      best = r;
    }
  }
  if (!std::isfinite(best.fx)) {
    FitReport<GevParams> rep;
    rep.params = {mu0, sigma0, 0.0};
    rep.neg_log_lik = gev_neg_log_likelihood(rep.params, m);
    rep.fallback_used = true;
    rep.evals = total_evals;
    return rep;
  }

  FitReport<GevParams> rep;
  rep.params = {best.x[0], best.x[1], best.x[2]};
  rep.neg_log_lik = best.fx;
  rep.converged = best.converged;
  rep.evals = total_evals;
  return rep;
}

}  // namespace evkmeans
